"""Closed-form quasiparticle-picture entropies and saturation-density fits.

Blocks are measured in sites, times in the units of the quench
Hamiltonian; every formula is linear in sigma and depends on t only
through the front displacement s = v t.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import linregress

from entlinks.exceptions import FrontError
from entlinks.models.common import StateKind
from entlinks.models.entanglement import EntropyTable
from entlinks.models.fronts import QPPParams

logger = logging.getLogger(__name__)

BRIDGE_SIGMA = math.log(2.0)


def ring_distance(x: float, N: float) -> float:
    """Distance from x to the nearest multiple of N."""
    r = math.fmod(x, N)
    if r < 0:
        r += N
    return min(r, N - r)


def _check_time(t: float) -> None:
    if not math.isfinite(t) or t < 0:
        raise FrontError(f"time must be finite and non-negative, got {t}")


def qpp_short_range_entropy(l: float, t: float, p: QPPParams, revivals: bool = False) -> float:
    """Entropy of a block of l sites after a quench from a short-range state.

    Grows as sigma v t until it saturates at sigma l. With revivals the
    fronts wrap around the ring and the entropy falls back to zero at
    v t = N.
    """
    if not 0 <= l <= p.N:
        raise FrontError(f"block size must lie in [0, {p.N}], got {l}")
    _check_time(t)
    s = p.v * t
    if revivals:
        return p.sigma * min(l, p.N - l, ring_distance(s, p.N))
    return p.sigma * min(s, l)


def rainbow_lateral_entropy(a: float, t: float, p: QPPParams) -> float:
    """Entropy of the edge block [0, a) of a quenched rainbow chain.

    Constant until v t = N - 2a, then linear decrease to zero at v t = N.
    Blocks with a > N/2 behave as their complements.
    """
    if not 0 <= a <= p.N:
        raise FrontError(f"lateral block size must lie in [0, {p.N}], got {a}")
    _check_time(t)
    a = min(a, p.N - a)
    return p.sigma * min(a, max(0.0, (p.N - p.v * t) / 2.0))


def rainbow_central_entropy(a: float, t: float, p: QPPParams) -> float:
    """Entropy of the centred block [a, N - a) of a quenched rainbow chain.

    The two anti-diagonal fronts sweep the block from both sides, so the
    entropy grows as sigma v t, twice the rate at which lateral blocks
    lose theirs. It plateaus at sigma times the smaller of the block and
    its complement, and decreases to zero at v t = N.
    """
    if not 0 <= a <= p.N / 2:
        raise FrontError(f"central block offset must lie in [0, {p.N / 2}], got {a}")
    _check_time(t)
    s = p.v * t
    return p.sigma * max(0.0, min(s, 2 * a, p.N - 2 * a, p.N - s))


def bridge_entropy(l: float, t: float, p: QPPParams, revivals: bool = False) -> float:
    """Entropy of a block of l sites after quenching the bridge state.

    Starts at sigma l and decreases linearly from v t = N/2 - l, reaching
    zero at v t = N/2. Sizes above N/2 map to their complement.
    """
    if not 0 <= l <= p.N:
        raise FrontError(f"block size must lie in [0, {p.N}], got {l}")
    _check_time(t)
    s = p.v * t
    if revivals:
        return p.sigma * min(l, p.N - l, ring_distance(p.N / 2 + s, p.N))
    l = min(l, p.N - l)
    return p.sigma * max(0.0, min(l, p.N / 2 - s))


def fit_sigma(
    kind: StateKind,
    tables: Sequence[EntropyTable],
    v: float = 2.0,
) -> float:
    """Saturation entropy density from measured entropy tables.

    bridge: ln 2 exactly. rainbow: least squares through the origin of
    the t=0 lateral entropies S[0, l], l <= N/2. dimer: slope of S[0, l]
    against l over the blocks already saturated at the last time
    (l <= v t, l <= N/2).
    """
    if kind == StateKind.BRIDGE:
        return BRIDGE_SIGMA
    if not tables:
        raise FrontError("need at least one entropy table to fit sigma")

    if kind == StateKind.RAINBOW:
        table = min(tables, key=lambda tab: tab.t)
        l = np.arange(1, table.N // 2 + 1)
        S = table.S[0, l]
        sigma = float(np.dot(l, S) / np.dot(l, l))
    elif kind == StateKind.DIMER:
        table = max(tables, key=lambda tab: tab.t)
        cap = int(min(v * table.t, table.N // 2))
        l = np.arange(1, cap + 1)
        if l.size < 2:
            raise FrontError(
                f"no saturated blocks at t={table.t}; need v t >= 2 to fit sigma"
            )
        sigma = float(linregress(l, table.S[0, l]).slope)
    else:
        raise FrontError(f"unknown state kind: {kind}")

    logger.info("Fitted sigma=%.6f for %s at t=%g", sigma, kind.value, table.t)
    return max(sigma, 0.0)
