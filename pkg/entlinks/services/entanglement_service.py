"""Block entropies, contiguous entropy tables and entanglement links."""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from entlinks.config import settings
from entlinks.exceptions import DimensionMismatchError, InvalidStateError
from entlinks.models.entanglement import ELMatrix, EntropyTable, SubdiagonalSeries
from entlinks.models.state import CorrelationMatrix

logger = logging.getLogger(__name__)

# Soft floor for links of physical states; below it a warning is logged.
NEGATIVE_LINK_FLOOR = -1e-6


def _normalize_block(block: Iterable[int], N: int) -> np.ndarray:
    sites = np.unique(np.fromiter((int(i) for i in block), dtype=int))
    if sites.size == 0:
        raise ValueError("block must not be empty")
    if sites[0] < 0 or sites[-1] >= N:
        raise ValueError(f"block sites must lie in 0..{N - 1}, got {sites.tolist()}")
    return sites


def binary_entropy(nu: np.ndarray) -> float:
    """-sum[nu ln nu + (1 - nu) ln(1 - nu)] with 0 ln 0 = 0."""
    return float(-np.sum(xlogy(nu, nu) + xlogy(1.0 - nu, 1.0 - nu)))


def _restricted_entropy(entries: np.ndarray) -> float:
    nu = scipy.linalg.eigvalsh(entries)
    tol = settings.eigenvalue_tolerance
    if nu[0] < -tol or nu[-1] > 1 + tol:
        raise InvalidStateError(
            f"block correlation eigenvalues outside [0, 1]: [{nu[0]:.3e}, {nu[-1]:.3e}]"
        )
    return binary_entropy(np.clip(nu, 0.0, 1.0))


def block_entropy(C: CorrelationMatrix, block: Iterable[int]) -> float:
    """Von Neumann entropy (nats) of a set of sites."""
    sites = _normalize_block(block, C.N)
    return _restricted_entropy(C.entries[np.ix_(sites, sites)])


def interval_entropy(C: CorrelationMatrix, a: int, b: int) -> float:
    """Entropy of the contiguous block [a, b)."""
    if not 0 <= a <= b <= C.N:
        raise ValueError(f"invalid interval [{a}, {b}) for N={C.N}")
    if a == b:
        return 0.0
    return _restricted_entropy(C.entries[a:b, a:b])


def _table_row(C: CorrelationMatrix, a: int) -> np.ndarray:
    row = np.zeros(C.N + 1)
    for b in range(a + 1, C.N + 1):
        row[b] = _restricted_entropy(C.entries[a:b, a:b])
    return row


def contiguous_entropy_table(
    C: CorrelationMatrix, t: float = 0.0, threads: int | None = None
) -> EntropyTable:
    """Entropies of all contiguous blocks [a, b), one eigensolve each."""
    workers = threads or settings.threads
    starts = range(C.N + 1)
    if workers <= 1:
        rows = [_table_row(C, a) for a in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda a: _table_row(C, a), starts))
    return EntropyTable(N=C.N, t=t, S=np.vstack(rows))


def el_matrix(table: EntropyTable) -> ELMatrix:
    """Links J_ij = (S[i,j] - S[i+1,j] - S[i,j+1] + S[i+1,j+1]) / 2 for i < j."""
    S = table.S
    second_difference = 0.5 * (S[:-1, :-1] - S[1:, :-1] - S[:-1, 1:] + S[1:, 1:])
    upper = np.triu(second_difference, 1)
    J = upper + upper.T

    lowest = float(np.min(J, initial=0.0))
    if lowest < NEGATIVE_LINK_FLOOR:
        logger.warning("Negative entanglement link %.3e at t=%g", lowest, table.t)
    return ELMatrix(N=table.N, t=table.t, J=J)


def reconstruct_entropy(J: ELMatrix, block: Iterable[int]) -> float:
    """Sum of the links crossing the boundary of a block."""
    sites = _normalize_block(block, J.N)
    outside = np.setdiff1d(np.arange(J.N), sites)
    return float(np.sum(J.J[np.ix_(sites, outside)]))


def subdiagonal_series(
    snapshots: Sequence[ELMatrix], periodic: bool = False
) -> SubdiagonalSeries:
    """Time series of the nearest-neighbour links J[i, i+1]."""
    if not snapshots:
        raise ValueError("need at least one snapshot")
    N = snapshots[0].N
    if any(s.N != N for s in snapshots):
        raise DimensionMismatchError("snapshots disagree in N")
    times = np.array([s.t for s in snapshots])
    if np.any(np.diff(times) <= 0):
        raise ValueError("snapshots must have strictly increasing times")

    idx = np.arange(N - 1)
    rows = []
    for snap in snapshots:
        links = snap.J[idx, idx + 1]
        if periodic:
            links = np.append(links, snap.J[N - 1, 0])
        rows.append(links)
    return SubdiagonalSeries(N=N, periodic=periodic, times=times, links=np.vstack(rows))
