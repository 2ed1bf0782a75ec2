"""Gaussian states: ground states, the bridge state and quench evolution.

The correlation matrix C[i, j] = <c_i^dagger c_j> is the only state
representation; a Slater determinant built from orbitals Phi (one column
per occupied orbital) has C = conj(Phi) @ Phi.T.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg

from entlinks.config import settings
from entlinks.exceptions import DegenerateGroundStateError, DimensionMismatchError
from entlinks.models.common import Boundary
from entlinks.models.lattice import ModeBasis, SingleParticleHamiltonian
from entlinks.models.state import CorrelationMatrix
from entlinks.services.lattice_service import diagonalize

logger = logging.getLogger(__name__)


def slater_correlations(orbitals: np.ndarray) -> CorrelationMatrix:
    """Correlation matrix of the Slater determinant of orthonormal orbitals."""
    orbitals = np.asarray(orbitals)
    return CorrelationMatrix(N=orbitals.shape[0], entries=orbitals.conj() @ orbitals.T)


def _sublattice_block(h: SingleParticleHamiltonian) -> np.ndarray | None:
    """Even-to-odd hopping block of an open nearest-neighbour chain, if nonsingular.

    The block is lower bidiagonal with diagonal h[2k, 2k+1]; it is
    nonsingular exactly when none of those bonds vanishes.
    """
    if h.boundary != Boundary.OPEN or h.N % 2:
        return None
    entries = h.entries
    if np.count_nonzero(entries - np.triu(np.tril(entries, 1), -1)) or np.any(np.diag(entries)):
        return None
    block = entries[0::2, 1::2]
    if not np.all(np.diag(block)):
        return None
    return block


def _chiral_ground_state(block: np.ndarray) -> CorrelationMatrix:
    """Half-filled ground state of a bipartite chain, C = (1 - sign(h))/2.

    Every negative-energy mode is filled however small its energy, so
    exponentially graded chains (rainbow) keep a well-defined ground
    state. The transpose is upper bidiagonal, which gesvd reduces
    without rounding before its relatively accurate bidiagonal QR.
    """
    U, _, Vt = scipy.linalg.svd(block.T, lapack_driver="gesvd")
    polar = (U @ Vt).T
    N = 2 * block.shape[0]
    even, odd = np.arange(0, N, 2), np.arange(1, N, 2)
    C = 0.5 * np.eye(N)
    C[np.ix_(even, odd)] = -0.5 * polar
    C[np.ix_(odd, even)] = -0.5 * polar.T
    return CorrelationMatrix(N=N, entries=C)


def ground_state_correlations(
    h: SingleParticleHamiltonian,
    n_particles: int | None = None,
    allow_degenerate: bool = False,
    basis: ModeBasis | None = None,
) -> CorrelationMatrix:
    """Fill the n lowest modes of h (half filling by default).

    Raises DegenerateGroundStateError when the gap between the last
    occupied and first empty level is below settings.gap_tolerance,
    unless allow_degenerate is set.
    """
    n = h.N // 2 if n_particles is None else n_particles
    if not 0 <= n <= h.N:
        raise ValueError(f"n_particles must lie in [0, {h.N}], got {n}")

    if basis is None and 2 * n == h.N:
        block = _sublattice_block(h)
        if block is not None:
            return _chiral_ground_state(block)

    basis = basis or diagonalize(h)
    if 0 < n < h.N:
        gap = float(basis.energies[n] - basis.energies[n - 1])
        if gap <= settings.gap_tolerance:
            if not allow_degenerate:
                raise DegenerateGroundStateError(gap, n)
            logger.warning("Filling n=%d of a degenerate level (gap %.3e)", n, gap)

    return slater_correlations(basis.modes[:, :n])


def bridge_orbitals(N: int) -> np.ndarray:
    """Orbitals (c_k^dagger + (-1)^k c_{k+N/2}^dagger)/sqrt(2), k = 1..N/2."""
    if N < 4 or N % 4:
        raise ValueError(f"bridge state needs N divisible by 4, got N={N}")
    half = N // 2
    k = np.arange(half)
    orbitals = np.zeros((N, half))
    orbitals[k, k] = 1.0
    # k is 0-based here, so (-1)^(k+1) is the sign for label k+1
    orbitals[k + half, k] = (-1.0) ** (k + 1)
    return orbitals / np.sqrt(2.0)


def bridge_state_correlations(N: int) -> CorrelationMatrix:
    """Valence-bond state pairing site k with site k + N/2."""
    return slater_correlations(bridge_orbitals(N))


def evolve(
    C0: CorrelationMatrix,
    h: SingleParticleHamiltonian,
    t: float,
    basis: ModeBasis | None = None,
) -> CorrelationMatrix:
    """C(t) = e^{iht} C0 e^{-iht}, computed in the eigenbasis of h."""
    if C0.N != h.N:
        raise DimensionMismatchError(f"state has N={C0.N} but Hamiltonian has N={h.N}")
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    if t == 0:
        return C0

    basis = basis or diagonalize(h)
    V = basis.modes
    phases = np.exp(-1j * basis.energies * t)
    rotated = V.T @ C0.entries @ V
    rotated = rotated * np.outer(phases.conj(), phases)
    return CorrelationMatrix(N=C0.N, entries=V @ rotated @ V.T)


def evolve_many(
    C0: CorrelationMatrix,
    h: SingleParticleHamiltonian | None,
    times: Sequence[float],
    threads: int | None = None,
) -> list[CorrelationMatrix]:
    """Evolve to every time of a grid; h=None leaves the state unchanged."""
    if h is None:
        return [C0 for _ in times]
    basis = diagonalize(h)
    workers = threads or settings.threads
    if workers <= 1:
        return [evolve(C0, h, t, basis) for t in times]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: evolve(C0, h, t, basis), times))
