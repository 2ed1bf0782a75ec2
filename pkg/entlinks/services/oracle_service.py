"""Brute-force Fock-space oracle for block entropies.

Builds the many-body state explicitly (Jordan-Wigner operators on 2^N
amplitudes), evolves it with the many-body Hamiltonian and traces out the
complement of a block. Independent of the correlation-matrix machinery, so
it is used to validate it.
"""

import logging
from collections.abc import Iterable
from functools import lru_cache

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.sparse as sps
from scipy.sparse.linalg import expm_multiply
from scipy.special import xlogy

from entlinks.config import settings
from entlinks.exceptions import DegenerateGroundStateError, DimensionMismatchError, OracleInputError
from entlinks.models.common import Boundary
from entlinks.models.lattice import SingleParticleHamiltonian
from entlinks.models.state import CorrelationMatrix
from entlinks.services import entanglement_service, gaussian_service, lattice_service

logger = logging.getLogger(__name__)

# Eigenvalues of a pure Slater state must sit this close to 0 or 1.
PROJECTOR_TOLERANCE = 1e-8

_SIGMA_MINUS = sps.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_PARITY = sps.csr_matrix(np.diag([1.0, -1.0]))
_IDENTITY = sps.identity(2, format="csr")


@lru_cache(maxsize=16)
def annihilation_operators(N: int) -> tuple[sps.csr_matrix, ...]:
    """Jordan-Wigner c_i on the 2^N Fock space, site 0 most significant."""
    ops = []
    for i in range(N):
        factors = [_PARITY] * i + [_SIGMA_MINUS] + [_IDENTITY] * (N - i - 1)
        op = factors[0]
        for factor in factors[1:]:
            op = sps.kron(op, factor, format="csr")
        ops.append(op)
    return tuple(ops)


def many_body_hamiltonian(h: SingleParticleHamiltonian) -> sps.csr_matrix:
    """H = sum_ij h_ij c_i^dagger c_j."""
    ops = annihilation_operators(h.N)
    H = sps.csr_matrix((2**h.N, 2**h.N), dtype=complex)
    rows, cols = np.nonzero(h.entries)
    for i, j in zip(rows, cols):
        H = H + h.entries[i, j] * (ops[i].T @ ops[j])
    return H


def slater_orbitals(C: CorrelationMatrix) -> np.ndarray:
    """Occupied orbitals Phi with C = conj(Phi) @ Phi.T.

    Raises OracleInputError when C is not a pure number-conserving
    Slater state (eigenvalues away from 0 and 1).
    """
    nu, vectors = np.linalg.eigh(C.entries.T)
    off = np.minimum(np.abs(nu), np.abs(1.0 - nu))
    if np.max(off) > PROJECTOR_TOLERANCE:
        raise OracleInputError(
            f"correlation matrix is not a Slater projector (max deviation {np.max(off):.3e})"
        )
    return vectors[:, nu > 0.5]


def slater_state(orbitals: np.ndarray) -> np.ndarray:
    """Fock-space amplitudes of prod_k (sum_i Phi_ik c_i^dagger) |0>."""
    N = orbitals.shape[0]
    ops = annihilation_operators(N)
    psi = np.zeros(2**N, dtype=complex)
    psi[0] = 1.0
    for k in reversed(range(orbitals.shape[1])):
        psi = sum(orbitals[i, k] * (ops[i].T @ psi) for i in range(N))
    return psi / np.linalg.norm(psi)


def _reorder_signs(N: int, block: list[int]) -> np.ndarray:
    """Fermionic signs for moving the block modes in front of the rest."""
    index = np.arange(2**N)
    occupied = (index[:, None] >> (N - 1 - np.arange(N))[None, :]) & 1
    in_block = np.zeros(N, dtype=bool)
    in_block[block] = True
    # each occupied block mode passes the occupied outside modes on its left
    outside_before = np.cumsum(occupied * ~in_block, axis=1) - occupied * ~in_block
    crossings = np.sum(occupied[:, in_block] * outside_before[:, in_block], axis=1)
    return np.where(crossings % 2, -1.0, 1.0)


def _block_entropy(psi: np.ndarray, N: int, block: list[int]) -> float:
    rest = [i for i in range(N) if i not in block]
    tensor = (psi * _reorder_signs(N, block)).reshape((2,) * N)
    matrix = np.transpose(tensor, block + rest).reshape(2 ** len(block), -1)
    p = scipy.linalg.svdvals(matrix) ** 2
    return float(-np.sum(xlogy(p, p)))


def _evolve(psi: np.ndarray, H: sps.csr_matrix, t: float) -> np.ndarray:
    if t == 0:
        return psi
    if H.shape[0] <= settings.oracle_dense_dim:
        return scipy.linalg.expm(-1j * t * H.toarray()) @ psi
    return expm_multiply(-1j * t * H, psi)


def _check_size(N: int) -> None:
    if N > settings.oracle_max_sites:
        raise OracleInputError(f"oracle limited to N <= {settings.oracle_max_sites}, got N={N}")


def particle_numbers(N: int) -> np.ndarray:
    """Occupation count of every Fock basis state."""
    index = np.arange(2**N)
    return np.sum((index[:, None] >> np.arange(N)[None, :]) & 1, axis=1)


def many_body_ground_state(h: SingleParticleHamiltonian, n_particles: int | None = None) -> np.ndarray:
    """Lowest state of the many-body Hamiltonian with n particles (half filling by default).

    Raises DegenerateGroundStateError when the first excitation of the
    sector lies within settings.gap_tolerance of the ground energy.
    """
    N = h.N
    _check_size(N)
    n = N // 2 if n_particles is None else n_particles
    if not 0 <= n <= N:
        raise ValueError(f"n_particles must lie in [0, {N}], got {n}")

    sector = np.flatnonzero(particle_numbers(N) == n)
    H = many_body_hamiltonian(h)[sector][:, sector].toarray()
    energies, vectors = scipy.linalg.eigh(H)
    if energies.size > 1:
        gap = float(energies[1] - energies[0])
        if gap <= settings.gap_tolerance:
            raise DegenerateGroundStateError(gap, n)
    psi = np.zeros(2**N, dtype=complex)
    psi[sector] = vectors[:, 0]
    return psi


def bridge_fock_state(N: int) -> np.ndarray:
    """prod_k (c_k^dagger + (-1)^k c_{k+N/2}^dagger) / sqrt(2) |0>, k = 1..N/2."""
    if N < 4 or N % 4:
        raise ValueError(f"bridge state needs N divisible by 4, got N={N}")
    _check_size(N)
    ops = annihilation_operators(N)
    half = N // 2
    psi = np.zeros(2**N, dtype=complex)
    psi[0] = 1.0
    for k in range(1, half + 1):
        # label k sits on site k - 1
        psi = (ops[k - 1].T @ psi + (-1.0) ** k * (ops[k - 1 + half].T @ psi)) / np.sqrt(2.0)
    return psi


def fock_oracle_entropy(
    state: CorrelationMatrix | np.ndarray,
    quench_h: SingleParticleHamiltonian | None,
    block: Iterable[int],
    t: float = 0.0,
) -> float:
    """Von Neumann entropy (nats) of a block after evolving for time t.

    state is either a Slater correlation matrix or Fock amplitudes on the
    2^N basis, as built by many_body_ground_state or bridge_fock_state.
    """
    if isinstance(state, CorrelationMatrix):
        N = state.N
    else:
        amplitudes = np.asarray(state, dtype=complex)
        N = amplitudes.size.bit_length() - 1
        if amplitudes.ndim != 1 or amplitudes.size != 2**N:
            raise DimensionMismatchError(f"Fock state needs 2^N amplitudes, got shape {amplitudes.shape}")
    _check_size(N)
    if quench_h is not None and quench_h.N != N:
        raise DimensionMismatchError(f"state has N={N} but Hamiltonian has N={quench_h.N}")
    sites = sorted(set(int(i) for i in block))
    if not sites or sites[0] < 0 or sites[-1] >= N:
        raise ValueError(f"block must be a nonempty subset of 0..{N - 1}, got {sites}")

    if isinstance(state, CorrelationMatrix):
        psi = slater_state(slater_orbitals(state))
    else:
        psi = amplitudes / np.linalg.norm(amplitudes)
    if quench_h is not None:
        psi = _evolve(psi, many_body_hamiltonian(quench_h), t)
    return _block_entropy(psi, N, sites)


SWEEP_TIMES = (0.0, 0.5, 1.3)


def _random_block(rng: np.random.Generator, N: int, fragments: int) -> list[int]:
    """Sorted sites of `fragments` disjoint non-adjacent intervals."""
    while True:
        cuts = np.sort(rng.choice(np.arange(N + 1), size=2 * fragments, replace=False))
        intervals = list(zip(cuts[::2], cuts[1::2]))
        if all(b < c for (_, b), (c, _) in zip(intervals, intervals[1:])):
            return [i for a, b in intervals for i in range(a, b)]


def equivalence_sweep(
    sizes: Iterable[int] = (2, 4, 6),
    samples: int = 20,
    seed: int = 0,
    times: Iterable[float] = SWEEP_TIMES,
) -> pd.DataFrame:
    """Correlation-matrix entropies against the Fock oracle on random chains.

    The oracle side starts from the many-body ground state of the initial
    Hamiltonian, so the Slater ground-state construction is checked too.

    Each sample draws open-chain couplings in [0.2, 1.5] for the initial
    and the quench Hamiltonian, a contiguous block and, for N >= 4, a
    two-fragment block.
    """
    rng = np.random.default_rng(seed)
    times = tuple(times)
    rows = []
    for N in sizes:
        for sample in range(samples):
            g0 = rng.uniform(0.2, 1.5, size=N - 1)
            g1 = rng.uniform(0.2, 1.5, size=N - 1)
            h0 = lattice_service.single_particle_matrix(g0, N, Boundary.OPEN)
            h1 = lattice_service.single_particle_matrix(g1, N, Boundary.OPEN)
            C0 = gaussian_service.ground_state_correlations(h0)
            psi0 = many_body_ground_state(h0)
            blocks = [_random_block(rng, N, 1)]
            if N >= 4:
                blocks.append(_random_block(rng, N, 2))
            for t in times:
                C = gaussian_service.evolve(C0, h1, t)
                for block in blocks:
                    exact = fock_oracle_entropy(psi0, h1, block, t)
                    peschel = entanglement_service.block_entropy(C, block)
                    rows.append((N, sample, t, " ".join(map(str, block)), peschel, exact))

    frame = pd.DataFrame(rows, columns=["N", "sample", "t", "block", "S_peschel", "S_fock"])
    frame["deviation"] = (frame["S_peschel"] - frame["S_fock"]).abs()
    worst = float(frame["deviation"].max()) if len(frame) else 0.0
    logger.info("Oracle sweep: %d comparisons, max deviation %.3e", len(frame), worst)
    return frame
