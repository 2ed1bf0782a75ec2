"""Coupling patterns, hopping matrices and their diagonalization."""

import logging
from collections.abc import Sequence

import numpy as np
import scipy.linalg

from entlinks.exceptions import DimensionMismatchError, EigensolverError
from entlinks.models.common import Boundary, CouplingKind
from entlinks.models.lattice import CouplingSpec, ModeBasis, SingleParticleHamiltonian

logger = logging.getLogger(__name__)

# Prefactor of the homogeneous quench Hamiltonian; fixes the front speed v = 2.
H0_HOPPING = 0.5

# Components below this magnitude are skipped when fixing eigenvector signs.
PHASE_TOLERANCE = 1e-12


def n_bonds(N: int, boundary: Boundary) -> int:
    """Number of hopping amplitudes for a chain of N sites."""
    return N if boundary == Boundary.PERIODIC else N - 1


def build_couplings(spec: CouplingSpec) -> np.ndarray:
    """Hopping amplitudes g_i, bond i joining sites i and i+1 (mod N).

    Bond labels in the formulas below run from 1, as in the usual
    1-based site labelling; the returned array is indexed from 0.
    """
    bonds = np.arange(1, n_bonds(spec.N, spec.boundary) + 1)

    if spec.kind == CouplingKind.HOMOGENEOUS:
        g = np.full(bonds.shape, H0_HOPPING)
    elif spec.kind == CouplingKind.DIMER:
        g = H0_HOPPING * (1.0 + (-1.0) ** bonds * spec.delta)
    elif spec.kind == CouplingKind.RAINBOW:
        half = spec.N // 2
        g = np.exp(-spec.h * (np.abs(half - bonds) - 0.5))
        g[bonds == half] = 1.0
    else:
        g = np.array(spec.values, dtype=float)

    if not np.all(np.isfinite(g)):
        raise ValueError(f"non-finite couplings for {spec.kind.value}")
    return g


def single_particle_matrix(
    g: Sequence[float], N: int, boundary: Boundary
) -> SingleParticleHamiltonian:
    """Hopping matrix with h[i, i+1] = h[i+1, i] = -g_i."""
    g = np.asarray(g, dtype=float)
    expected = n_bonds(N, boundary)
    if g.shape != (expected,):
        raise DimensionMismatchError(
            f"{boundary.value} chain of N={N} needs {expected} couplings, got {g.shape[0]}"
        )

    h = np.zeros((N, N))
    idx = np.arange(N - 1)
    h[idx, idx + 1] -= g[: N - 1]
    if boundary == Boundary.PERIODIC:
        h[N - 1, 0] -= g[N - 1]
    h = h + h.T
    return SingleParticleHamiltonian(N=N, entries=h, boundary=boundary)


def hamiltonian_from_spec(spec: CouplingSpec) -> SingleParticleHamiltonian:
    """Shortcut for single_particle_matrix(build_couplings(spec), ...)."""
    return single_particle_matrix(build_couplings(spec), spec.N, spec.boundary)


def homogeneous_hamiltonian(N: int, boundary: Boundary) -> SingleParticleHamiltonian:
    """The critical quench Hamiltonian H0."""
    spec = CouplingSpec(kind=CouplingKind.HOMOGENEOUS, N=N, boundary=boundary)
    return hamiltonian_from_spec(spec)


def _fix_signs(modes: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component of every column positive."""
    first = np.argmax(np.abs(modes) > PHASE_TOLERANCE, axis=0)
    signs = np.sign(modes[first, np.arange(modes.shape[1])])
    signs[signs == 0] = 1.0
    return modes * signs


def diagonalize(h: SingleParticleHamiltonian) -> ModeBasis:
    """Ascending energies and sign-fixed orthonormal modes."""
    try:
        energies, modes = scipy.linalg.eigh(h.entries)
    except (np.linalg.LinAlgError, ValueError) as exc:
        logger.exception("Eigensolver failed for N=%d", h.N)
        raise EigensolverError(f"eigensolver failed for N={h.N}: {exc}") from exc
    return ModeBasis(energies=energies, modes=_fix_signs(modes))
