"""Shared fixtures."""

import numpy as np
import pytest

from entlinks.models.common import Boundary, CouplingKind
from entlinks.models.lattice import CouplingSpec
from entlinks.models.state import CorrelationMatrix
from entlinks.services import gaussian_service, lattice_service


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale N=128 acceptance runs")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def two_site_h():
    return lattice_service.single_particle_matrix([0.5], 2, Boundary.OPEN)


@pytest.fixture
def product_state():
    return CorrelationMatrix(N=4, entries=np.diag([1.0, 0.0, 1.0, 0.0]))


@pytest.fixture
def bridge8():
    return gaussian_service.bridge_state_correlations(8)


def dimer_ground_state(N: int, delta: float = 0.5, boundary: Boundary = Boundary.OPEN) -> CorrelationMatrix:
    spec = CouplingSpec(kind=CouplingKind.DIMER, N=N, delta=delta, boundary=boundary)
    return gaussian_service.ground_state_correlations(lattice_service.hamiltonian_from_spec(spec))


def rainbow_ground_state(N: int, h: float, boundary: Boundary = Boundary.OPEN) -> CorrelationMatrix:
    spec = CouplingSpec(kind=CouplingKind.RAINBOW, N=N, h=h, boundary=boundary)
    return gaussian_service.ground_state_correlations(lattice_service.hamiltonian_from_spec(spec))


def random_complex_slater(rng: np.random.Generator, N: int, n: int) -> CorrelationMatrix:
    """Slater state of n random complex orbitals."""
    z = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    q, _ = np.linalg.qr(z)
    return gaussian_service.slater_correlations(q[:, :n])


@pytest.fixture
def dimer8():
    return dimer_ground_state(8)
