import math

import numpy as np
import pytest

from entlinks.models.common import Boundary
from entlinks.models.entanglement import ELMatrix, EntropyTable
from entlinks.services import entanglement_service, gaussian_service, lattice_service, scaling_service


def _synthetic_table(N: int, profile) -> EntropyTable:
    S = np.zeros((N + 1, N + 1))
    for a in range(N + 1):
        for b in range(a + 1, N):
            S[a, b] = profile(b - a)
    return EntropyTable(N=N, S=S)


def test_chord_length():
    assert scaling_service.chord_length(32, 64) == pytest.approx(64 / math.pi)
    assert scaling_service.chord_length(0, 64) == 0.0
    np.testing.assert_allclose(
        scaling_service.chord_length(np.array([5, 59]), 64), scaling_service.chord_length(5, 64)
    )


def test_central_charge_of_exact_periodic_law():
    N = 64
    table = _synthetic_table(N, lambda l: math.log(scaling_service.chord_length(l, N)) / 3 + 0.7)
    c, fit = scaling_service.fit_central_charge(table, Boundary.PERIODIC)
    assert c == pytest.approx(1.0, abs=1e-10)
    assert fit.points == N // 2 - 3
    assert fit.intercept == pytest.approx(0.7)


def test_central_charge_of_exact_open_law():
    N = 64
    table = _synthetic_table(N, lambda l: math.log(2 * scaling_service.chord_length(l, N)) / 12 + 0.4)
    c, _ = scaling_service.fit_central_charge(table, Boundary.OPEN, l_min=2, l_max=20)
    assert c == pytest.approx(0.5, abs=1e-10)


def test_link_decay_of_exact_power_law():
    N = 48
    i = np.arange(N)
    d = np.abs(i[:, None] - i[None, :])
    ring = np.minimum(d, N - d)
    with np.errstate(divide="ignore"):
        J = np.where(ring > 0, 0.2 * scaling_service.chord_length(ring, N) ** -2.0, 0.0)
    alpha, prefactor, fit = scaling_service.fit_link_decay(ELMatrix(N=N, J=J))
    assert alpha == pytest.approx(-2.0, abs=1e-10)
    assert prefactor == pytest.approx(0.2, rel=1e-10)
    assert fit.r_value == pytest.approx(-1.0)


def test_link_decay_amplitude_of_lattice_critical_law():
    N = 64
    S = np.zeros((N + 1, N + 1))
    for a in range(N + 1):
        for b in range(a + 1, N + 1):
            if b - a < N:
                S[a, b] = 1.0 + math.log(scaling_service.chord_length(b - a, N)) / 3
    links = entanglement_service.el_matrix(EntropyTable(N=N, S=S))
    alpha, prefactor, fit = scaling_service.fit_link_decay(links)
    assert fit.points == N // 4 - 3
    assert alpha == pytest.approx(-2.0, abs=0.05)
    assert prefactor == pytest.approx(1 / 6, rel=0.03)


def test_link_profile_open_chain_averages_available_pairs():
    J = np.zeros((4, 4))
    J[0, 1] = J[1, 0] = 0.3
    J[2, 3] = J[3, 2] = 0.6
    d, means = scaling_service.link_profile(ELMatrix(N=4, J=J), Boundary.OPEN)
    np.testing.assert_array_equal(d, [1, 2, 3])
    np.testing.assert_allclose(means, [0.3, 0.0, 0.0])


def test_fit_needs_two_points():
    N = 16
    table = _synthetic_table(N, lambda l: 0.1 * l)
    with pytest.raises(ValueError):
        scaling_service.fit_central_charge(table, Boundary.PERIODIC, l_min=8, l_max=8)


@pytest.fixture(scope="module")
def critical_ring():
    N = 126
    h = lattice_service.homogeneous_hamiltonian(N, Boundary.PERIODIC)
    table = entanglement_service.contiguous_entropy_table(gaussian_service.ground_state_correlations(h))
    return table, entanglement_service.el_matrix(table)


@pytest.mark.slow
def test_critical_chain_central_charge(critical_ring):
    table, _ = critical_ring
    c, fit = scaling_service.fit_central_charge(table, Boundary.PERIODIC)
    assert c == pytest.approx(1.0, abs=0.1)
    assert fit.r_value > 0.99


@pytest.mark.slow
def test_critical_chain_link_decay(critical_ring):
    _, links = critical_ring
    alpha, prefactor, _ = scaling_service.fit_link_decay(links, Boundary.PERIODIC)
    assert alpha == pytest.approx(-2.0, abs=0.15)
    assert prefactor == pytest.approx(1 / 6, rel=0.2)
