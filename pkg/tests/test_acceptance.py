"""Desk-scale N=128 checks of the quasiparticle and wave pictures."""

import math

import numpy as np
import pytest
from scipy.stats import linregress

from entlinks.models.common import Boundary, StateKind
from entlinks.models.entanglement import ELMatrix
from entlinks.models.fronts import QPPParams
from entlinks.models.wave import WaveBoundary
from entlinks.services import (
    entanglement_service,
    front_service,
    gaussian_service,
    lattice_service,
    qpp_service,
    report_service,
    wave_service,
)
from tests.conftest import dimer_ground_state, rainbow_ground_state

pytestmark = pytest.mark.slow

N = 128
V = 2.0
LN2 = math.log(2)


def _evolve(C0, boundary, times):
    h = lattice_service.homogeneous_hamiltonian(N, boundary)
    return gaussian_service.evolve_many(C0, h, times)


def _curve(states, a, b):
    return np.array([entanglement_service.interval_entropy(C, a, b) for C in states])


def _slope(times, values, lo, hi):
    keep = (times >= lo) & (times <= hi)
    return linregress(times[keep], values[keep]).slope


def _lateral_sigma(C0) -> float:
    l = np.arange(1, N // 2 + 1)
    S = np.array([entanglement_service.interval_entropy(C0, 0, int(k)) for k in l])
    return float(np.dot(l, S) / np.dot(l, l))


@pytest.fixture(scope="module")
def rainbow():
    C0 = rainbow_ground_state(N, 0.7)
    times = np.arange(0.0, 61.0)
    return C0, times, _evolve(C0, Boundary.OPEN, times)


def test_dimer_saturation_times_scale_with_block_size():
    times = np.arange(0.0, 30.5, 0.5)
    states = _evolve(dimer_ground_state(N, boundary=Boundary.PERIODIC), Boundary.PERIODIC, times)
    sizes = np.array([8, 16, 24, 32])
    breakpoints = [report_service.estimate_breakpoint(times, _curve(states, 40, 40 + l)) for l in sizes]
    # saturation at v t = l; slow quasiparticles round the knee and delay
    # every breakpoint by the same amount, so the check is on the slope
    assert linregress(sizes, breakpoints).slope == pytest.approx(1 / V, rel=0.1)


def test_dimer_subdiagonal_settles():
    times = np.arange(20.0, 40.5, 0.5)
    states = _evolve(dimer_ground_state(N, boundary=Boundary.PERIODIC), Boundary.PERIODIC, times)
    i = 64
    links = 0.5 * (_curve(states, i, i + 1) + _curve(states, i + 1, i + 2) - _curve(states, i, i + 2))
    assert np.std(links) / np.mean(links) < 0.1


def test_dimer_link_ridge_moves_at_front_speed():
    t = 10.0
    (C,) = _evolve(dimer_ground_state(N, boundary=Boundary.PERIODIC), Boundary.PERIODIC, [t])
    J = entanglement_service.el_matrix(entanglement_service.contiguous_entropy_table(C, t)).J
    i = np.arange(N)
    distances = np.arange(4, N // 2)
    ridge = [np.mean(J[i, (i + d) % N]) for d in distances]
    assert distances[int(np.argmax(ridge))] == pytest.approx(V * t, abs=2)


def test_rainbow_lateral_blocks(rainbow):
    C0, times, states = rainbow
    sigma = _lateral_sigma(C0)
    for a in (16, 32, 48):
        curve = _curve(states, 0, a)
        t1 = (N - 2 * a) / V
        window = times <= min(t1 + 12, times[-1])
        assert report_service.estimate_breakpoint(times[window], curve[window]) == pytest.approx(t1, abs=4)
        slope = _slope(times, curve, t1 + 2, min(t1 + 10, times[-1]))
        assert slope == pytest.approx(-sigma * V / 2, rel=0.15)


def test_rainbow_central_blocks_grow_twice_as_fast(rainbow):
    C0, times, states = rainbow
    sigma = _lateral_sigma(C0)
    lateral = _slope(times, _curve(states, 0, N // 2), 2, 20)
    for a in (40, 48):
        growth = _slope(times, _curve(states, a, N - a), 2, 12)
        assert growth == pytest.approx(sigma * V, rel=0.15)
        assert growth / -lateral == pytest.approx(2.0, rel=0.15)


def _nearest_links(C, sites: np.ndarray) -> np.ndarray:
    return np.array([
        0.5 * (entanglement_service.interval_entropy(C, k, k + 1)
               + entanglement_service.interval_entropy(C, k + 1, k + 2)
               - entanglement_service.interval_entropy(C, k, k + 2))
        for k in sites
    ])


def test_rainbow_subdiagonal_pulse_travels(rainbow):
    _, times, states = rainbow
    # the edge background is static, so the pulse shows in the change from t=0
    sites = np.arange(4, N // 2 - 2)
    background = _nearest_links(states[0], sites)
    positions = []
    for t in range(4, 56, 4):
        C = states[int(np.searchsorted(times, t))]
        positions.append(int(sites[np.argmax(_nearest_links(C, sites) - background)]))
    # the anti-diagonal front meets the sub-diagonal at i = (N - v t) / 2
    assert all(b < a for a, b in zip(positions, positions[1:]))
    assert positions[0] - positions[-1] >= 30


def test_bridge_quench_against_front_picture():
    C0 = gaussian_service.bridge_state_correlations(N)
    links = entanglement_service.el_matrix(entanglement_service.contiguous_entropy_table(C0))
    expected = np.zeros((N, N))
    i = np.arange(N)
    expected[i, (i + N // 2) % N] = LN2
    np.testing.assert_allclose(links.J, expected, atol=1e-8)

    times = np.arange(0.0, 33.0, 2.0)
    states = _evolve(C0, Boundary.PERIODIC, times)
    p = QPPParams(sigma=LN2, v=V, N=N, boundary=Boundary.PERIODIC)
    for l in (16, 32):
        measured = _curve(states, 0, l)
        predicted = np.array([qpp_service.bridge_entropy(l, t, p) for t in times])
        onset = (N / 2 - l) / V
        before = times < onset
        np.testing.assert_allclose(measured[before], predicted[before], rtol=0.01)

    # past the onset the entropy falls, but slower than the sharp fronts predict
    l = 16
    measured = _curve(states, 0, l)
    predicted = np.array([qpp_service.bridge_entropy(l, t, p) for t in times])
    onset = (N / 2 - l) / V
    after = times >= onset + 2
    assert np.all(np.diff(measured[after]) < 0)
    assert np.all(measured[after] >= predicted[after])
    assert measured[-1] < 0.8 * l * LN2


def test_wave_solver_tracks_rainbow_fronts(rainbow):
    C0, times, states = rainbow
    initial = entanglement_service.el_matrix(entanglement_service.contiguous_entropy_table(C0))
    field = wave_service.init_field(initial, v=V, boundary=WaveBoundary.NEUMANN, mask_diagonal=True)
    (snapshot,) = wave_service.run(field, [10.0])

    p = QPPParams(sigma=_lateral_sigma(C0), v=V, N=N, boundary=Boundary.OPEN)
    fronts = front_service.propagate_fronts(front_service.initial_fronts(StateKind.RAINBOW, p), snapshot.t, p)
    assert wave_service.field_error(snapshot, fronts).front_offset <= 2.0

    C10 = states[int(np.searchsorted(times, 10.0))]
    measured: ELMatrix = entanglement_service.el_matrix(entanglement_service.contiguous_entropy_table(C10, 10.0))
    assert wave_service.field_error(snapshot, measured).front_offset <= 2.0
