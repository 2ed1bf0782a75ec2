import math

import numpy as np
import pytest

from entlinks.exceptions import CFLViolationError, DimensionMismatchError
from entlinks.models.common import Boundary, StateKind
from entlinks.models.entanglement import ELMatrix
from entlinks.models.fronts import QPPParams
from entlinks.models.wave import WaveBoundary
from entlinks.services import entanglement_service, front_service, wave_service
from tests.conftest import rainbow_ground_state

LN2 = math.log(2)


def _bridge_links(N: int) -> ELMatrix:
    J = np.zeros((N, N))
    i = np.arange(N)
    J[i, (i + N // 2) % N] = LN2
    return ELMatrix(N=N, J=J)


def _random_links(rng, N: int) -> ELMatrix:
    J = np.triu(rng.uniform(0.0, 1.0, size=(N, N)), 1)
    return ELMatrix(N=N, J=J + J.T)


def test_zero_field_stays_zero():
    f = wave_service.init_field(ELMatrix(N=8, J=np.zeros((8, 8))))
    snapshots = wave_service.run(f, [0.0, 1.0, 5.0])
    assert all(np.all(s.grid == 0) for s in snapshots)


def test_embedding_at_site_resolution_is_exact(bridge8):
    links = entanglement_service.el_matrix(entanglement_service.contiguous_entropy_table(bridge8))
    grid = wave_service.embed_links(links, 8)
    np.testing.assert_allclose(grid, links.J, atol=1e-14)


@pytest.mark.parametrize("M", [64, 128])
def test_rasterized_bridge_row_sums(M):
    p = QPPParams(sigma=LN2, N=64, boundary=Boundary.PERIODIC)
    grid = wave_service.rasterize(front_service.initial_fronts(StateKind.BRIDGE, p), M)
    dx = 64 / M
    np.testing.assert_allclose(grid.sum(axis=1) * dx, LN2, atol=1e-12)
    assert np.array_equal(grid, grid.T)


def test_laplacian_of_constant_vanishes():
    grid = np.full((6, 6), 2.5)
    for boundary in WaveBoundary:
        np.testing.assert_array_equal(wave_service.laplacian(grid, boundary), 0.0)


@pytest.mark.parametrize("boundary", list(WaveBoundary))
def test_symmetry_energy_and_steps(rng, boundary):
    f = wave_service.init_field(_random_links(rng, 16), boundary=boundary, M=32)
    start = wave_service.energy(f)
    (late,) = wave_service.run(f, [6.0])
    assert np.array_equal(late.grid, late.grid.T)
    assert late.steps > 0
    assert wave_service.energy(late) == pytest.approx(start, rel=1e-9)


def test_periodic_mass_is_conserved(rng):
    f = wave_service.init_field(_random_links(rng, 16), boundary=WaveBoundary.PERIODIC)
    for snapshot in wave_service.run(f, [1.0, 4.0, 9.0]):
        assert wave_service.mass(snapshot) == pytest.approx(wave_service.mass(f), rel=1e-10)


def test_plane_wave_period():
    N = M = 64
    k = 2 * math.pi / 16
    x = (np.arange(M) + 0.5) * (N / M)
    profile = np.cos(k * x)
    grid = profile[:, None] + profile[None, :]
    f = wave_service.field_at_rest(grid, N, v=2.0, boundary=WaveBoundary.PERIODIC)

    omega = 2.0 * k / math.sqrt(2.0)
    (snapshot,) = wave_service.run(f, [2 * math.pi / omega])
    expected = math.cos(omega * snapshot.t) * grid
    assert np.max(np.abs(snapshot.grid - expected)) < 0.01 * np.max(np.abs(grid))


def test_diagonal_ridge_splits_in_half():
    # at unit Courant number a ridge along x + y = const moves one cell per step
    N = M = 64
    p = QPPParams(sigma=1.0, N=N, boundary=Boundary.PERIODIC)
    fronts = front_service.initial_fronts(StateKind.RAINBOW, p)
    f = wave_service.init_field(fronts, boundary=WaveBoundary.PERIODIC, dt=0.5)
    assert f.courant == 1.0

    i, j = np.indices((M, M))

    def wrapped(grid):
        return np.bincount(((i + j) % M).ravel(), weights=grid.ravel(), minlength=M)

    initial = wrapped(f.grid)
    (later,) = wave_service.run(f, [4.0])
    assert later.steps == 8
    profile = wrapped(later.grid)

    peak = int(np.argmax(initial))
    assert peak == M - 1
    for k in ((peak - 8) % M, (peak + 8) % M):
        assert profile[k] == pytest.approx(initial[peak] / 2, rel=0.03)
    assert profile[peak] == pytest.approx(0.0, abs=1e-9)


def test_rainbow_fronts_follow_the_analytic_lines():
    N = 64
    p = QPPParams(sigma=1.0, N=N, boundary=Boundary.OPEN)
    fronts = front_service.initial_fronts(StateKind.RAINBOW, p)
    f = wave_service.init_field(fronts, boundary=WaveBoundary.NEUMANN)
    (snapshot,) = wave_service.run(f, [10.0])
    reference = front_service.propagate_fronts(fronts, snapshot.t, p)
    assert wave_service.field_error(snapshot, reference).front_offset <= 2.0


def test_cfl_violation():
    with pytest.raises(CFLViolationError):
        wave_service.init_field(_bridge_links(8), dt=1.0)


def test_resolution_below_chain_length():
    with pytest.raises(ValueError):
        wave_service.init_field(_bridge_links(8), M=4)


def test_run_targets():
    f = wave_service.init_field(_bridge_links(8), dt=0.25)
    assert wave_service.run(f, []) == []
    (first,) = wave_service.run(f, [0.0])
    assert first is f
    (snapshot,) = wave_service.run(f, [0.6])
    assert snapshot.steps == 2
    assert snapshot.t == pytest.approx(0.5)
    with pytest.raises(ValueError):
        wave_service.run(f, [1.0, 0.5])


def test_field_error_of_identical_fields():
    links = _bridge_links(16)
    f = wave_service.init_field(links)
    error = wave_service.field_error(f, links)
    assert error.l1 == pytest.approx(0.0, abs=1e-15)
    assert error.front_offset == pytest.approx(0.0, abs=1e-12)


def test_field_error_dimension_mismatch():
    f = wave_service.init_field(_bridge_links(16))
    with pytest.raises(DimensionMismatchError):
        wave_service.field_error(f, _bridge_links(8))


def test_ridge_loci_refines_between_bins():
    profile = np.array([0.0, 1.0, 3.0, 3.0, 1.0, 0.0])
    np.testing.assert_allclose(wave_service.ridge_loci(profile), [2.5])
    assert wave_service.ridge_loci(np.zeros(5)).size == 0


def _wrapped_anti_profile(grid: np.ndarray) -> np.ndarray:
    M = grid.shape[0]
    i, j = np.indices(grid.shape)
    return np.bincount(((i + j) % M).ravel(), weights=grid.ravel(), minlength=M)


def test_measured_rainbow_links_split_in_half():
    N = 64
    links = entanglement_service.el_matrix(entanglement_service.contiguous_entropy_table(rainbow_ground_state(N, 0.7)))
    f = wave_service.init_field(links, boundary=WaveBoundary.PERIODIC, dt=0.5, mask_diagonal=True)
    assert f.courant == 1.0
    (later,) = wave_service.run(f, [6.0])
    n = later.steps
    assert n == 12

    initial = _wrapped_anti_profile(f.grid)
    profile = _wrapped_anti_profile(later.grid)
    # summed along wrapped anti-diagonals the field obeys the 1D wave equation
    np.testing.assert_allclose(
        profile, 0.5 * (np.roll(initial, n) + np.roll(initial, -n)), atol=1e-10 * initial.max()
    )
    ridge = int(np.argmax(initial))
    window = np.arange(-3, 4)
    mass = initial[(ridge + window) % N].sum()
    for centre in (ridge - n, ridge + n):
        assert profile[(centre + window) % N].sum() == pytest.approx(mass / 2, rel=0.03)


def test_refining_the_grid_halves_the_front_error():
    N = 32
    p = QPPParams(sigma=1.0, N=N, boundary=Boundary.PERIODIC)
    fronts = front_service.initial_fronts(StateKind.RAINBOW, p)
    errors = []
    for M, dt in ((N, 0.25), (2 * N, 0.125)):
        f = wave_service.init_field(fronts, boundary=WaveBoundary.PERIODIC, M=M, dt=dt, width=3.0)
        (snapshot,) = wave_service.run(f, [6.0])
        assert snapshot.t == pytest.approx(6.0)
        reference = front_service.propagate_fronts(fronts, snapshot.t, p)
        errors.append(wave_service.field_error(snapshot, reference).front_offset)
    assert errors[1] <= 0.5 * errors[0]
