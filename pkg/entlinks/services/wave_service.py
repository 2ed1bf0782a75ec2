"""Leapfrog solver for the entanglement wave equation.

    d^2 J / dt^2 = (v^2 / 2) (d^2 J / dx^2 + d^2 J / dy^2)

on the square [0, N]^2 sampled at the centres of an M x M grid. Open
chains use mirrored ghost cells (Neumann), periodic chains wrap.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.signal import find_peaks

from entlinks.config import settings
from entlinks.exceptions import CFLViolationError, DimensionMismatchError
from entlinks.models.common import Boundary, Orientation
from entlinks.models.entanglement import ELMatrix
from entlinks.models.fronts import FrontSet
from entlinks.models.wave import FieldError, WaveBoundary, WaveField

logger = logging.getLogger(__name__)

ENERGY_DRIFT_LIMIT = 0.01
INPUT_SYMMETRY_TOLERANCE = 1e-9
PEAK_PROMINENCE = 0.1

_PAD_MODE = {WaveBoundary.NEUMANN: "symmetric", WaveBoundary.PERIODIC: "wrap"}


def wave_boundary(boundary: Boundary) -> WaveBoundary:
    return WaveBoundary.PERIODIC if boundary == Boundary.PERIODIC else WaveBoundary.NEUMANN


def laplacian(grid: np.ndarray, boundary: WaveBoundary) -> np.ndarray:
    """Five-point stencil without the 1/dx^2 factor; preserves exact x <-> y symmetry."""
    padded = np.pad(grid, 1, mode=_PAD_MODE[boundary])
    vertical = padded[:-2, 1:-1] + padded[2:, 1:-1]
    horizontal = padded[1:-1, :-2] + padded[1:-1, 2:]
    return (vertical + horizontal) - 4.0 * grid


def _cell_centers(N: float, M: int) -> np.ndarray:
    return (np.arange(M) + 0.5) * (N / M)


def rasterize(f: FrontSet, M: int, width: float | None = None) -> np.ndarray:
    """Delta lines as hat-shaped ridges with unit integral across the line.

    width is the full width at half maximum in sites (2 cells by default).
    A ridge of weight w integrates to w per unit length along x. Pieces
    cover the cells whose x centre lies in [x0, x1); the result is
    symmetrized, which leaves swap-symmetric front sets unchanged away
    from piece ends.
    """
    dx = f.N / M
    half_base = width if width is not None else 2.0 * dx
    x = _cell_centers(f.N, M)
    X, Y = np.meshgrid(x, x, indexing="ij")

    grid = np.zeros((M, M))
    for line in f.lines:
        if line.orientation == Orientation.DIAGONAL:
            u = X - Y - line.offset
        else:
            u = X + Y - line.offset
        if f.boundary == Boundary.PERIODIC:
            u = np.mod(u + f.N / 2, f.N) - f.N / 2
        on_segment = (X >= line.extent[0]) & (X < line.extent[1])
        kernel = np.clip(1.0 - np.abs(u) / half_base, 0.0, None) / half_base
        grid += line.weight * kernel * on_segment
    return 0.5 * (grid + grid.T)


def embed_links(J: ELMatrix, M: int) -> np.ndarray:
    """Bilinear interpolation of J_ij (placed at site centres i + 1/2) onto the grid."""
    sites = np.arange(J.N) + 0.5
    interpolator = RegularGridInterpolator((sites, sites), J.J, method="linear")
    x = np.clip(_cell_centers(J.N, M), sites[0], sites[-1])
    X, Y = np.meshgrid(x, x, indexing="ij")
    return interpolator(np.stack([X, Y], axis=-1))


def diagonal_band_mask(M: int, band: int | None = None) -> np.ndarray:
    """True off the band |i - j| <= band around the main diagonal."""
    band = settings.diagonal_band if band is None else band
    i = np.arange(M)
    return np.abs(i[:, None] - i[None, :]) > band


def default_time_step(N: float, M: int, v: float) -> float:
    return settings.wave_safety * math.sqrt(2.0) * (N / M) / v


def init_field(
    source: ELMatrix | FrontSet,
    v: float = 2.0,
    boundary: WaveBoundary = WaveBoundary.NEUMANN,
    M: int | None = None,
    dt: float | None = None,
    mask_diagonal: bool = False,
    width: float | None = None,
) -> WaveField:
    """Field at rest built from measured links or from analytic fronts."""
    N = source.N
    M = M or N
    if M < N:
        raise ValueError(f"resolution M={M} is below the chain length N={N}")
    if isinstance(source, FrontSet):
        grid = rasterize(source, M, width)
    else:
        grid = embed_links(source, M)
    if not np.all(np.isfinite(grid)):
        raise ValueError("initial field must be finite")

    asymmetry = float(np.max(np.abs(grid - grid.T), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(grid), initial=0.0)))
    if asymmetry > INPUT_SYMMETRY_TOLERANCE * scale:
        raise ValueError(f"initial field is not symmetric (max deviation {asymmetry:.3e})")
    grid = 0.5 * (grid + grid.T)
    if mask_diagonal:
        grid = grid * diagonal_band_mask(M)
    return field_at_rest(grid, N, v, boundary, dt)


def field_at_rest(
    grid: np.ndarray,
    N: float,
    v: float = 2.0,
    boundary: WaveBoundary = WaveBoundary.NEUMANN,
    dt: float | None = None,
) -> WaveField:
    """Leapfrog state with zero initial velocity for a symmetric M x M grid."""
    grid = np.asarray(grid, dtype=float)
    M = grid.shape[0]
    dx = N / M
    dt = dt or default_time_step(N, M, v)
    if v * dt / dx > 1.0:
        raise CFLViolationError(f"v*dt/dx = {v * dt / dx:.3f} exceeds 1 (dt={dt}, dx={dx})")

    # zero initial velocity to second order: J(-dt) = J(dt)
    r = 0.5 * (v * dt / dx) ** 2
    prev = grid + 0.5 * r * laplacian(grid, boundary)
    return WaveField(grid=grid, prev=prev, N=N, dt=dt, v=v, boundary=boundary)


def step(f: WaveField) -> WaveField:
    """One leapfrog step."""
    r = 0.5 * f.courant**2
    new = 2.0 * f.grid - f.prev + r * laplacian(f.grid, f.boundary)
    return f.model_copy(
        update={"grid": new, "prev": f.grid, "t": f.t + f.dt, "steps": f.steps + 1}
    )


def energy(f: WaveField) -> float:
    """Discrete energy conserved exactly by the leapfrog scheme."""
    r = 0.5 * f.courant**2
    velocity = f.grid - f.prev
    coupling = np.vdot(f.grid, laplacian(f.prev, f.boundary))
    return float((np.vdot(velocity, velocity) - r * coupling) * f.dx**2 / f.dt**2)


def mass(f: WaveField) -> float:
    """Integral of the field over the square."""
    return float(np.sum(f.grid) * f.dx**2)


def run(f: WaveField, t_targets: Sequence[float]) -> list[WaveField]:
    """Snapshots at the grid times nearest to each target."""
    targets = list(t_targets)
    if any(b < a for a, b in zip(targets, targets[1:])):
        raise ValueError("target times must be ascending")
    if targets and targets[0] < f.t - f.dt / 2:
        raise ValueError(f"target time {targets[0]} precedes the field time {f.t}")

    start_energy = energy(f)
    snapshots = []
    current = f
    for target in targets:
        while current.t + current.dt / 2 < target:
            current = step(current)
        snapshots.append(current)

    end_energy = energy(current)
    if start_energy > 0:
        drift = abs(end_energy - start_energy) / start_energy
        if drift > ENERGY_DRIFT_LIMIT:
            logger.warning("Wave energy drifted by %.2f%% over %d steps", 100 * drift, current.steps)
    logger.info("Wave run: %d snapshots, %d steps, t=%g", len(snapshots), current.steps, current.t)
    return snapshots


def profiles(grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sums along anti-diagonals (index i + j) and diagonals (index i - j + M - 1)."""
    M = grid.shape[0]
    i, j = np.indices(grid.shape)
    anti = np.bincount((i + j).ravel(), weights=grid.ravel(), minlength=2 * M - 1)
    diag = np.bincount((i - j + M - 1).ravel(), weights=grid.ravel(), minlength=2 * M - 1)
    return anti, diag


def ridge_loci(profile: np.ndarray) -> np.ndarray:
    """Peak positions (fractional bins) with parabolic refinement."""
    top = float(np.max(profile, initial=0.0))
    if top <= 0:
        return np.array([])
    peaks, _ = find_peaks(profile, prominence=PEAK_PROMINENCE * top)
    loci = []
    for k in peaks:
        left, centre, right = profile[k - 1], profile[k], profile[k + 1]
        curvature = left - 2 * centre + right
        shift = 0.5 * (left - right) / curvature if curvature < 0 else 0.0
        loci.append(k + shift)
    return np.array(loci)


def _reference_grid(reference: ELMatrix | FrontSet, f: WaveField) -> np.ndarray:
    if reference.N != f.N:
        raise DimensionMismatchError(f"reference has N={reference.N} but field has N={f.N}")
    if isinstance(reference, FrontSet):
        return rasterize(reference, f.M)
    return embed_links(reference, f.M)


def _unit_mass(grid: np.ndarray) -> np.ndarray:
    total = np.sum(grid)
    return grid / total if total > 0 else grid


def field_error(f: WaveField, reference: ELMatrix | FrontSet) -> FieldError:
    """Mean absolute difference and largest ridge displacement (in sites).

    Both fields are masked around the main diagonal and normalized to
    unit mass. Every reference ridge in the anti-diagonal and diagonal
    profiles is matched to the nearest ridge of the field.
    """
    mask = diagonal_band_mask(f.M)
    ours = _unit_mass(f.grid * mask)
    theirs = _unit_mass(_reference_grid(reference, f) * mask)
    l1 = float(np.mean(np.abs(ours - theirs)[mask]))

    offset = 0.0
    for ours_profile, theirs_profile in zip(profiles(ours), profiles(theirs)):
        expected = ridge_loci(theirs_profile)
        if expected.size == 0:
            continue
        found = ridge_loci(ours_profile)
        if found.size == 0:
            return FieldError(l1=l1, front_offset=math.inf)
        distances = np.min(np.abs(expected[:, None] - found[None, :]), axis=1)
        offset = max(offset, float(np.max(distances)))
    return FieldError(l1=l1, front_offset=offset * f.dx)
