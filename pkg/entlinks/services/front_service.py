"""Delta-line front engine.

The entanglement-link field of the initial states is a set of straight
lines in the square [0, N]^2. Each line at rest splits into two
half-weight copies travelling along its normal in opposite directions,
so that the offset x -+ y changes by v t. Pieces that leave the square
are folded back: wrapped on periodic chains, mirrored on open chains,
where a mirror in one coordinate turns a diagonal into an anti-diagonal.
Entropies follow from counting the weight of the pieces that connect a
block with its complement.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from numbers import Real

from entlinks.exceptions import FrontError
from entlinks.models.common import Boundary, Orientation, StateKind
from entlinks.models.fronts import DeltaLine, FrontSet, QPPParams

logger = logging.getLogger(__name__)

# Pieces shorter than this (in x) are dropped; offsets closer than this are equal.
GEOMETRY_TOLERANCE = 1e-9

Interval = tuple[float, float]


def initial_fronts(kind: StateKind, p: QPPParams) -> FrontSet:
    """Link field of a state before the quench.

    dimer: the main diagonal. rainbow: the anti-diagonal x + y = N.
    bridge: the two diagonal pieces |x - y| = N/2.
    """
    N = float(p.N)
    if kind == StateKind.DIMER:
        lines = [DeltaLine(orientation=Orientation.DIAGONAL, offset=0.0, weight=p.sigma, extent=(0.0, N))]
    elif kind == StateKind.RAINBOW:
        lines = [DeltaLine(orientation=Orientation.ANTIDIAGONAL, offset=N, weight=p.sigma, extent=(0.0, N))]
    elif kind == StateKind.BRIDGE:
        lines = [
            DeltaLine(orientation=Orientation.DIAGONAL, offset=N / 2, weight=p.sigma, extent=(N / 2, N)),
            DeltaLine(orientation=Orientation.DIAGONAL, offset=-N / 2, weight=p.sigma, extent=(0.0, N / 2)),
        ]
    else:
        raise FrontError(f"unknown state kind: {kind}")
    return FrontSet(lines=tuple(lines), t=0.0, N=p.N, boundary=p.boundary)


def _translate(line: DeltaLine, direction: int, s: float) -> tuple[tuple[float, float], tuple[float, float], int]:
    """Endpoints after moving the line by s along direction * normal."""
    shift = direction * s / 2.0
    x0, x1 = line.extent
    y0, y1 = line.y_at(x0), line.y_at(x1)
    if line.orientation == Orientation.DIAGONAL:
        return (x0 + shift, y0 - shift), (x1 + shift, y1 - shift), direction
    return (x0 + shift, y0 + shift), (x1 + shift, y1 + shift), direction


def _breakpoints(p0: tuple[float, float], p1: tuple[float, float], N: float) -> list[float]:
    """Parameters in (0, 1) where the segment crosses x = kN or y = kN."""
    params = {0.0, 1.0}
    for axis in (0, 1):
        a, b = p0[axis], p1[axis]
        if abs(b - a) < GEOMETRY_TOLERANCE:
            continue
        lo, hi = sorted((a, b))
        for k in range(math.ceil(lo / N), math.floor(hi / N) + 1):
            u = (k * N - a) / (b - a)
            if 0.0 < u < 1.0:
                params.add(u)
    return sorted(params)


def _fold_coordinate(value: float, cell: int, N: float, boundary: Boundary) -> tuple[int, float]:
    """Sign and shift mapping a coordinate in cell k back into [0, N]."""
    if boundary == Boundary.PERIODIC or cell % 2 == 0:
        return 1, -cell * N
    return -1, (cell + 1) * N


def _line_from_points(
    q0: tuple[float, float],
    q1: tuple[float, float],
    orientation: Orientation,
    weight: float,
    direction: int,
) -> DeltaLine:
    (x0, y0), (x1, y1) = sorted((q0, q1))
    offset = x0 - y0 if orientation == Orientation.DIAGONAL else x0 + y0
    return DeltaLine(
        orientation=orientation,
        offset=offset,
        weight=weight,
        extent=(x0, x1),
        direction=direction,
    )


def _fold(
    p0: tuple[float, float],
    p1: tuple[float, float],
    line: DeltaLine,
    direction: int,
    N: float,
    boundary: Boundary,
) -> list[DeltaLine]:
    pieces = []
    params = _breakpoints(p0, p1, N)
    for u0, u1 in zip(params, params[1:]):
        a = (p0[0] + u0 * (p1[0] - p0[0]), p0[1] + u0 * (p1[1] - p0[1]))
        b = (p0[0] + u1 * (p1[0] - p0[0]), p0[1] + u1 * (p1[1] - p0[1]))
        if abs(b[0] - a[0]) < GEOMETRY_TOLERANCE:
            continue
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        sx, tx = _fold_coordinate(mid[0], math.floor(mid[0] / N), N, boundary)
        sy, ty = _fold_coordinate(mid[1], math.floor(mid[1] / N), N, boundary)

        orientation = line.orientation
        if sx != sy:
            orientation = (
                Orientation.ANTIDIAGONAL if orientation == Orientation.DIAGONAL else Orientation.DIAGONAL
            )
        qa = (sx * a[0] + tx, sy * a[1] + ty)
        qb = (sx * b[0] + tx, sy * b[1] + ty)
        # a mirror in x reverses the velocity component along the new normal
        pieces.append(_line_from_points(qa, qb, orientation, line.weight, sx * direction))
    return pieces


def merge_lines(lines: Iterable[DeltaLine]) -> list[DeltaLine]:
    """Join collinear pieces that touch and carry the same weight and direction."""

    def key(line: DeltaLine):
        return (line.orientation.value, line.direction, round(line.offset, 7), round(line.weight, 12), line.extent[0])

    merged: list[DeltaLine] = []
    for line in sorted(lines, key=key):
        if merged:
            last = merged[-1]
            if (
                last.orientation == line.orientation
                and last.direction == line.direction
                and abs(last.offset - line.offset) < GEOMETRY_TOLERANCE * 1e3
                and abs(last.weight - line.weight) < GEOMETRY_TOLERANCE
                and abs(last.extent[1] - line.extent[0]) < GEOMETRY_TOLERANCE * 1e3
            ):
                merged[-1] = last.model_copy(update={"extent": (last.extent[0], max(last.extent[1], line.extent[1]))})
                continue
        merged.append(line)
    return merged


def propagate_fronts(
    f: FrontSet,
    t: float,
    p: QPPParams,
    boundary: Boundary | None = None,
) -> FrontSet:
    """Move every line to time t.

    Lines at rest split into two half-weight lines moving in opposite
    directions; moving lines translate by v (t - f.t) along their normal.
    """
    if not math.isfinite(t) or t < f.t:
        raise FrontError(f"cannot propagate fronts from t={f.t} back to t={t}")
    boundary = boundary or f.boundary
    if t == f.t:
        return f

    s = p.v * (t - f.t)
    N = float(f.N)
    pieces: list[DeltaLine] = []
    for line in f.lines:
        if line.direction == 0:
            moves = [(1, line.weight / 2.0), (-1, line.weight / 2.0)]
        else:
            moves = [(line.direction, line.weight)]
        for direction, weight in moves:
            moved = line.model_copy(update={"weight": weight})
            p0, p1, direction = _translate(moved, direction, s)
            pieces.extend(_fold(p0, p1, moved, direction, N, boundary))

    lines = merge_lines(pieces)
    logger.debug("Propagated %d lines to %d pieces at t=%g", len(f.lines), len(lines), t)
    return FrontSet(lines=tuple(lines), t=t, N=f.N, boundary=boundary)


def normalize_intervals(block: Sequence, N: float) -> list[Interval]:
    """Sorted, disjoint intervals from (a, b) or a sequence of (a, b) pairs."""
    if len(block) == 2 and all(isinstance(v, Real) for v in block):
        block = [block]
    intervals = []
    for a, b in block:
        if not (0 <= a < b <= N):
            raise FrontError(f"invalid interval [{a}, {b}) for N={N}")
        intervals.append((float(a), float(b)))
    intervals.sort()

    merged: list[Interval] = []
    for a, b in intervals:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def complement_intervals(intervals: Sequence[Interval], N: float) -> list[Interval]:
    gaps, cursor = [], 0.0
    for a, b in intervals:
        if a > cursor:
            gaps.append((cursor, a))
        cursor = b
    if cursor < N:
        gaps.append((cursor, N))
    return gaps


def _overlap(first: Sequence[Interval], second: Sequence[Interval]) -> list[Interval]:
    out = []
    for a0, a1 in first:
        for b0, b1 in second:
            lo, hi = max(a0, b0), min(a1, b1)
            if hi > lo:
                out.append((lo, hi))
    return out


def _preimage(line: DeltaLine, intervals: Sequence[Interval]) -> list[Interval]:
    """Range of x where y(x) falls inside the given intervals."""
    if line.orientation == Orientation.DIAGONAL:
        return [(lo + line.offset, hi + line.offset) for lo, hi in intervals]
    return sorted((line.offset - hi, line.offset - lo) for lo, hi in intervals)


def integrate_fronts(f: FrontSet, block: Sequence) -> float:
    """Entropy of a block: the weight of links from the block to its complement.

    block is either (a, b) for [a, b) or a sequence of such intervals.
    """
    inside = normalize_intervals(block, f.N)
    outside = complement_intervals(inside, f.N)

    total = []
    for line in f.lines:
        xs = _overlap([line.extent], inside)
        crossing = _overlap(xs, _preimage(line, outside))
        total.append(line.weight * math.fsum(hi - lo for lo, hi in crossing))
    return math.fsum(total)
