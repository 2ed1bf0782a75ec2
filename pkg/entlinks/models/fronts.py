"""Quasiparticle-picture parameters and delta-line front sets."""

import math
from typing import Literal

from pydantic import Field, model_validator

from entlinks.models.common import Boundary, FrozenModel, Orientation

EXTENT_TOLERANCE = 1e-9


class QPPParams(FrozenModel):
    """Saturation entropy density, front speed and geometry."""

    sigma: float = Field(ge=0)  # nats per site
    v: float = Field(default=2.0, gt=0)  # sites per unit time
    N: int = Field(ge=2)
    boundary: Boundary = Boundary.PERIODIC

    @model_validator(mode="after")
    def _check_finite(self) -> "QPPParams":
        if not (math.isfinite(self.sigma) and math.isfinite(self.v)):
            raise ValueError("sigma and v must be finite")
        return self


class DeltaLine(FrozenModel):
    """Straight segment carrying weight * delta(x -+ y - offset).

    Diagonal lines are y = x - offset, anti-diagonal lines are
    y = offset - x; extent is the range of x covered by the segment.
    direction is 0 for a line at rest, +1 when the offset grows with
    time and -1 when it shrinks.
    """

    orientation: Orientation
    offset: float
    weight: float = Field(ge=0)
    extent: tuple[float, float]
    direction: Literal[-1, 0, 1] = 0

    @model_validator(mode="after")
    def _check_extent(self) -> "DeltaLine":
        x0, x1 = self.extent
        if not (math.isfinite(x0) and math.isfinite(x1) and math.isfinite(self.offset)):
            raise ValueError("delta line must be finite")
        if x1 < x0:
            raise ValueError(f"extent must be ordered, got {self.extent}")
        return self

    def y_at(self, x: float) -> float:
        if self.orientation == Orientation.DIAGONAL:
            return x - self.offset
        return self.offset - x

    @property
    def length(self) -> float:
        """Length of the projection on the x axis."""
        return self.extent[1] - self.extent[0]

    def swapped(self) -> "DeltaLine":
        """Mirror image under (x, y) -> (y, x)."""
        x0, x1 = self.extent
        y0, y1 = sorted((self.y_at(x0), self.y_at(x1)))
        if self.orientation == Orientation.DIAGONAL:
            offset, direction = -self.offset, -self.direction
        else:
            offset, direction = self.offset, self.direction
        return DeltaLine(
            orientation=self.orientation,
            offset=offset,
            weight=self.weight,
            extent=(y0, y1),
            direction=direction,
        )


class FrontSet(FrozenModel):
    """Entanglement-link field made of delta lines at time t."""

    lines: tuple[DeltaLine, ...] = ()
    t: float = 0.0
    N: int = Field(ge=2)
    boundary: Boundary = Boundary.PERIODIC

    @model_validator(mode="after")
    def _check_lines(self) -> "FrontSet":
        lo, hi = -EXTENT_TOLERANCE, self.N + EXTENT_TOLERANCE
        for line in self.lines:
            x0, x1 = line.extent
            ys = (line.y_at(x0), line.y_at(x1))
            if x0 < lo or x1 > hi or min(ys) < lo or max(ys) > hi:
                raise ValueError(f"delta line leaves the square [0, {self.N}]^2: {line}")
        return self

    @property
    def total_mass(self) -> float:
        """Sum of weight times projected length."""
        return math.fsum(line.weight * line.length for line in self.lines)
