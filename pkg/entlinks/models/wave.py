"""Discretized entanglement-link field for the wave solver."""

from enum import Enum

import numpy as np
from pydantic import Field, field_validator, model_validator

from entlinks.models.common import FrozenModel, frozen_array

SYMMETRY_TOLERANCE = 1e-12


class WaveBoundary(str, Enum):
    """Boundary treatment of the (x, y) square."""

    NEUMANN = "neumann"
    PERIODIC = "periodic"


class WaveField(FrozenModel):
    """J(x, y, t) sampled at cell centres of an M x M grid over [0, N]^2.

    prev holds the previous leapfrog level.
    """

    grid: np.ndarray
    prev: np.ndarray
    N: float = Field(gt=0)
    dt: float = Field(gt=0)
    v: float = Field(gt=0)
    boundary: WaveBoundary = WaveBoundary.NEUMANN
    t: float = 0.0
    steps: int = 0

    @field_validator("grid", "prev", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @model_validator(mode="after")
    def _check_field(self) -> "WaveField":
        m = self.grid.shape[0]
        if self.grid.shape != (m, m) or self.prev.shape != (m, m):
            raise ValueError(f"grid and prev must be square and equal, got {self.grid.shape}, {self.prev.shape}")
        if np.max(np.abs(self.grid - self.grid.T), initial=0.0) > SYMMETRY_TOLERANCE:
            raise ValueError("field must stay symmetric under x <-> y")
        if self.courant > 1.0:
            raise ValueError(f"CFL violated: v*dt/dx = {self.courant:.3f} > 1")
        return self

    @property
    def M(self) -> int:
        return self.grid.shape[0]

    @property
    def dx(self) -> float:
        return self.N / self.M

    @property
    def courant(self) -> float:
        return self.v * self.dt / self.dx

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.M) + 0.5) * self.dx


class FieldError(FrozenModel):
    """Distance between a solver field and a reference."""

    l1: float
    front_offset: float
