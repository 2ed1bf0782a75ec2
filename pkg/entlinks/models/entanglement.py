"""Entropy tables, entanglement-link matrices and derived series."""

import numpy as np
from pydantic import Field, field_validator, model_validator

from entlinks.models.common import FrozenModel, frozen_array


class EntropyTable(FrozenModel):
    """Entropies of all contiguous blocks at one time.

    S[a, b] holds the entropy of sites a..b-1 for 0 <= a <= b <= N;
    S[a, a] = 0 and entries below the diagonal are unused (zero).
    """

    N: int = Field(ge=1)
    t: float = 0.0
    S: np.ndarray

    @field_validator("S", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @model_validator(mode="after")
    def _check_table(self) -> "EntropyTable":
        if self.S.shape != (self.N + 1, self.N + 1):
            raise ValueError(f"S must be {self.N + 1}x{self.N + 1}, got {self.S.shape}")
        if np.any(np.diag(self.S) != 0):
            raise ValueError("empty blocks must have zero entropy")
        if np.any(np.tril(self.S, -1) != 0):
            raise ValueError("entries with a > b are undefined and must be zero")
        if np.min(self.S) < -1e-10:
            raise ValueError(f"negative block entropy {np.min(self.S):.3e}")
        return self

    def entropy(self, a: int, b: int) -> float:
        """Entropy of the block [a, b)."""
        return float(self.S[a, b])


class ELMatrix(FrozenModel):
    """Symmetric entanglement-link matrix with zero diagonal."""

    N: int = Field(ge=1)
    t: float = 0.0
    J: np.ndarray

    @field_validator("J", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @model_validator(mode="after")
    def _check_links(self) -> "ELMatrix":
        if self.J.shape != (self.N, self.N):
            raise ValueError(f"J must be {self.N}x{self.N}, got {self.J.shape}")
        if not np.array_equal(self.J, self.J.T):
            raise ValueError("entanglement links must be exactly symmetric")
        if np.any(np.diag(self.J) != 0):
            raise ValueError("entanglement links must have a zero diagonal")
        return self


class SubdiagonalSeries(FrozenModel):
    """Nearest-neighbour links J[i, i+1] as a function of time.

    links has one row per time; columns are bonds (i, i+1) for i = 0..N-2,
    plus the corner bond (N-1, 0) as a final column on periodic chains.
    """

    N: int
    periodic: bool = False
    times: np.ndarray
    links: np.ndarray

    @field_validator("times", "links", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @model_validator(mode="after")
    def _check_series(self) -> "SubdiagonalSeries":
        bonds = self.N if self.periodic else self.N - 1
        if self.links.shape != (self.times.shape[0], bonds):
            raise ValueError(
                f"links must be {self.times.shape[0]}x{bonds}, got {self.links.shape}"
            )
        return self


class ScalingFit(FrozenModel):
    """Result of a straight-line fit in log variables."""

    slope: float
    intercept: float
    r_value: float
    points: int
