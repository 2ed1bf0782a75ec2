"""Coupling patterns and single-particle Hamiltonians."""

import math

import numpy as np
from pydantic import Field, field_validator, model_validator

from entlinks.models.common import Boundary, CouplingKind, FrozenModel, frozen_array


class CouplingSpec(FrozenModel):
    """Hopping pattern of a chain of N sites."""

    kind: CouplingKind
    N: int = Field(ge=2)
    boundary: Boundary = Boundary.OPEN
    delta: float | None = None  # dimer
    h: float | None = None  # rainbow
    values: tuple[float, ...] | None = None  # custom

    @model_validator(mode="after")
    def _check_parameters(self) -> "CouplingSpec":
        if self.kind == CouplingKind.DIMER:
            if self.delta is None:
                raise ValueError("dimer couplings need delta")
            if not math.isfinite(self.delta) or abs(self.delta) > 1:
                raise ValueError(f"dimer delta must satisfy |delta| <= 1, got {self.delta}")
        elif self.kind == CouplingKind.RAINBOW:
            if self.h is None:
                raise ValueError("rainbow couplings need h")
            if not math.isfinite(self.h) or self.h <= 0:
                raise ValueError(f"rainbow h must be a positive finite number, got {self.h}")
        elif self.kind == CouplingKind.CUSTOM:
            if self.values is None:
                raise ValueError("custom couplings need values")
            expected = self.N if self.boundary == Boundary.PERIODIC else self.N - 1
            if len(self.values) != expected:
                raise ValueError(
                    f"custom couplings need {expected} values for N={self.N} "
                    f"({self.boundary.value}), got {len(self.values)}"
                )
            if not all(math.isfinite(g) for g in self.values):
                raise ValueError("custom couplings must be finite")
        if self.kind in (CouplingKind.DIMER, CouplingKind.RAINBOW) and self.N % 2:
            raise ValueError(f"{self.kind.value} couplings need an even number of sites, got N={self.N}")
        return self


class SingleParticleHamiltonian(FrozenModel):
    """N x N real symmetric hopping matrix, h[i, i+1] = -g_i."""

    N: int = Field(ge=1)
    entries: np.ndarray
    boundary: Boundary = Boundary.OPEN

    @field_validator("entries", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @model_validator(mode="after")
    def _check_matrix(self) -> "SingleParticleHamiltonian":
        if self.entries.shape != (self.N, self.N):
            raise ValueError(f"entries must be {self.N}x{self.N}, got {self.entries.shape}")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("entries must be finite")
        if not np.array_equal(self.entries, self.entries.T):
            raise ValueError("single-particle Hamiltonian must be symmetric")
        return self


class ModeBasis(FrozenModel):
    """Eigen-decomposition of a single-particle Hamiltonian.

    Energies ascend; modes are orthonormal columns with the first
    non-negligible component of each column positive.
    """

    energies: np.ndarray
    modes: np.ndarray

    @field_validator("energies", "modes", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @model_validator(mode="after")
    def _check_shapes(self) -> "ModeBasis":
        n = self.energies.shape[0]
        if self.modes.shape != (n, n):
            raise ValueError(f"modes must be {n}x{n}, got {self.modes.shape}")
        if n > 1 and np.any(np.diff(self.energies) < 0):
            raise ValueError("energies must be ascending")
        return self
