"""Gaussian-state models."""

import numpy as np
from pydantic import Field, field_validator, model_validator

from entlinks.models.common import FrozenModel, frozen_array
from entlinks.models.lattice import SingleParticleHamiltonian

HERMITIAN_TOLERANCE = 1e-10
SPECTRUM_TOLERANCE = 1e-9


class CorrelationMatrix(FrozenModel):
    """Fermionic Gaussian state, entries[i, j] = <c_i^dagger c_j>."""

    N: int = Field(ge=1)
    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        return frozen_array(value, dtype=complex)

    @model_validator(mode="after")
    def _check_state(self) -> "CorrelationMatrix":
        c = self.entries
        if c.shape != (self.N, self.N):
            raise ValueError(f"entries must be {self.N}x{self.N}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("entries must be finite")
        if np.max(np.abs(c - c.conj().T)) > HERMITIAN_TOLERANCE:
            raise ValueError("correlation matrix must be Hermitian")
        nu = np.linalg.eigvalsh(c)
        if nu[0] < -SPECTRUM_TOLERANCE or nu[-1] > 1 + SPECTRUM_TOLERANCE:
            raise ValueError(
                f"correlation eigenvalues must lie in [0, 1], got [{nu[0]:.3e}, {nu[-1]:.3e}]"
            )
        return self

    @property
    def particle_number(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def occupations(self) -> np.ndarray:
        return np.diag(self.entries).real.copy()


class QuenchSetup(FrozenModel):
    """Initial state, quench Hamiltonian and measurement times."""

    initial: CorrelationMatrix
    quench_h: SingleParticleHamiltonian
    times: tuple[float, ...]

    @model_validator(mode="after")
    def _check_setup(self) -> "QuenchSetup":
        if self.initial.N != self.quench_h.N:
            raise ValueError(
                f"state has N={self.initial.N} but quench Hamiltonian has N={self.quench_h.N}"
            )
        if any(t < 0 for t in self.times):
            raise ValueError("times must be non-negative")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        return self
