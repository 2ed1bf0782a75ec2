"""Shared enums and base types for domain models."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict


class Boundary(str, Enum):
    """Boundary condition of a chain."""

    OPEN = "open"
    PERIODIC = "periodic"


class CouplingKind(str, Enum):
    """Hopping pattern of a single-particle Hamiltonian."""

    HOMOGENEOUS = "homogeneous"
    DIMER = "dimer"
    RAINBOW = "rainbow"
    CUSTOM = "custom"


class StateKind(str, Enum):
    """Initial states with a known front description."""

    DIMER = "dimer"
    RAINBOW = "rainbow"
    BRIDGE = "bridge"


class InitialKind(str, Enum):
    """Initial state of an experiment."""

    HOMOGENEOUS = "homogeneous"
    DIMER = "dimer"
    RAINBOW = "rainbow"
    BRIDGE = "bridge"
    CUSTOM = "custom"


class QuenchKind(str, Enum):
    """Hamiltonian the initial state evolves under."""

    H0 = "h0"
    CUSTOM = "custom"
    NONE = "none"


class BlockKind(str, Enum):
    """Which blocks an experiment measures."""

    ALL_CONTIGUOUS = "all_contiguous"
    LATERAL = "lateral"
    CENTRAL = "central"
    EXPLICIT = "explicit"


class Orientation(str, Enum):
    """Direction of a delta line in the (x, y) square."""

    DIAGONAL = "diagonal"  # x - y = c
    ANTIDIAGONAL = "antidiagonal"  # x + y = c


class FrozenModel(BaseModel):
    """Immutable model that may hold numpy arrays."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def frozen_array(values, dtype=None) -> np.ndarray:
    """Copy into a read-only numpy array."""
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr
