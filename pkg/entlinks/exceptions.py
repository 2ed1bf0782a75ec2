"""Domain exceptions.

Every error raised on purpose by the toolkit derives from EntlinksError, so
the CLI can map validation problems and runtime physics problems onto
distinct exit codes.
"""


class EntlinksError(Exception):
    """Base class for toolkit errors."""


class DimensionMismatchError(EntlinksError):
    """Matrices, coupling lists or grids disagree in size."""


class EigensolverError(EntlinksError):
    """The dense eigensolver did not converge."""


class DegenerateGroundStateError(EntlinksError):
    """The single-particle gap at the requested filling is below tolerance."""

    def __init__(self, gap: float, n_particles: int):
        super().__init__(
            f"degenerate ground state: gap {gap:.3e} at filling n={n_particles}"
        )
        self.gap = gap
        self.n_particles = n_particles


class InvalidStateError(EntlinksError):
    """A correlation matrix or block restriction is not a physical state."""


class OracleInputError(EntlinksError):
    """The Fock-space oracle cannot represent the requested input."""


class FrontError(EntlinksError):
    """Invalid input for the delta-line front engine."""


class CFLViolationError(EntlinksError):
    """Time step too large for the explicit leapfrog scheme."""


class GridMismatchError(EntlinksError):
    """Measured and predicted grids do not overlap."""


class ConfigError(EntlinksError):
    """Experiment configuration failed validation.

    Carries every issue found, not just the first.
    """

    def __init__(self, issues: list):
        self.issues = list(issues)
        lines = "\n".join(str(issue) for issue in self.issues)
        super().__init__(f"{len(self.issues)} configuration error(s):\n{lines}")
