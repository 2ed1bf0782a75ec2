"""Experiment configuration and comparison-report models."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, model_validator

from entlinks.models.common import BlockKind, Boundary, CouplingKind, InitialKind, QuenchKind
from entlinks.models.lattice import CouplingSpec

Interval = tuple[int, int]

# validation context flag: cross-field checks are left to the config parser
DEFER_CONSISTENCY = "defer_consistency"

COUPLING_PARAMETER = {
    InitialKind.DIMER: "delta",
    InitialKind.RAINBOW: "h",
    InitialKind.CUSTOM: "values",
}


def validation_message(error: dict) -> str:
    """Message of a pydantic error without the 'Value error, ' prefix."""
    cause = error.get("ctx", {}).get("error")
    return str(cause) if cause is not None else error["msg"]


class SectionModel(BaseModel):
    """Config section: immutable, unknown keys rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class InitialStateSection(SectionModel):
    kind: InitialKind
    delta: float | None = None
    h: float | None = None
    values: tuple[float, ...] | None = None


class QuenchSection(SectionModel):
    kind: QuenchKind = QuenchKind.H0
    values: tuple[float, ...] | None = None


class TimeGrid(SectionModel):
    """Uniform grid t_k = start + k (stop - start) / (count - 1)."""

    start: float = Field(default=0.0, ge=0)
    stop: float = Field(default=0.0, ge=0)
    count: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_grid(self) -> "TimeGrid":
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("time grid bounds must be finite")
        if self.count > 1 and self.stop <= self.start:
            raise ValueError(f"stop ({self.stop}) must exceed start ({self.start}) when count > 1")
        return self

    @property
    def times(self) -> tuple[float, ...]:
        if self.count == 1:
            return (self.start,)
        k = np.arange(self.count)
        return tuple(float(t) for t in self.start + k * (self.stop - self.start) / (self.count - 1))


class BlockSection(SectionModel):
    """Blocks to measure.

    lateral and central take block sizes; explicit takes blocks, each a
    tuple of half-open intervals. Without a kind, sizes imply lateral,
    blocks imply explicit and an empty section measures every contiguous
    block.
    """

    kind: BlockKind = BlockKind.ALL_CONTIGUOUS
    sizes: tuple[int, ...] | None = None
    blocks: tuple[tuple[Interval, ...], ...] | None = None

    @model_validator(mode="before")
    @classmethod
    def _infer_kind(cls, data):
        if isinstance(data, dict) and "kind" not in data:
            if data.get("sizes") is not None:
                return {**data, "kind": BlockKind.LATERAL}
            if data.get("blocks") is not None:
                return {**data, "kind": BlockKind.EXPLICIT}
        return data


class OutputSection(SectionModel):
    entropy_table: bool = False
    el_snapshots: bool = False
    subdiagonal: bool = False
    predictions: bool = False
    wave_compare: bool = False


class WaveSection(SectionModel):
    resolution: int | None = Field(default=None, ge=1)
    mask_diagonal: bool = True


class ExperimentConfig(SectionModel):
    """A complete quench experiment."""

    name: str = "experiment"
    N: int = Field(ge=2)
    boundary: Boundary = Boundary.OPEN
    seed: int = 0
    initial_state: InitialStateSection
    quench: QuenchSection = QuenchSection()
    times: TimeGrid = TimeGrid()
    blocks: BlockSection = BlockSection()
    outputs: OutputSection = OutputSection()
    wave: WaveSection = WaveSection()

    @model_validator(mode="after")
    def _check_consistency(self, info: ValidationInfo) -> "ExperimentConfig":
        if info.context and info.context.get(DEFER_CONSISTENCY):
            return self
        issues = self.consistency_issues()
        if issues:
            raise ValueError("; ".join(message for _, message in issues))
        return self

    def consistency_issues(self) -> list[tuple[tuple[str, ...], str]]:
        """Cross-field problems, each with the location of the offending key."""
        N = self.N
        init = self.initial_state
        issues: list[tuple[tuple[str, ...], str]] = []

        if init.kind == InitialKind.BRIDGE:
            if N % 4:
                issues.append((("N",), f"bridge state needs N divisible by 4, got N={N}"))
        elif init.kind in (InitialKind.DIMER, InitialKind.RAINBOW) and N % 2:
            issues.append((("N",), f"{init.kind.value} couplings need an even number of sites, got N={N}"))
        else:
            # CouplingSpec carries the per-kind parameter checks
            try:
                CouplingSpec(
                    kind=CouplingKind(init.kind.value),
                    N=N,
                    boundary=self.boundary,
                    delta=init.delta,
                    h=init.h,
                    values=init.values,
                )
            except ValidationError as exc:
                field = COUPLING_PARAMETER.get(init.kind)
                loc = ("initial_state", field) if field else ("initial_state",)
                issues.extend((loc, validation_message(error)) for error in exc.errors())

        if self.quench.kind == QuenchKind.CUSTOM:
            expected = N if self.boundary == Boundary.PERIODIC else N - 1
            if self.quench.values is None or len(self.quench.values) != expected:
                issues.append((("quench", "values"), f"custom quench needs {expected} couplings"))

        blocks = self.blocks
        if blocks.kind in (BlockKind.LATERAL, BlockKind.CENTRAL):
            if not blocks.sizes:
                issues.append((("blocks", "sizes"), f"{blocks.kind.value} blocks need sizes"))
            for size in blocks.sizes or ():
                if not 1 <= size <= N:
                    issues.append((("blocks", "sizes"), f"block size {size} outside 1..{N}"))
                elif blocks.kind == BlockKind.CENTRAL and (N - size) % 2:
                    issues.append((("blocks", "sizes"), f"central block of size {size} cannot be centred in N={N}"))
        elif blocks.kind == BlockKind.EXPLICIT:
            if not blocks.blocks:
                issues.append((("blocks", "blocks"), "explicit blocks need at least one block"))
            for block in blocks.blocks or ():
                for a, b in block:
                    if not 0 <= a < b <= N:
                        issues.append((("blocks", "blocks"), f"interval [{a}, {b}) outside 0..{N}"))

        if self.wave.resolution is not None and self.wave.resolution < N:
            issues.append((("wave", "resolution"), f"wave resolution {self.wave.resolution} is below N={N}"))
        return issues


class ConfigIssue(BaseModel):
    """One configuration problem, located by line when possible."""

    line: int | None = None
    key: str
    message: str

    def __str__(self) -> str:
        prefix = f"line {self.line}: " if self.line is not None else ""
        return f"{prefix}{self.key} -> {self.message}"


class ReportRow(BaseModel):
    a: int
    b: int
    t: float
    measured: float
    predicted: float
    residual: float


class CrossingTime(BaseModel):
    """First breakpoint of a measured and a predicted entropy curve."""

    a: int
    b: int
    measured: float
    predicted: float
    error: float


class ComparisonReport(BaseModel):
    """Measured against predicted entropies on the common (block, time) grid."""

    rows: list[ReportRow]
    crossings: list[CrossingTime] = []
    max_abs_residual: float
    mean_abs_residual: float
    sigma: float | None = None
    v: float = 2.0
    max_crossing_error: float | None = None
