"""Quench experiment pipeline and CSV artifacts.

A run builds the initial state, evolves it over the time grid, measures
every contiguous block entropy and the link matrix at each time, and
writes the requested artifacts plus a manifest of content hashes.
"""

import hashlib
import logging
import shutil
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from entlinks.config import settings
from entlinks.exceptions import EntlinksError
from entlinks.models.common import (
    BlockKind,
    Boundary,
    CouplingKind,
    FrozenModel,
    InitialKind,
    QuenchKind,
    StateKind,
)
from entlinks.models.entanglement import ELMatrix, EntropyTable
from entlinks.models.experiment import ExperimentConfig
from entlinks.models.fronts import QPPParams
from entlinks.models.lattice import CouplingSpec, SingleParticleHamiltonian
from entlinks.models.state import CorrelationMatrix
from entlinks.services import (
    entanglement_service,
    front_service,
    gaussian_service,
    lattice_service,
    qpp_service,
    report_service,
    wave_service,
)
from entlinks.services.config_service import format_config

logger = logging.getLogger(__name__)

MANIFEST = "manifest.txt"
FRONT_SPEED = 2.0  # quenches to H0

Block = tuple[tuple[int, int], ...]


class Measurement(FrozenModel):
    """Everything measured on the time grid, one entry per time."""

    times: tuple[float, ...]
    states: list[CorrelationMatrix]
    tables: list[EntropyTable]
    links: list[ELMatrix]


class ArtifactWriter:
    """Writes files under an output directory and removes them on failure."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.files: list[str] = []
        self._created_dir = not self.out_dir.exists()

    def __enter__(self) -> "ArtifactWriter":
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is not None:
            self.discard()

    def _path(self, relpath: str) -> Path:
        path = self.out_dir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        self.files.append(relpath)
        return path

    def csv(self, relpath: str, frame: pd.DataFrame) -> None:
        frame.to_csv(self._path(relpath), index=False, lineterminator="\n")
        logger.info("Wrote %s (%d rows)", relpath, len(frame))

    def text(self, relpath: str, content: str) -> None:
        self._path(relpath).write_text(content, encoding="utf-8")

    def manifest(self) -> list[str]:
        """Write manifest.txt: `<relative-path> <sha-256>` per file, sorted."""
        lines = []
        for relpath in sorted(set(self.files)):
            digest = hashlib.sha256((self.out_dir / relpath).read_bytes()).hexdigest()
            lines.append(f"{relpath} {digest}")
        (self.out_dir / MANIFEST).write_text("\n".join(lines) + "\n", encoding="utf-8")
        return sorted(set(self.files)) + [MANIFEST]

    def discard(self) -> None:
        logger.warning("Removing %d partial outputs from %s", len(self.files), self.out_dir)
        if self._created_dir:
            shutil.rmtree(self.out_dir, ignore_errors=True)
            return
        for relpath in self.files + [MANIFEST]:
            (self.out_dir / relpath).unlink(missing_ok=True)


def read_csv(path: str | Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def read_manifest(out_dir: str | Path) -> dict[str, str]:
    entries = {}
    for line in (Path(out_dir) / MANIFEST).read_text(encoding="utf-8").splitlines():
        relpath, digest = line.rsplit(" ", 1)
        entries[relpath] = digest
    return entries


# State construction

def initial_state(cfg: ExperimentConfig) -> CorrelationMatrix:
    init = cfg.initial_state
    if init.kind == InitialKind.BRIDGE:
        return gaussian_service.bridge_state_correlations(cfg.N)
    spec = CouplingSpec(
        kind=CouplingKind(init.kind.value),
        N=cfg.N,
        boundary=cfg.boundary,
        delta=init.delta,
        h=init.h,
        values=init.values,
    )
    h = lattice_service.hamiltonian_from_spec(spec)
    logger.info("Building %s ground state, N=%d, %s", init.kind.value, cfg.N, cfg.boundary.value)
    return gaussian_service.ground_state_correlations(h)


def quench_hamiltonian(cfg: ExperimentConfig) -> SingleParticleHamiltonian | None:
    if cfg.quench.kind == QuenchKind.H0:
        return lattice_service.homogeneous_hamiltonian(cfg.N, cfg.boundary)
    if cfg.quench.kind == QuenchKind.CUSTOM:
        return lattice_service.single_particle_matrix(cfg.quench.values, cfg.N, cfg.boundary)
    return None


def resolve_blocks(cfg: ExperimentConfig) -> list[Block]:
    N, section = cfg.N, cfg.blocks
    if section.kind == BlockKind.ALL_CONTIGUOUS:
        return [((a, b),) for a in range(N) for b in range(a + 1, N + 1)]
    if section.kind == BlockKind.LATERAL:
        return [((0, size),) for size in section.sizes]
    if section.kind == BlockKind.CENTRAL:
        return [(((N - size) // 2, (N + size) // 2),) for size in section.sizes]
    return [tuple(block) for block in section.blocks]


def block_label(block: Block) -> str:
    return "+".join(f"{a}:{b}" for a, b in block)


def block_sites(block: Block) -> list[int]:
    return [i for a, b in block for i in range(a, b)]


def front_state(cfg: ExperimentConfig) -> StateKind | None:
    """State kind with a front description, when the run is a quench to H0."""
    if cfg.quench.kind != QuenchKind.H0:
        return None
    try:
        return StateKind(cfg.initial_state.kind.value)
    except ValueError:
        return None


# Measurement

def _measure_one(state: CorrelationMatrix, t: float) -> tuple[EntropyTable, ELMatrix]:
    table = entanglement_service.contiguous_entropy_table(state, t, threads=1)
    return table, entanglement_service.el_matrix(table)


def measure(
    cfg: ExperimentConfig,
    times: Sequence[float] | None = None,
    threads: int | None = None,
) -> Measurement:
    """Evolve the initial state and measure tables and links at each time."""
    times = tuple(cfg.times.times if times is None else times)
    workers = threads or settings.threads
    C0 = initial_state(cfg)
    states = gaussian_service.evolve_many(C0, quench_hamiltonian(cfg), times, workers)

    if workers <= 1:
        results = [_measure_one(C, t) for C, t in zip(states, times)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_measure_one, states, times))
    logger.info("Measured %d snapshots of N=%d", len(times), cfg.N)
    return Measurement(
        times=times,
        states=states,
        tables=[table for table, _ in results],
        links=[links for _, links in results],
    )


def entropy_frame(measurement: Measurement, blocks: Sequence[Block]) -> pd.DataFrame:
    """Measured entropies of the contiguous blocks, columns t, a, b, S_nats."""
    contiguous = [block[0] for block in blocks if len(block) == 1]
    rows = [
        (t, a, b, table.entropy(a, b))
        for t, table in zip(measurement.times, measurement.tables)
        for a, b in contiguous
    ]
    frame = pd.DataFrame(rows, columns=["t", "a", "b", "S_nats"])
    return frame.sort_values(["t", "a", "b"], kind="stable").reset_index(drop=True)


def table_frame(measurement: Measurement) -> pd.DataFrame:
    N = measurement.tables[0].N
    a, b = np.triu_indices(N + 1, 1)
    frames = [
        pd.DataFrame({"t": table.t, "a": a, "b": b, "S_nats": table.S[a, b]})
        for table in measurement.tables
    ]
    return pd.concat(frames, ignore_index=True)


def links_frame(links: ELMatrix) -> pd.DataFrame:
    i, j = np.triu_indices(links.N, 1)
    return pd.DataFrame({"t": links.t, "i": i, "j": j, "J_nats": links.J[i, j]})


def subdiagonal_frame(measurement: Measurement, periodic: bool) -> pd.DataFrame:
    series = entanglement_service.subdiagonal_series(measurement.links, periodic)
    bonds = series.links.shape[1]
    return pd.DataFrame({
        "t": np.repeat(series.times, bonds),
        "i": np.tile(np.arange(bonds), series.times.size),
        "J_nats": series.links.ravel(),
    })


def fragment_frame(measurement: Measurement, blocks: Sequence[Block]) -> pd.DataFrame:
    """Multi-interval blocks: exact entropy next to the link reconstruction."""
    rows = []
    for t, state, links in zip(measurement.times, measurement.states, measurement.links):
        for block in blocks:
            if len(block) < 2:
                continue
            sites = block_sites(block)
            rows.append((
                t,
                block_label(block),
                entanglement_service.block_entropy(state, sites),
                entanglement_service.reconstruct_entropy(links, sites),
            ))
    return pd.DataFrame(rows, columns=["t", "block", "S_nats", "S_links"])


# Predictions

def qpp_params(cfg: ExperimentConfig, sigma: float) -> QPPParams:
    return QPPParams(sigma=sigma, v=FRONT_SPEED, N=cfg.N, boundary=cfg.boundary)


def predict_frame(
    kind: StateKind,
    params: QPPParams,
    times: Sequence[float],
    blocks: Sequence[Block],
) -> pd.DataFrame:
    """Front-engine entropies, columns t, a, b, S_pred (contiguous) or block label."""
    fronts = front_service.initial_fronts(kind, params)
    rows = []
    for t in times:
        current = front_service.propagate_fronts(fronts, t, params)
        for block in blocks:
            S = front_service.integrate_fronts(current, list(block))
            a, b = block[0] if len(block) == 1 else (-1, -1)
            rows.append((t, a, b, block_label(block), S))
    frame = pd.DataFrame(rows, columns=["t", "a", "b", "block", "S_pred"])
    return frame.sort_values(["t", "a", "b", "block"], kind="stable").reset_index(drop=True)


def fit_sigma(kind: StateKind, measurement: Measurement) -> float:
    return qpp_service.fit_sigma(kind, measurement.tables, FRONT_SPEED)


def _write_report(writer: ArtifactWriter, measured: pd.DataFrame, predicted: pd.DataFrame, sigma: float) -> None:
    contiguous = predicted[predicted["a"] >= 0]
    report = report_service.compare_report(measured, contiguous, sigma=sigma, v=FRONT_SPEED)
    rows, crossings, summary = report_service.report_frames(report)
    writer.csv("report.csv", rows)
    writer.csv("crossings.csv", crossings)
    writer.csv("report_summary.csv", summary)
    logger.info(
        "Report: max |residual| %.4g, mean %.4g, sigma %.4g",
        report.max_abs_residual, report.mean_abs_residual, sigma,
    )


# Wave comparison

def wave_frame(
    cfg: ExperimentConfig,
    measurement: Measurement,
    sigma: float | None,
) -> pd.DataFrame:
    """Solver from the first measured link matrix, compared at every time."""
    boundary = wave_service.wave_boundary(cfg.boundary)
    field = wave_service.init_field(
        measurement.links[0],
        v=FRONT_SPEED,
        boundary=boundary,
        M=cfg.wave.resolution,
        mask_diagonal=cfg.wave.mask_diagonal,
    )
    snapshots = wave_service.run(field, measurement.times)

    kind = front_state(cfg)
    fronts = None
    if kind is not None and sigma is not None:
        params = qpp_params(cfg, sigma)
        fronts = front_service.initial_fronts(kind, params)

    rows = []
    for t, snapshot, links in zip(measurement.times, snapshots, measurement.links):
        error = wave_service.field_error(snapshot, links)
        rows.append((t, "measured", error.l1, error.front_offset))
        if fronts is not None:
            current = front_service.propagate_fronts(fronts, t, params)
            error = wave_service.field_error(snapshot, current)
            rows.append((t, "fronts", error.l1, error.front_offset))
    return pd.DataFrame(rows, columns=["t", "reference", "l1", "front_offset"])


# Entry points

def run_experiment(
    cfg: ExperimentConfig,
    out_dir: str | Path,
    threads: int | None = None,
) -> list[str]:
    """Full pipeline; returns the written files relative to out_dir."""
    with ArtifactWriter(Path(out_dir)) as writer:
        writer.text("config.txt", format_config(cfg))
        measurement = measure(cfg, threads=threads)
        blocks = resolve_blocks(cfg)
        measured = entropy_frame(measurement, blocks)
        writer.csv("entropy.csv", measured)
        if any(len(block) > 1 for block in blocks):
            writer.csv("fragments.csv", fragment_frame(measurement, blocks))

        if cfg.outputs.entropy_table:
            writer.csv("entropy_table.csv", table_frame(measurement))
        if cfg.outputs.el_snapshots:
            for k, links in enumerate(measurement.links):
                writer.csv(f"el/el_t{k:04d}.csv", links_frame(links))
        if cfg.outputs.subdiagonal:
            periodic = cfg.boundary == Boundary.PERIODIC
            writer.csv("subdiagonal.csv", subdiagonal_frame(measurement, periodic))

        sigma = None
        kind = front_state(cfg)
        if cfg.outputs.predictions or cfg.outputs.wave_compare:
            if kind is None:
                logger.warning("No front description for %s with quench %s; skipping predictions",
                               cfg.initial_state.kind.value, cfg.quench.kind.value)
            else:
                sigma = fit_sigma(kind, measurement)
        if cfg.outputs.predictions and kind is not None:
            predicted = predict_frame(kind, qpp_params(cfg, sigma), measurement.times, blocks)
            writer.csv("predictions.csv", predicted)
            if not measured.empty:
                _write_report(writer, measured, predicted, sigma)
        if cfg.outputs.wave_compare:
            writer.csv("wave.csv", wave_frame(cfg, measurement, sigma))

        return writer.manifest()


def run_predictions(
    cfg: ExperimentConfig,
    out_dir: str | Path,
    sigma: float | None = None,
    threads: int | None = None,
) -> list[str]:
    """Front-engine predictions only; sigma is fitted from a minimal measurement if absent."""
    kind = front_state(cfg)
    if kind is None:
        raise EntlinksError(
            f"no front description for initial state {cfg.initial_state.kind.value} "
            f"with quench {cfg.quench.kind.value}"
        )
    if sigma is None:
        times = cfg.times.times
        needed = {StateKind.RAINBOW: [times[0]], StateKind.DIMER: [times[-1]]}.get(kind, [])
        tables = measure(cfg, needed, threads).tables if needed else []
        sigma = qpp_service.fit_sigma(kind, tables, FRONT_SPEED)

    with ArtifactWriter(Path(out_dir)) as writer:
        writer.text("config.txt", format_config(cfg))
        writer.csv("predictions.csv", predict_frame(kind, qpp_params(cfg, sigma), cfg.times.times, resolve_blocks(cfg)))
        return writer.manifest()


def run_comparison(
    measured_path: str | Path,
    predicted_path: str | Path,
    out_dir: str | Path,
    sigma: float | None = None,
) -> list[str]:
    """Report from previously written entropy and prediction CSVs."""
    measured = read_csv(measured_path)
    predicted = read_csv(predicted_path)
    if "a" in predicted:
        predicted = predicted[predicted["a"] >= 0]
    with ArtifactWriter(Path(out_dir)) as writer:
        report = report_service.compare_report(measured, predicted, sigma=sigma, v=FRONT_SPEED)
        rows, crossings, summary = report_service.report_frames(report)
        writer.csv("report.csv", rows)
        writer.csv("crossings.csv", crossings)
        writer.csv("report_summary.csv", summary)
        return writer.manifest()


def run_wave(
    cfg: ExperimentConfig,
    out_dir: str | Path,
    threads: int | None = None,
) -> list[str]:
    """Measure the links on the time grid and compare them with the wave solver."""
    with ArtifactWriter(Path(out_dir)) as writer:
        writer.text("config.txt", format_config(cfg))
        measurement = measure(cfg, threads=threads)
        kind = front_state(cfg)
        sigma = fit_sigma(kind, measurement) if kind is not None else None
        writer.csv("wave.csv", wave_frame(cfg, measurement, sigma))
        return writer.manifest()
