"""Measured-versus-predicted entropy reports."""

import logging
from collections.abc import Sequence

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from entlinks.exceptions import GridMismatchError
from entlinks.models.experiment import ComparisonReport, CrossingTime, ReportRow

logger = logging.getLogger(__name__)

KEYS = ["a", "b", "t"]


def _hinge_residual(times: np.ndarray, values: np.ndarray, breakpoint: float) -> float:
    design = np.column_stack([np.ones_like(times), times, np.maximum(0.0, times - breakpoint)])
    coefficients = np.linalg.lstsq(design, values, rcond=None)[0]
    return float(np.sum((values - design @ coefficients) ** 2))


def estimate_breakpoint(times: Sequence[float], values: Sequence[float]) -> float:
    """Breakpoint of the best continuous two-segment linear fit.

    Grid search over the interior sample times, refined between the
    neighbours of the best one.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size < 4:
        raise ValueError(f"need at least 4 samples to locate a breakpoint, got {times.size}")

    candidates = times[1:-1]
    scores = [_hinge_residual(times, values, tb) for tb in candidates]
    best = int(np.argmin(scores)) + 1
    result = minimize_scalar(
        lambda tb: _hinge_residual(times, values, tb),
        bounds=(times[best - 1], times[best + 1]),
        method="bounded",
    )
    return float(result.x) if result.fun <= scores[best - 1] else float(times[best])


def compare_report(
    measured: pd.DataFrame,
    predicted: pd.DataFrame,
    sigma: float | None = None,
    v: float = 2.0,
) -> ComparisonReport:
    """Residuals on the common (block, time) grid plus crossing-time errors.

    Both frames carry columns a, b, t and an entropy column (S_nats for
    measurements, S_pred for predictions).
    """
    merged = measured[KEYS + ["S_nats"]].merge(
        predicted[KEYS + ["S_pred"]], on=KEYS, how="inner", validate="one_to_one"
    )
    if merged.empty:
        raise GridMismatchError("measured and predicted entropies share no (block, time) points")
    dropped = max(len(measured), len(predicted)) - len(merged)
    if dropped:
        logger.warning("%d (block, time) points lack a counterpart and are ignored", dropped)

    merged = merged.sort_values(KEYS).reset_index(drop=True)
    merged["residual"] = merged["S_nats"] - merged["S_pred"]
    rows = [
        ReportRow(a=int(r.a), b=int(r.b), t=float(r.t), measured=float(r.S_nats),
                  predicted=float(r.S_pred), residual=float(r.residual))
        for r in merged.itertuples(index=False)
    ]

    crossings = []
    for (a, b), curve in merged.groupby(["a", "b"], sort=True):
        if len(curve) < 4:
            continue
        t_measured = estimate_breakpoint(curve["t"], curve["S_nats"])
        t_predicted = estimate_breakpoint(curve["t"], curve["S_pred"])
        crossings.append(
            CrossingTime(a=int(a), b=int(b), measured=t_measured, predicted=t_predicted,
                         error=abs(t_measured - t_predicted))
        )

    residuals = merged["residual"].abs()
    return ComparisonReport(
        rows=rows,
        crossings=crossings,
        max_abs_residual=float(residuals.max()),
        mean_abs_residual=float(residuals.mean()),
        sigma=sigma,
        v=v,
        max_crossing_error=max((c.error for c in crossings), default=None),
    )


def report_frames(report: ComparisonReport) -> tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
    """Rows, crossings and summary as data frames ready for CSV output."""
    rows = pd.DataFrame(
        [r.model_dump() for r in report.rows],
        columns=["a", "b", "t", "measured", "predicted", "residual"],
    ).rename(columns={"measured": "S_measured", "predicted": "S_predicted"})
    crossings = pd.DataFrame(
        [c.model_dump() for c in report.crossings],
        columns=["a", "b", "measured", "predicted", "error"],
    ).rename(columns={"measured": "t_measured", "predicted": "t_predicted"})
    summary = pd.DataFrame(
        {
            "key": ["max_abs_residual", "mean_abs_residual", "sigma", "v", "max_crossing_error"],
            "value": [
                report.max_abs_residual,
                report.mean_abs_residual,
                np.nan if report.sigma is None else report.sigma,
                report.v,
                np.nan if report.max_crossing_error is None else report.max_crossing_error,
            ],
        }
    )
    return rows, crossings, summary
