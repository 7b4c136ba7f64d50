"""Figure and summary-table rendering.

One log-log figure per quantity (all runs overlaid, reference-slope guide
lines anchored at the first in-window data point, never fitted) plus a
markdown table comparing fitted exponents against their reference slopes
with a pass/fail verdict at +/- 0.1.

Exponents stored in a run's `fits.json` are reported verbatim; a refit
happens only when the file (or the quantity's entry) is absent, so
re-rendering cannot drift away from the run's own record.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .data import RunData, load_runs

DEFAULT_REFERENCE_SLOPES = (-0.75, -1.25)

# theoretical decay exponents per series column
QUANTITY_REFERENCES = {
    "l2_p": -0.75,
    "l2_u": -1.25,
    "h2_grad_p": -1.25,
    "l2_dt": -1.25,
}

PASS_TOLERANCE = 0.1


@dataclass
class PlotSpec:
    run_dirs: List[str]
    quantities: Sequence[str] = ("l2_p", "l2_u")
    reference_slopes: Sequence[float] = DEFAULT_REFERENCE_SLOPES
    output_dir: str = "report"
    window: Optional[Tuple[float, float]] = None
    table_name: str = "summary.md"


@dataclass
class TableRow:
    quantity: str
    run_label: str
    exponent: float
    source: str  # "fits.json" or "refit"
    reference: float
    passed: bool


@dataclass
class RenderResult:
    figure_paths: List[str]
    table_path: str
    rows: List[TableRow] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)


def fit_loglog(times: np.ndarray, values: np.ndarray, window: Tuple[float, float]) -> float:
    """Least-squares slope of log(value) against log(1 + t) on the window."""
    lo, hi = window
    mask = (times >= lo) & (times <= hi)
    if int(mask.sum()) < 2:
        raise ValueError(f"empty fit window [{lo}, {hi}] for the available times")
    if np.any(values[mask] <= 0.0):
        raise ValueError("non-positive values inside the fit window")
    x = np.log1p(times[mask])
    y = np.log(values[mask])
    return float(np.polyfit(x, y, 1)[0])


def _window_for(run: RunData, spec: PlotSpec) -> Tuple[float, float]:
    if spec.window is not None:
        return spec.window
    stored = run.fit_window()
    if stored is not None:
        return stored
    t_end = float(run.times[-1])
    return (t_end / 10.0, t_end)


def _reference_for(quantity: str, exponent: float, slopes: Sequence[float]) -> float:
    if quantity in QUANTITY_REFERENCES:
        return QUANTITY_REFERENCES[quantity]
    return min(slopes, key=lambda s: abs(s - exponent))


def _exponent_for(run: RunData, quantity: str, window: Tuple[float, float]):
    stored = run.stored_fit(quantity)
    if stored is not None:
        return float(stored["exponent"]), "fits.json"
    return fit_loglog(run.times, run.series(quantity), window), "refit"


def _render_figure(runs: List[RunData], quantity: str, spec: PlotSpec, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    anchor = None
    for run in runs:
        times = run.times
        values = run.series(quantity)
        positive = values > 0
        ax.loglog(1.0 + times[positive], values[positive], marker=".", lw=1.0,
                  label=run.label)
        window = _window_for(run, spec)
        in_win = positive & (times >= window[0]) & (times <= window[1])
        if anchor is None and in_win.any():
            i = int(np.argmax(in_win))
            anchor = (1.0 + times[i], values[i])
    if anchor is not None:
        base = np.geomspace(anchor[0], 1.0 + float(max(r.times[-1] for r in runs)), 50)
        for slope in spec.reference_slopes:
            guide = anchor[1] * (base / anchor[0]) ** slope
            ax.loglog(base, guide, "--", lw=0.8, color="gray")
            ax.annotate(f"slope {slope:+.2f}", (base[-1], guide[-1]),
                        fontsize=7, color="gray")
    ax.set_xlabel("1 + t")
    ax.set_ylabel(quantity)
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def _format_table(rows: List[TableRow]) -> str:
    lines = [
        "| quantity | run | exponent | source | reference | verdict |",
        "|---|---|---|---|---|---|",
    ]
    for row in rows:
        verdict = "pass" if row.passed else "FAIL"
        lines.append(
            f"| {row.quantity} | {row.run_label} | {row.exponent:+.4f} | {row.source} "
            f"| {row.reference:+.2f} | {verdict} |"
        )
    return "\n".join(lines) + "\n"


def render(spec: PlotSpec) -> RenderResult:
    """Render figures and the summary table; returns what was written."""
    runs = load_runs(spec.run_dirs)
    # validate up front so the error names the offending column
    for run in runs:
        for quantity in spec.quantities:
            run.series(quantity)

    os.makedirs(spec.output_dir, exist_ok=True)
    figure_paths = []
    rows: List[TableRow] = []
    for quantity in spec.quantities:
        fig_path = os.path.join(spec.output_dir, f"{quantity}.png")
        _render_figure(runs, quantity, spec, fig_path)
        figure_paths.append(fig_path)
        for run in runs:
            window = _window_for(run, spec)
            exponent, source = _exponent_for(run, quantity, window)
            reference = _reference_for(quantity, exponent, spec.reference_slopes)
            rows.append(TableRow(
                quantity=quantity,
                run_label=run.label,
                exponent=exponent,
                source=source,
                reference=reference,
                passed=abs(exponent - reference) <= PASS_TOLERANCE,
            ))

    table_path = os.path.join(spec.output_dir, spec.table_name)
    with open(table_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_format_table(rows))
    return RenderResult(figure_paths=figure_paths, table_path=table_path, rows=rows)
