"""Decay-report companion: plots and exponent tables from run directories."""

__version__ = "0.1.0"

from .data import MissingColumnError, RunData, load_run, load_runs  # noqa: F401
from .render import (  # noqa: F401
    DEFAULT_REFERENCE_SLOPES,
    PASS_TOLERANCE,
    QUANTITY_REFERENCES,
    PlotSpec,
    RenderResult,
    TableRow,
    fit_loglog,
    render,
)
