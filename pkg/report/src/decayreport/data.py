"""Run-directory loading: series.csv plus the meta/fits JSON companions.

This package talks to solver runs only through their on-disk layout:
`series.csv` (fixed header, one row per sample time), `meta.json`
(labels), and `fits.json` (previously fitted exponents, trusted verbatim
when present).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np


class MissingColumnError(KeyError):
    """A requested quantity is absent from a run's series.csv header."""


@dataclass
class RunData:
    path: str
    label: str
    columns: Dict[str, np.ndarray]
    meta: dict
    fits: Optional[dict]

    @property
    def times(self) -> np.ndarray:
        return self.columns["t"]

    def series(self, quantity: str) -> np.ndarray:
        if quantity not in self.columns:
            raise MissingColumnError(
                f"run {self.path!r} has no column {quantity!r} in series.csv"
            )
        return self.columns[quantity]

    def stored_fit(self, quantity: str) -> Optional[dict]:
        if not self.fits:
            return None
        entry = self.fits.get("fits", {}).get(quantity)
        if entry and "exponent" in entry:
            return entry
        return None

    def fit_window(self) -> Optional[tuple]:
        if self.fits and self.fits.get("window"):
            lo, hi = self.fits["window"]
            return float(lo), float(hi)
        return None


def load_run(path: str) -> RunData:
    series_path = os.path.join(path, "series.csv")
    with open(series_path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(tok) for tok in row] for row in reader if row]
    data = np.asarray(rows)
    columns = {name: data[:, i] for i, name in enumerate(header)}

    meta: dict = {}
    meta_path = os.path.join(path, "meta.json")
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)

    fits = None
    fits_path = os.path.join(path, "fits.json")
    if os.path.exists(fits_path):
        with open(fits_path, encoding="utf-8") as fh:
            fits = json.load(fh)

    label = meta.get("label") or os.path.basename(os.path.normpath(path))
    return RunData(path=path, label=label, columns=columns, meta=meta, fits=fits)


def load_runs(paths: List[str]) -> List[RunData]:
    return [load_run(p) for p in paths]
