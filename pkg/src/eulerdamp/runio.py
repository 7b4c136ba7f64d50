"""Run-directory layout and (de)serialization.

A run directory holds
    meta.json    resolved configuration, derived constants, code version
    series.csv   diagnostics records (fixed header, 17 significant digits)
    fits.json    decay-exponent fits
    checks.json  grade reports

CSV files are UTF-8 with LF line endings.  Directories are created
exclusively (`os.makedirs(exist_ok=False)`), which serializes concurrent
writers at the filesystem level.
"""

from __future__ import annotations

import json
import os
from typing import List, Optional, Sequence

from .diagnostics import CSV_COLUMNS, DiagnosticsRecord

SERIES_NAME = "series.csv"
META_NAME = "meta.json"
FITS_NAME = "fits.json"
CHECKS_NAME = "checks.json"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def create_run_dir(path: str, force: bool = False) -> str:
    if force and os.path.isdir(path):
        return path
    os.makedirs(path, exist_ok=False)
    return path


def write_series(run_dir: str, series: Sequence[DiagnosticsRecord]) -> str:
    target = os.path.join(run_dir, SERIES_NAME)
    lines = [",".join(CSV_COLUMNS)]
    for rec in series:
        lines.append(",".join(_fmt(v) for v in rec.csv_row()))
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return target


def read_series(run_dir: str) -> List[DiagnosticsRecord]:
    target = os.path.join(run_dir, SERIES_NAME)
    with open(target, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = tuple(lines[0].split(","))
    if header != CSV_COLUMNS:
        raise ValueError(
            f"unexpected series.csv header in {run_dir}: {','.join(header)}"
        )
    records = []
    for ln in lines[1:]:
        values = [float(tok) for tok in ln.split(",")]
        records.append(DiagnosticsRecord.from_csv_row(values))
    return records


def _write_json(run_dir: str, name: str, payload: dict) -> str:
    target = os.path.join(run_dir, name)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return target


def _read_json(run_dir: str, name: str) -> dict:
    with open(os.path.join(run_dir, name), encoding="utf-8") as fh:
        return json.load(fh)


def write_meta(run_dir: str, meta: dict) -> str:
    return _write_json(run_dir, META_NAME, meta)


def read_meta(run_dir: str) -> dict:
    return _read_json(run_dir, META_NAME)


def write_fits(run_dir: str, fits: dict) -> str:
    return _write_json(run_dir, FITS_NAME, fits)


def read_fits(run_dir: str) -> Optional[dict]:
    try:
        return _read_json(run_dir, FITS_NAME)
    except FileNotFoundError:
        return None


def write_checks(run_dir: str, checks: dict) -> str:
    return _write_json(run_dir, CHECKS_NAME, checks)


def read_checks(run_dir: str) -> Optional[dict]:
    try:
        return _read_json(run_dir, CHECKS_NAME)
    except FileNotFoundError:
        return None
