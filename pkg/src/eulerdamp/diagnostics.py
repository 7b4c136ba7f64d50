"""Norm/energy tracking, decay-exponent fitting, and run-level checks.

A `DiagnosticsRecord` samples every monitored quantity at one time; a run
produces a list of them (the *series*).  `fit_decay` measures algebraic
decay exponents as the least-squares slope of log(value) against
log(1 + t).  The check operations grade a finished series against the
expected structure: a bounded energy ratio, the entropy transport bounds,
and (report-only) the sharp constants of the standard Sobolev embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import model, spectral
from .model import PhysicalParams, StateField
from .spectral import SpectralGrid

# Exact column order of series.csv.
CSV_COLUMNS = (
    "t", "l2_p", "l2_u", "l2_s", "h3_p", "h3_u", "h3_s", "h2_grad_p",
    "l2_dt", "min_total_p", "cross_low", "cross_high", "h3fun", "m_of_t",
)

# Fixed weights of the monitored energy surrogates.
D_LOW = 10.0
D_HIGH = 10.0


@dataclass
class DiagnosticsRecord:
    """Time-stamped norms, cross terms, and energy surrogates."""

    t: float
    l2_p: float
    l2_u: float
    l2_s: float
    h3_p: float
    h3_u: float
    h3_s: float
    h2_grad_p: float
    l2_dt: float
    min_total_p: float
    cross_low: float
    cross_high: float
    h3fun: float
    m_of_t: float
    max_abs_s: float = math.nan  # in-memory only; not part of the CSV schema

    @property
    def valid(self) -> bool:
        return self.min_total_p > 0.0

    @property
    def e_low(self) -> float:
        """Low-order energy surrogate D1 ||(p,u)||^2 + <grad p, u>."""
        return D_LOW * (self.l2_p**2 + self.l2_u**2) + self.cross_low

    @property
    def e_high(self) -> float:
        """High-order energy surrogate D2 h3fun + high cross terms."""
        return D_HIGH * self.h3fun + self.cross_high

    def csv_row(self) -> List[float]:
        return [getattr(self, name) for name in CSV_COLUMNS]

    @classmethod
    def from_csv_row(cls, values: Sequence[float]) -> "DiagnosticsRecord":
        return cls(**dict(zip(CSV_COLUMNS, values)))


def state_h3_norm(state: StateField, grid: SpectralGrid) -> float:
    """Combined H3 norm of the (p, u, s) triple."""
    return float(np.sqrt(
        spectral.norms(state.p, "h3", grid) ** 2
        + spectral.norms(state.u, "h3", grid) ** 2
        + spectral.norms(state.s, "h3", grid) ** 2
    ))


def record(state: StateField, t: float, params: PhysicalParams) -> DiagnosticsRecord:
    """Compute every monitored quantity at one time.

    The time-derivative norm uses the full right-hand side
    (-kappa2 div u + F, -kappa2 grad p - a u + G, -kappa1 u . grad s)
    evaluated at the current state.  A state with non-positive total
    pressure still yields a record; it is flagged through min_total_p.
    """
    grid = state.grid
    p_hat = spectral.to_spectral(state.p, grid)
    u_hat = spectral.to_spectral(state.u, grid)
    s_hat = spectral.to_spectral(state.s, grid)
    grad_p_hat = spectral.grad_hat(p_hat, grid)

    div_u = spectral.to_physical(spectral.div_hat(u_hat, grid), grid)
    grad_p = spectral.to_physical(grad_p_hat, grid)
    grad_s = spectral.to_physical(spectral.grad_hat(s_hat, grid), grid)
    grad_u = np.empty((3, 3) + grid.shape)
    k_vec = grid.k_vectors
    for i in range(3):
        for j in range(3):
            grad_u[i, j] = spectral.to_physical(1j * k_vec[j] * u_hat[i], grid)

    min_total_p = state.min_total_pressure(params)
    if min_total_p > 0.0:
        F = model.pressure_coupling(state.p, div_u, state.u, grad_p, params)
        G = model.velocity_coupling(state.p, state.u, grad_u, grad_p, state.s, params)
        dS = model.entropy_coupling(state.u, grad_s, params)
        dp = -params.kappa2 * div_u + F
        du = -params.kappa2 * grad_p - params.a * state.u + G
        l2_dt = float(np.sqrt(
            spectral.norms(dp, "l2", grid) ** 2
            + spectral.norms(du, "l2", grid) ** 2
            + spectral.norms(dS, "l2", grid) ** 2
        ))
    else:
        # flagged record: the equation of state is not evaluable here
        l2_dt = math.nan

    k2 = grid.k_mag**2
    sob2 = spectral.sobolev_multiplier(2, grid)
    h2_grad_p = spectral.spectral_l2(grad_p_hat, grid, multiplier=sob2)
    h3_u = spectral.norms(state.u, "h3", grid)
    h3fun = h2_grad_p**2 + h3_u**2

    return DiagnosticsRecord(
        t=float(t),
        l2_p=spectral.spectral_l2(p_hat, grid),
        l2_u=spectral.spectral_l2(u_hat, grid),
        l2_s=spectral.spectral_l2(s_hat, grid),
        h3_p=spectral.norms(state.p, "h3", grid),
        h3_u=h3_u,
        h3_s=spectral.norms(state.s, "h3", grid),
        h2_grad_p=h2_grad_p,
        l2_dt=l2_dt,
        min_total_p=min_total_p,
        cross_low=spectral.spectral_inner(grad_p_hat, u_hat, grid),
        cross_high=(
            spectral.spectral_inner(grad_p_hat, u_hat, grid, multiplier=k2)
            + spectral.spectral_inner(grad_p_hat, u_hat, grid, multiplier=k2**2)
        ),
        h3fun=h3fun,
        m_of_t=(1.0 + float(t)) ** 2.5 * h3fun,
        max_abs_s=float(np.max(np.abs(state.s))),
    )


# --------------------------------------------------------------------------
# decay fitting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit value ~ (1 + t)^exponent on a window."""

    quantity: str
    window: Tuple[float, float]
    exponent: float
    r_squared: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "window": list(self.window),
            "exponent": self.exponent,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
        }


def fit_decay(series: Sequence[DiagnosticsRecord], quantity: str,
              window: Tuple[float, float]) -> DecayFit:
    """Fit log(quantity) against log(1 + t) on the given time window."""
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise ValueError(f"window must satisfy t_lo < t_hi, got {window}")
    times, values = [], []
    for rec in series:
        if t_lo <= rec.t <= t_hi:
            times.append(rec.t)
            values.append(getattr(rec, quantity))
    if len(times) < 5:
        raise ValueError(f"need >= 5 records in the window, found {len(times)}")
    values = np.asarray(values)
    if np.any(values <= 0.0):
        raise ValueError(
            f"{quantity} has non-positive values in the window (decayed to the "
            "rounding floor?); shrink the window"
        )
    x = np.log1p(np.asarray(times))
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r_sq = 1.0 if ss_res < 1e-28 else 0.0
    else:
        r_sq = max(0.0, 1.0 - ss_res / ss_tot)
    return DecayFit(
        quantity=quantity,
        window=(float(t_lo), float(t_hi)),
        exponent=float(slope),
        r_squared=float(min(1.0, r_sq)),
        n_points=len(times),
    )


def default_fit_window(series: Sequence[DiagnosticsRecord]) -> Tuple[float, float]:
    """Default window [t_end/10, t_end] over a recorded series."""
    t_end = series[-1].t
    return (t_end / 10.0, t_end)


# --------------------------------------------------------------------------
# run-level checks
# --------------------------------------------------------------------------

@dataclass
class AprioriReport:
    """Empirical constant of the uniform energy bound.

    c_emp = [sup_t ||(p,u)||_3^2 + integral(||grad p||_2^2 + ||u||_3^2)]
            / ||(p_0, u_0)||_3^2, finite for a healthy small-data run.
    """

    c_emp: float
    sup_norm_sq: float
    dissipation_integral: float
    initial_norm_sq: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "c_emp": self.c_emp,
            "sup_norm_sq": self.sup_norm_sq,
            "dissipation_integral": self.dissipation_integral,
            "initial_norm_sq": self.initial_norm_sq,
            "passed": self.passed,
        }


def apriori_check(series: Sequence[DiagnosticsRecord],
                  initial_record: Optional[DiagnosticsRecord] = None) -> AprioriReport:
    """Grade a finished series against the uniform energy bound shape."""
    if not series:
        raise ValueError("empty series")
    first = initial_record if initial_record is not None else series[0]
    initial_sq = first.h3_p**2 + first.h3_u**2
    sup_sq = max(rec.h3_p**2 + rec.h3_u**2 for rec in series)
    times = np.array([rec.t for rec in series])
    integrand = np.array([rec.h2_grad_p**2 + rec.h3_u**2 for rec in series])
    dissipation = float(np.trapezoid(integrand, times)) if len(series) > 1 else 0.0
    lhs = sup_sq + dissipation
    if initial_sq == 0.0:
        c_emp = 0.0 if lhs == 0.0 else math.inf
    else:
        c_emp = lhs / initial_sq
    return AprioriReport(
        c_emp=float(c_emp),
        sup_norm_sq=float(sup_sq),
        dissipation_integral=dissipation,
        initial_norm_sq=float(initial_sq),
        passed=bool(np.isfinite(c_emp)),
    )


@dataclass
class EntropyReport:
    """Entropy transport checks: pointwise max principle and Gronwall shape."""

    max_principle_checked: bool
    max_principle_ok: Optional[bool]
    max_abs_s_initial: float
    max_abs_s_peak: float
    zero_preserved: Optional[bool]
    gronwall_rate: Optional[float]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "max_principle_checked": self.max_principle_checked,
            "max_principle_ok": self.max_principle_ok,
            "max_abs_s_initial": self.max_abs_s_initial,
            "max_abs_s_peak": self.max_abs_s_peak,
            "zero_preserved": self.zero_preserved,
            "gronwall_rate": self.gronwall_rate,
            "passed": self.passed,
        }


MAX_PRINCIPLE_TOL = 1e-3


def entropy_bound_check(series: Sequence[DiagnosticsRecord]) -> EntropyReport:
    """Check max|s(t)| <= max|s_0| + tol and the Gronwall growth shape.

    The pointwise max principle needs the in-memory ``max_abs_s`` field;
    a series loaded back from CSV lacks it and that sub-check is skipped.
    The Gronwall rate is the smallest c with
    h3_s(t) <= h3_s(0) * exp(c * integral ||u||_3); for zero initial
    entropy the check degenerates to h3_s staying at the rounding floor.
    """
    if not series:
        raise ValueError("empty series")
    have_max = all(math.isfinite(rec.max_abs_s) for rec in series)
    max0 = series[0].max_abs_s if have_max else math.nan
    peak = max((rec.max_abs_s for rec in series), default=math.nan) if have_max else math.nan
    max_ok = bool(peak <= max0 + MAX_PRINCIPLE_TOL) if have_max else None

    h3s0 = series[0].h3_s
    times = np.array([rec.t for rec in series])
    h3u = np.array([rec.h3_u for rec in series])
    h3s = np.array([rec.h3_s for rec in series])
    scale = max(series[0].h3_p, series[0].h3_u, 1e-300)

    zero_preserved: Optional[bool] = None
    gronwall_rate: Optional[float] = None
    if h3s0 <= 1e-14 * scale:
        zero_preserved = bool(np.all(h3s <= 1e-10 * max(scale, 1e-30)))
        shape_ok = zero_preserved
    else:
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (h3u[1:] + h3u[:-1]) * np.diff(times))])
        rates = []
        for i in range(1, len(series)):
            if cum[i] > 0.0 and h3s[i] > 0.0:
                rates.append(math.log(h3s[i] / h3s0) / cum[i])
        gronwall_rate = max(rates) if rates else 0.0
        shape_ok = bool(np.isfinite(gronwall_rate))
    passed = shape_ok and (max_ok is not False)
    return EntropyReport(
        max_principle_checked=have_max,
        max_principle_ok=max_ok,
        max_abs_s_initial=float(max0) if have_max else math.nan,
        max_abs_s_peak=float(peak) if have_max else math.nan,
        zero_preserved=zero_preserved,
        gronwall_rate=gronwall_rate,
        passed=passed,
    )


# --------------------------------------------------------------------------
# Sobolev embedding survey (report-only)
# --------------------------------------------------------------------------

@dataclass
class SobolevReport:
    """Empirical ratios LHS / (RHS without constant) of three embeddings."""

    ratios_linf: List[float]
    ratios_l6: List[float]
    ratios_lq: dict
    n_fields: int

    def max_ratios(self) -> dict:
        out = {
            "linf_interp": max(self.ratios_linf),
            "l6_grad": max(self.ratios_l6),
        }
        for q, vals in self.ratios_lq.items():
            out[f"l{q}_h1"] = max(vals)
        return out

    def to_dict(self) -> dict:
        return {
            "n_fields": self.n_fields,
            "max_ratios": self.max_ratios(),
        }


def lq_norm(f: np.ndarray, q: float, grid: SpectralGrid) -> float:
    """L^q norm on the physical grid with cell-volume weighting."""
    return float((np.sum(np.abs(f) ** q) * grid.cell_volume) ** (1.0 / q))


def sobolev_ratio_report(fields_list: Sequence[np.ndarray], grid: SpectralGrid,
                         q_values: Sequence[int] = (2, 3, 6)) -> SobolevReport:
    """Survey embedding ratios over mean-zero sample fields.

    Ratios reported (constants unspecified, so no assertion):
    ||f||_inf / (||grad f||^(1/2) ||grad f||_H1^(1/2)),
    ||f||_L6 / ||grad f||, and ||f||_Lq / ||f||_H1.
    """
    ratios_linf, ratios_l6 = [], []
    ratios_lq = {q: [] for q in q_values}
    count = 0
    for f in fields_list:
        f = f - f.mean()
        if not np.any(f):
            continue
        count += 1
        gf = spectral.grad(f, grid)
        l2_gf = spectral.norms(gf, "l2", grid)
        h1_gf = spectral.norms(gf, "h1", grid)
        h1_f = spectral.norms(f, "h1", grid)
        ratios_linf.append(float(np.max(np.abs(f))) / math.sqrt(l2_gf * h1_gf))
        ratios_l6.append(lq_norm(f, 6, grid) / l2_gf)
        for q in q_values:
            ratios_lq[q].append(lq_norm(f, q, grid) / h1_f)
    if count == 0:
        raise ValueError("no usable (non-constant) sample fields")
    return SobolevReport(ratios_linf, ratios_l6, ratios_lq, count)
