"""Command-line entry points.

Subcommands: ``simulate`` (nonlinear box run), ``linear-decay``
(whole-space quadrature study over a time grid), ``green-table`` (dump
the mode-wise solution matrix), ``fit`` (fit exponents on an existing run
directory), ``check`` (grade an existing run directory).

Exit codes: 0 success, 1 failed checks, 2 usage error.

Configuration files are flat ``key = value`` text ('#' starts a comment);
the documented keys and defaults live in `CONFIG_SCHEMA`.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__, diagnostics, runio, semigroup, solver
from .diagnostics import DiagnosticsRecord, fit_decay
from .model import PhysicalParams
from .solver import SolverConfig, make_initial
from .spectral import SpectralGrid


class ConfigError(Exception):
    pass


def _parse_bool(token: str) -> bool:
    low = token.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {token!r}")


# key -> (type constructor, default); None default means required-if-used
CONFIG_SCHEMA = {
    "physics.R": (float, 1.0),
    "physics.cv": (float, 1.5),
    "physics.a": (float, 1.0),
    "physics.p_inf": (float, 1.0),
    "physics.s_inf": (float, 0.0),
    "physics.k": (float, 1.0),
    "grid.N": (int, 32),
    "grid.L": (float, None),  # default 50 * init.width
    "time.dt": (float, 0.1),
    "time.t_end": (float, 1.0),
    "time.output_every": (int, 1),
    "init.kind": (str, "gaussian_bump"),
    "init.amplitude": (float, 1e-2),
    "init.width": (float, 2.0),
    "init.seed": (int, 0),
    "solver.scheme": (str, "etd_rk4"),
    "solver.dealias": (_parse_bool, True),
    "solver.cfl_safety": (float, 0.9),
}


def parse_config_text(text: str) -> Dict[str, object]:
    values: Dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, token = line.partition("=")
        key = key.strip()
        token = token.strip().strip("\"'")
        if key not in CONFIG_SCHEMA:
            raise ConfigError(f"line {lineno}: unknown configuration key {key!r}")
        caster = CONFIG_SCHEMA[key][0]
        try:
            values[key] = caster(token)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    return values


def resolve_config(overrides: Dict[str, object]) -> Dict[str, object]:
    resolved = {key: default for key, (_, default) in CONFIG_SCHEMA.items()}
    resolved.update(overrides)
    if resolved["grid.L"] is None:
        resolved["grid.L"] = 50.0 * float(resolved["init.width"])
    return resolved


def load_config(path: str) -> Dict[str, object]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return resolve_config(parse_config_text(text))


def params_from_config(cfg: Dict[str, object]) -> PhysicalParams:
    return PhysicalParams(
        R=cfg["physics.R"], cv=cfg["physics.cv"], a=cfg["physics.a"],
        p_inf=cfg["physics.p_inf"], s_inf=cfg["physics.s_inf"], k=cfg["physics.k"],
    )


def _base_meta(kind: str, params: PhysicalParams, label: str) -> dict:
    return {
        "kind": kind,
        "label": label,
        "version": __version__,
        "physics": {
            "R": params.R, "cv": params.cv, "a": params.a,
            "p_inf": params.p_inf, "s_inf": params.s_inf, "k": params.k,
        },
        "derived": params.derived(),
    }


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    params = params_from_config(cfg)
    grid = SpectralGrid(n=cfg["grid.N"], length=cfg["grid.L"])
    sconfig = SolverConfig(
        dt=cfg["time.dt"], t_end=cfg["time.t_end"],
        scheme=cfg["solver.scheme"], dealias=cfg["solver.dealias"],
        cfl_safety=cfg["solver.cfl_safety"], output_every=cfg["time.output_every"],
    )
    initial = make_initial(
        cfg["init.kind"], cfg["init.amplitude"], cfg["init.width"],
        cfg["init.seed"], grid, params,
    )
    result = solver.run(initial, sconfig, params)

    wrap_time = grid.length / (2.0 * params.kappa2)
    run_dir = runio.create_run_dir(args.out, force=args.force)
    meta = _base_meta("simulate", params, os.path.basename(os.path.normpath(args.out)))
    meta["config"] = {k: cfg[k] for k in sorted(cfg)}
    meta["status"] = result.status
    meta["wrap_time"] = wrap_time
    meta["initial_norms"] = _initial_norm_report(initial, grid)
    runio.write_meta(run_dir, meta)
    runio.write_series(run_dir, result.series)

    fits: dict = {"window": None, "note": f"trend only (finite box); wrap-around at t~{wrap_time:.3g}", "fits": {}}
    if len(result.series) >= 5 and result.series[-1].t > 0:
        window = diagnostics.default_fit_window(result.series)
        fits["window"] = list(window)
        for quantity in ("l2_p", "l2_u", "h2_grad_p", "l2_dt"):
            try:
                fits["fits"][quantity] = fit_decay(result.series, quantity, window).to_dict()
            except ValueError:
                pass
    runio.write_fits(run_dir, fits)

    checks = _run_checks(result.series, grid)
    runio.write_checks(run_dir, checks)

    print(f"status: {result.status}; wrote {run_dir} "
          f"({len(result.series)} records, wrap-around t ~ {wrap_time:.3g})")
    ok = result.status == solver.COMPLETED and checks["passed"]
    return 0 if ok else 1


def _initial_norm_report(initial, grid) -> dict:
    from . import spectral

    l1_pair = spectral.norms(initial.p, "l1", grid) + spectral.norms(initial.u, "l1", grid)
    h3_pair = float(np.hypot(
        spectral.norms(initial.p, "h3", grid), spectral.norms(initial.u, "h3", grid)
    ))
    return {
        "h3_triple": diagnostics.state_h3_norm(initial, grid),
        "k0_l1_plus_h3": l1_pair + h3_pair,
    }


def _run_checks(series: Sequence[DiagnosticsRecord], grid: Optional[SpectralGrid]) -> dict:
    apriori = diagnostics.apriori_check(series)
    entropy = diagnostics.entropy_bound_check(series)
    checks = {
        "apriori": apriori.to_dict(),
        "entropy": entropy.to_dict(),
        "positivity": bool(all(rec.valid for rec in series)),
    }
    if grid is not None:
        rng = np.random.default_rng(11)
        n = min(grid.n, 32)
        sample_grid = SpectralGrid(n=n, length=grid.length)
        fields = [_smooth_sample(rng, sample_grid) for _ in range(8)]
        checks["sobolev"] = diagnostics.sobolev_ratio_report(fields, sample_grid).to_dict()
    checks["passed"] = bool(
        apriori.passed and entropy.passed and checks["positivity"]
    )
    return checks


def _smooth_sample(rng, grid: SpectralGrid):
    from . import spectral

    f_hat = spectral.to_spectral(rng.standard_normal(grid.shape), grid)
    f_hat *= np.exp(-grid.k_mag**2 * (grid.length / 16.0) ** 2) * grid.dealias_mask
    f_hat[0, 0, 0] = 0.0
    return spectral.to_physical(f_hat, grid)


# --------------------------------------------------------------------------
# linear-decay
# --------------------------------------------------------------------------

def _parse_time_grid(spec: str) -> np.ndarray:
    kind, _, rest = spec.partition(":")
    try:
        lo_s, hi_s, n_s = rest.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise ConfigError(f"bad time grid {spec!r}; expected log:LO:HI:N or lin:LO:HI:N") from exc
    if kind == "log":
        if lo <= 0:
            raise ConfigError("log time grid needs LO > 0")
        return np.geomspace(lo, hi, n)
    if kind == "lin":
        return np.linspace(lo, hi, n)
    raise ConfigError(f"unknown time grid kind {kind!r}")


def _cmd_linear_decay(args) -> int:
    cfg = load_config(args.config) if args.config else resolve_config({})
    params = params_from_config(cfg)
    times = _parse_time_grid(args.t_grid)
    profile = semigroup.GaussianRadialProfile(
        p_amp=args.p_amp, v_amp=args.v_amp, scale=args.profile_scale
    )

    rows: List[DiagnosticsRecord] = []
    sup_m = 0.0
    for t in times:
        def w(component, order=0):
            return semigroup.whole_space_norm(
                profile, float(t), order, params, component=component, rtol=args.rtol
            )

        p_orders = [w("p", m) for m in range(4)]
        u_orders = [w("u", m) for m in range(4)]
        h2_grad_p = float(np.sqrt(sum(v**2 for v in p_orders[1:])))
        h3_u = float(np.sqrt(sum(v**2 for v in u_orders)))
        h3fun = h2_grad_p**2 + h3_u**2
        sup_m = max(sup_m, (1.0 + float(t)) ** 2.5 * h3fun)
        cross = [
            semigroup.whole_space_cross(profile, float(t), m, params, rtol=args.rtol)
            for m in (0, 1, 2)
        ]
        rows.append(DiagnosticsRecord(
            t=float(t),
            l2_p=p_orders[0],
            l2_u=u_orders[0],
            l2_s=0.0,
            h3_p=float(np.sqrt(sum(v**2 for v in p_orders))),
            h3_u=h3_u,
            h3_s=0.0,
            h2_grad_p=h2_grad_p,
            l2_dt=w("dt"),
            min_total_p=params.p_inf,
            cross_low=cross[0],
            cross_high=cross[1] + cross[2],
            h3fun=h3fun,
            m_of_t=sup_m,
        ))

    run_dir = runio.create_run_dir(args.out, force=args.force)
    meta = _base_meta("linear_decay", params, os.path.basename(os.path.normpath(args.out)))
    meta["profile"] = {"p_amp": args.p_amp, "v_amp": args.v_amp, "scale": args.profile_scale}
    meta["t_grid"] = args.t_grid
    meta["rtol"] = args.rtol
    runio.write_meta(run_dir, meta)
    runio.write_series(run_dir, rows)
    _write_fit_file(run_dir, rows, ("l2_p", "l2_u", "h2_grad_p", "l2_dt"), None)
    print(f"wrote {run_dir} ({len(rows)} times)")
    return 0


def _write_fit_file(run_dir: str, series: Sequence[DiagnosticsRecord],
                    quantities: Sequence[str], window) -> dict:
    if window is None:
        window = diagnostics.default_fit_window(series)
    fits = {"window": list(window), "fits": {}}
    for quantity in quantities:
        try:
            fits["fits"][quantity] = fit_decay(series, quantity, window).to_dict()
        except ValueError as exc:
            fits["fits"][quantity] = {"error": str(exc)}
    runio.write_fits(run_dir, fits)
    return fits


# --------------------------------------------------------------------------
# green-table
# --------------------------------------------------------------------------

def _cmd_green_table(args) -> int:
    from . import kernels

    try:
        xis = [float(tok) for tok in args.xi.split(",") if tok]
        times = [float(tok) for tok in args.t.split(",") if tok]
    except ValueError as exc:
        raise ConfigError(f"bad --xi/--t value: {exc}") from exc
    if not xis or not times:
        raise ConfigError("green-table needs non-empty --xi and --t lists")
    lines = ["xi,t,g11,g12,g21,g22"]
    for xi in xis:
        for t in times:
            g11, g12, g21, g22 = (
                float(v[0]) + 0.0  # normalize -0.0
                for v in kernels.green_entries(np.array([xi]), t, args.a, args.kappa2)
            )
            lines.append(",".join(format(v, ".17g") for v in (xi, t, g11, g12, g21, g22)))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({len(lines) - 1} rows)")
    else:
        sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------
# fit / check
# --------------------------------------------------------------------------

def _cmd_fit(args) -> int:
    series = runio.read_series(args.run)
    window = None
    if args.window:
        try:
            lo_s, _, hi_s = args.window.partition(":")
            window = (float(lo_s), float(hi_s))
        except ValueError as exc:
            raise ConfigError(f"bad window {args.window!r}; expected LO:HI") from exc
    quantities = [q for q in args.quantities.split(",") if q]
    fits = _write_fit_file(args.run, series, quantities, window)
    for quantity, fit in fits["fits"].items():
        if "exponent" in fit:
            print(f"{quantity}: exponent {fit['exponent']:+.4f} (r^2 = {fit['r_squared']:.6f}, "
                  f"n = {fit['n_points']})")
        else:
            print(f"{quantity}: {fit['error']}")
    return 0


def _cmd_check(args) -> int:
    series = runio.read_series(args.run)
    meta = runio.read_meta(args.run)
    grid = None
    if "config" in meta:
        grid = SpectralGrid(n=meta["config"]["grid.N"], length=meta["config"]["grid.L"])
    checks = _run_checks(series, grid)
    runio.write_checks(args.run, checks)
    print(f"apriori c_emp = {checks['apriori']['c_emp']:.4g}; "
          f"entropy passed = {checks['entropy']['passed']}; "
          f"positivity = {checks['positivity']}; overall = {checks['passed']}")
    return 0 if checks["passed"] else 1


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerdamp",
        description="Pseudo-spectral laboratory for the damped compressible Euler system",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="nonlinear periodic-box run")
    p_sim.add_argument("--config", required=True, help="flat key = value config file")
    p_sim.add_argument("--out", required=True, help="run directory to create")
    p_sim.add_argument("--force", action="store_true", help="allow writing into an existing directory")
    p_sim.set_defaults(func=_cmd_simulate)

    p_lin = sub.add_parser("linear-decay", help="whole-space linear decay study")
    p_lin.add_argument("--t-grid", default="log:1:1000:40", help="log:LO:HI:N or lin:LO:HI:N")
    p_lin.add_argument("--config", default=None, help="optional config for the physics block")
    p_lin.add_argument("--p-amp", type=float, default=1.0, help="pressure profile amplitude")
    p_lin.add_argument("--v-amp", type=float, default=0.0, help="compressible-velocity profile amplitude")
    p_lin.add_argument("--profile-scale", type=float, default=1.0, help="radial profile width")
    p_lin.add_argument("--rtol", type=float, default=1e-8, help="quadrature relative tolerance")
    p_lin.add_argument("--out", required=True)
    p_lin.add_argument("--force", action="store_true")
    p_lin.set_defaults(func=_cmd_linear_decay)

    p_grn = sub.add_parser("green-table", help="dump solution-matrix entries as CSV")
    p_grn.add_argument("--a", type=float, required=True)
    p_grn.add_argument("--kappa2", type=float, required=True)
    p_grn.add_argument("--xi", required=True, help="comma-separated wavenumber magnitudes")
    p_grn.add_argument("--t", required=True, help="comma-separated times")
    p_grn.add_argument("--out", default=None, help="output CSV (default stdout)")
    p_grn.set_defaults(func=_cmd_green_table)

    p_fit = sub.add_parser("fit", help="fit decay exponents on an existing run directory")
    p_fit.add_argument("--run", required=True)
    p_fit.add_argument("--quantities", default="l2_p,l2_u,h2_grad_p,l2_dt")
    p_fit.add_argument("--window", default=None, help="LO:HI (default [t_end/10, t_end])")
    p_fit.set_defaults(func=_cmd_fit)

    p_chk = sub.add_parser("check", help="grade an existing run directory")
    p_chk.add_argument("--run", required=True)
    p_chk.set_defaults(func=_cmd_check)
    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 0
        return 0 if code == 0 else 2
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))
