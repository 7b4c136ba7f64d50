"""Time integration of the full nonlinear system on the periodic box.

The state is held spectrally as a stacked modal array
``Y = (p_hat, v_hat, omega_12, omega_13, omega_23, s_hat)``.  The linear
part is advanced *exactly* per mode (2x2 matrix exponential for the
(p, v) pair, exp(-a t) for the rotational components, identity for s);
the quadratic couplings enter through exponential integrators (etd2 /
etd_rk4) or Strang splitting.  Nonlinear products are formed pointwise in
physical space and de-aliased with the 2/3 rule.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List

import numpy as np

from . import diagnostics, etd, model, spectral
from .etd import CoefBlock
from .model import PhysicalParams, PositivityError, StateField
from .spectral import FourierState, SpectralGrid

SCHEMES = ("etd2", "etd_rk4", "strang_split")

COMPLETED = "completed"
POSITIVITY_VIOLATION = "positivity_violation"
NAN_DETECTED = "nan_detected"


@dataclass
class SolverConfig:
    dt: float = 0.1
    t_end: float = 1.0
    scheme: str = "etd_rk4"
    dealias: bool = True
    cfl_safety: float = 0.9
    output_every: int = 1
    nonlinear: bool = True      # switch off to recover the pure linear flow
    warn_norm: float = 0.5      # small-data warning threshold on the H3 norm

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.output_every < 1:
            raise ValueError("output_every must be >= 1")


@dataclass
class RunResult:
    final_state: StateField
    series: List["diagnostics.DiagnosticsRecord"]
    status: str

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED


# --------------------------------------------------------------------------
# modal packing
# --------------------------------------------------------------------------

def state_to_modal(state: StateField) -> np.ndarray:
    grid = state.grid
    Y = np.empty((6,) + grid.spectral_shape, dtype=np.complex128)
    Y[0] = spectral.to_spectral(state.p, grid)
    v_hat, w_hat, _ = spectral.hodge_decompose_hat(spectral.to_spectral(state.u, grid), grid)
    Y[1] = v_hat
    Y[2:5] = w_hat
    Y[5] = spectral.to_spectral(state.s, grid)
    return Y


def modal_to_state(Y: np.ndarray, grid: SpectralGrid) -> StateField:
    p = spectral.to_physical(Y[0], grid)
    u_hat = spectral.hodge_reconstruct_hat(Y[1], Y[2:5], grid)
    u = spectral.to_physical(u_hat, grid)
    s = spectral.to_physical(Y[5], grid)
    return StateField(p, u, s, grid)


def modal_to_fourier(Y: np.ndarray, grid: SpectralGrid) -> FourierState:
    return FourierState(Y[0].copy(), Y[1].copy(), Y[2:5].copy(), grid, Y[5].copy())


def fourier_to_modal(fs: FourierState) -> np.ndarray:
    Y = np.empty((6,) + fs.grid.spectral_shape, dtype=np.complex128)
    Y[0] = fs.p_hat
    Y[1] = fs.v_hat
    Y[2:5] = fs.omega_hat
    Y[5] = 0.0 if fs.s_hat is None else fs.s_hat
    return Y


# --------------------------------------------------------------------------
# nonlinear right-hand side
# --------------------------------------------------------------------------

class NonlinearRhs:
    """Evaluates the quadratic couplings of a modal state, spectrally.

    Returns the modal forcing (F_hat, Lam^-1 div G_hat, Lam^-1 curl G_hat,
    -kappa1 (u . grad s)_hat); products are formed on the physical grid
    and de-aliased on the way back when enabled.
    """

    def __init__(self, grid: SpectralGrid, params: PhysicalParams, dealias: bool = True):
        self.grid = grid
        self.params = params
        self.dealias = dealias
        self.last_min_total_p: float = np.inf

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        grid, params = self.grid, self.params
        kx, ky, kz = grid.k_vectors
        k_vec = (kx, ky, kz)

        p_hat = Y[0]
        u_hat = spectral.hodge_reconstruct_hat(Y[1], Y[2:5], grid)
        s_hat = Y[5]

        p = spectral.to_physical(p_hat, grid)
        u = spectral.to_physical(u_hat, grid)
        s = spectral.to_physical(s_hat, grid)
        div_u = spectral.to_physical(grid.k_mag * Y[1], grid)  # div u = Lambda v
        grad_p = spectral.to_physical(spectral.grad_hat(p_hat, grid), grid)
        grad_s = spectral.to_physical(spectral.grad_hat(s_hat, grid), grid)
        grad_u = np.empty((3, 3) + grid.shape)
        for i in range(3):
            for j in range(3):
                grad_u[i, j] = spectral.to_physical(1j * k_vec[j] * u_hat[i], grid)

        self.last_min_total_p = float(np.min(p)) + params.p_inf
        F = model.pressure_coupling(p, div_u, u, grad_p, params)
        G = model.velocity_coupling(p, u, grad_u, grad_p, s, params)
        dS = model.entropy_coupling(u, grad_s, params)

        F_hat = spectral.to_spectral(F, grid)
        G_hat = spectral.to_spectral(G, grid)
        dS_hat = spectral.to_spectral(dS, grid)
        if self.dealias:
            mask = grid.dealias_mask
            F_hat *= mask
            G_hat *= mask
            dS_hat *= mask

        N = np.empty_like(Y)
        N[0] = F_hat
        inv_k = spectral._inverse_k(grid)
        N[1] = spectral.div_hat(G_hat, grid) * inv_k
        N[2:5] = spectral.curl_hat(G_hat, grid) * inv_k
        N[1][0, 0, 0] = 0.0
        N[2:5][:, 0, 0, 0] = 0.0
        N[5] = dS_hat
        return N


def rhs_nonlinear(state: StateField, params: PhysicalParams):
    """Quadratic remainder (F, G, -kappa1 u . grad s) as physical fields."""
    grad_s = spectral.grad(state.s, state.grid)
    return (
        model.compute_F(state, params),
        model.compute_G(state, params),
        model.entropy_coupling(state.u, grad_s, params),
    )


# --------------------------------------------------------------------------
# stepping
# --------------------------------------------------------------------------

def _apply(block: CoefBlock, Y: np.ndarray) -> np.ndarray:
    out = np.empty_like(Y)
    out[0] = block.m11 * Y[0] + block.m12 * Y[1]
    out[1] = block.m21 * Y[0] + block.m22 * Y[1]
    out[2:5] = block.c_omega * Y[2:5]
    out[5] = block.c_s * Y[5]
    return out


class Stepper:
    """Precomputed coefficient tables plus the step kernels for one dt."""

    def __init__(self, grid: SpectralGrid, params: PhysicalParams, dt: float,
                 scheme: str = "etd_rk4", dealias: bool = True, nonlinear: bool = True):
        if scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        self.grid = grid
        self.params = params
        self.dt = float(dt)
        self.scheme = scheme
        self.nonlinear = nonlinear
        self.tables = etd.build_tables(scheme, self.dt, grid.k_mag, params)
        self.rhs = NonlinearRhs(grid, params, dealias=dealias)

    def _nl(self, Y: np.ndarray) -> np.ndarray:
        if not self.nonlinear:
            return np.zeros_like(Y)
        return self.rhs(Y)

    def step(self, Y: np.ndarray) -> np.ndarray:
        tab = self.tables
        if self.scheme == "etd_rk4":
            n0 = self._nl(Y)
            a = _apply(tab.exp_half, Y) + _apply(tab.stage, n0)
            n1 = self._nl(a)
            b = _apply(tab.exp_half, Y) + _apply(tab.stage, n1)
            n2 = self._nl(b)
            c = _apply(tab.exp_half, a) + _apply(tab.stage, 2.0 * n2 - n0)
            n3 = self._nl(c)
            return (_apply(tab.exp_full, Y) + _apply(tab.w_u, n0)
                    + _apply(tab.w_ab, n1 + n2) + _apply(tab.w_c, n3))
        if self.scheme == "etd2":
            n0 = self._nl(Y)
            a = _apply(tab.exp_full, Y) + _apply(tab.p1, n0)
            n1 = self._nl(a)
            return a + _apply(tab.p2, n1 - n0)
        # strang_split: half linear, full classical RK4 on the coupling, half linear
        dt = self.dt
        Yh = _apply(tab.exp_half, Y)
        k1 = self._nl(Yh)
        k2 = self._nl(Yh + 0.5 * dt * k1)
        k3 = self._nl(Yh + 0.5 * dt * k2)
        k4 = self._nl(Yh + dt * k3)
        Yn = Yh + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return _apply(tab.exp_half, Yn)


def step(state: StateField, dt: float, scheme: str, params: PhysicalParams,
         dealias: bool = True, nonlinear: bool = True) -> StateField:
    """One time step on a physical state (convenience wrapper)."""
    stepper = Stepper(state.grid, params, dt, scheme, dealias=dealias, nonlinear=nonlinear)
    Y = stepper.step(state_to_modal(state))
    _require_finite(Y)
    return modal_to_state(Y, state.grid)


def _require_finite(Y: np.ndarray):
    probe = float(Y.real.sum()) + float(Y.imag.sum())
    if not np.isfinite(probe):
        raise FloatingPointError("non-finite values in the modal state")


def cfl_limit(state: StateField, params: PhysicalParams, cfl_safety: float = 1.0) -> float:
    """Largest advective-acoustic time step: safety * dx / (kappa2 + kappa1 max|u|)."""
    speed = params.kappa2 + params.kappa1 * float(
        np.max(np.sqrt(np.sum(state.u**2, axis=0)))
    )
    return cfl_safety * state.grid.spacing / speed


# --------------------------------------------------------------------------
# full runs
# --------------------------------------------------------------------------

def run(initial: StateField, config: SolverConfig, params: PhysicalParams) -> RunResult:
    """Integrate to t_end, recording diagnostics every ``output_every`` steps.

    The series always includes t = 0 and the final reached time.  On
    positivity or NaN failure the run stops and reports the status; the
    series keeps everything recorded up to the failure.
    """
    grid = initial.grid
    initial.require_positive_pressure(params)
    norm0 = diagnostics.state_h3_norm(initial, grid)
    if norm0 > config.warn_norm:
        warnings.warn(
            f"initial H3 norm {norm0:.3g} exceeds the small-data threshold "
            f"{config.warn_norm:.3g}; the decay regime may not apply",
            stacklevel=2,
        )
    limit = cfl_limit(initial, params, config.cfl_safety)
    if config.nonlinear and config.dt > limit:
        warnings.warn(
            f"dt = {config.dt:.3g} exceeds the advective-acoustic limit {limit:.3g}",
            stacklevel=2,
        )

    n_steps = int(np.ceil(config.t_end / config.dt - 1e-12)) if config.t_end > 0 else 0
    stepper = Stepper(grid, params, config.dt, config.scheme,
                      dealias=config.dealias, nonlinear=config.nonlinear)
    Y = state_to_modal(initial)

    series: List[diagnostics.DiagnosticsRecord] = []
    sup_m = 0.0

    def emit(t: float, state: StateField):
        nonlocal sup_m
        rec = diagnostics.record(state, t, params)
        sup_m = max(sup_m, rec.m_of_t)
        rec.m_of_t = sup_m
        series.append(rec)

    emit(0.0, initial)
    status = COMPLETED
    t = 0.0
    for i in range(1, n_steps + 1):
        remaining = config.t_end - t
        if remaining < config.dt * (1.0 - 1e-12):
            # final short step with its own tables
            short = Stepper(grid, params, remaining, config.scheme,
                            dealias=config.dealias, nonlinear=config.nonlinear)
            advance = short.step
            dt_i = remaining
        else:
            advance = stepper.step
            dt_i = config.dt
        try:
            Y = advance(Y)
            _require_finite(Y)
        except PositivityError:
            status = POSITIVITY_VIOLATION
            break
        except FloatingPointError:
            status = NAN_DETECTED
            break
        t += dt_i
        if i % config.output_every == 0 or i == n_steps:
            emit(t, modal_to_state(Y, grid))

    final_state = modal_to_state(Y, grid)
    return RunResult(final_state=final_state, series=series, status=status)


# --------------------------------------------------------------------------
# initial data
# --------------------------------------------------------------------------

INITIAL_KINDS = ("gaussian_bump", "random_smooth", "single_mode")


def make_initial(kind: str, amplitude: float, width: float, seed: int,
                 grid: SpectralGrid, params: PhysicalParams) -> StateField:
    """Reproducible localized initial data, normalized in the solution norm.

    ``amplitude`` is the target combined H3 norm of (p, u, s); the raw
    shapes below are rescaled to it, so halving the amplitude halves the
    state exactly.  The velocity is mean-zero by construction.
    """
    if kind not in INITIAL_KINDS:
        raise ValueError(f"kind must be one of {INITIAL_KINDS}")
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")
    if amplitude == 0.0:
        return StateField.zeros(grid)
    if kind == "gaussian_bump" and not 0 < width < grid.length / 8:
        raise ValueError(
            f"bump width must lie in (0, L/8) = (0, {grid.length / 8:.3g}), got {width}"
        )

    if kind == "gaussian_bump":
        state = _gaussian_bump_shape(width, grid)
    elif kind == "random_smooth":
        state = _random_smooth_shape(width, seed, grid)
    else:
        state = _single_mode_shape(grid)

    norm = diagnostics.state_h3_norm(state, grid)
    scale = amplitude / norm
    state.p *= scale
    state.u *= scale
    state.s *= scale
    return state


def _axes_mesh(grid: SpectralGrid):
    x = grid.axis_coordinates()
    return np.meshgrid(x, x, x, indexing="ij", sparse=True)


def _gaussian_bump_shape(width: float, grid: SpectralGrid) -> StateField:
    X, Y_, Z = _axes_mesh(grid)
    c = grid.length / 2.0
    r2 = (X - c) ** 2 + (Y_ - c) ** 2 + (Z - c) ** 2
    g = np.exp(-r2 / (2.0 * width**2))
    # entropy bump shifted off-center so the transport term is non-trivial
    r2s = (X - c) ** 2 + (Y_ - c - width) ** 2 + (Z - c) ** 2
    g_s = np.exp(-r2s / (2.0 * width**2))

    g_hat = spectral.to_spectral(g, grid)
    grad_g = spectral.to_physical(spectral.grad_hat(g_hat, grid), grid)
    # compressible part: gradient of the bump; rotational part: curl of (0, 0, g)
    u = 0.6 * width * grad_g
    u[0] += 0.4 * width * grad_g[1]
    u[1] -= 0.4 * width * grad_g[0]
    return StateField(p=g.copy(), u=u, s=0.5 * g_s, grid=grid)


def _random_smooth_shape(width: float, seed: int, grid: SpectralGrid) -> StateField:
    rng = np.random.default_rng(seed)
    k2 = grid.k_mag**2
    envelope = np.exp(-0.25 * k2 * width**2) * grid.dealias_mask

    def smooth_scalar():
        f_hat = spectral.to_spectral(rng.standard_normal(grid.shape), grid) * envelope
        f_hat[0, 0, 0] = 0.0
        return spectral.to_physical(f_hat, grid)

    p = smooth_scalar()
    u = np.stack([smooth_scalar() for _ in range(3)])
    s = smooth_scalar()
    return StateField(p=p, u=u, s=s, grid=grid)


def _single_mode_shape(grid: SpectralGrid) -> StateField:
    X, Y_, _ = _axes_mesh(grid)
    k1 = 2.0 * np.pi / grid.length
    p = np.broadcast_to(np.sin(k1 * X), grid.shape).copy()
    u = np.zeros((3,) + grid.shape)
    u[0] = np.broadcast_to(np.cos(k1 * X), grid.shape)
    s = np.broadcast_to(0.5 * np.sin(k1 * Y_), grid.shape).copy()
    return StateField(p=p, u=u, s=s, grid=grid)
