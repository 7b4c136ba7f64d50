"""Physical model: gas constants, equation of state, quadratic couplings.

The solver works with perturbations (p, u, s) around the constant state
(p_inf, 0, s_inf), with the velocity rescaled by kappa1 so that the linear
part becomes the symmetric damped-wave system

    dp/dt + kappa2 div u          = F(p, u),
    du/dt + kappa2 grad p + a u   = G(p, u, s),
    ds/dt + kappa1 (u . grad) s   = 0,

where F and G collect the quadratic remainders:

    F = -((R + cv) * kappa1 / cv) * p * div u - kappa1 * u . grad p,
    G = -kappa1 (u . grad) u - (1/kappa1) * (1/rho - 1/rho_inf) * grad p,

and the density comes from the polytropic equation of state in (p, s)
variables, rho = k * p^(cv/(cv+R)) * exp(-s/(cv+R)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .spectral import SpectralGrid


class PositivityError(RuntimeError):
    """Total pressure lost pointwise positivity (blow-up or too-large data)."""


@dataclass(frozen=True)
class PhysicalParams:
    """Gas constants, damping, and the equilibrium state.

    Defaults keep the derived constants O(1): rho_inf = 1, so
    kappa1 * kappa2 = 1.
    """

    R: float = 1.0
    cv: float = 1.5
    a: float = 1.0
    p_inf: float = 1.0
    s_inf: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        for name in ("R", "cv", "a", "p_inf", "k"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def rho_inf(self) -> float:
        """Equilibrium density from the equation of state."""
        return float(eos_density(self.p_inf, self.s_inf, self))

    @property
    def kappa1(self) -> float:
        return float(np.sqrt(self.cv / ((self.R + self.cv) * self.rho_inf * self.p_inf)))

    @property
    def kappa2(self) -> float:
        return float(np.sqrt((self.R + self.cv) * self.p_inf / (self.cv * self.rho_inf)))

    def derived(self) -> dict:
        return {"rho_inf": self.rho_inf, "kappa1": self.kappa1, "kappa2": self.kappa2}


def eos_density(p_total, s_total, params: PhysicalParams):
    """Density rho = k * p^(cv/(cv+R)) * exp(-s/(cv+R)); requires p > 0."""
    p_total = np.asarray(p_total, dtype=np.float64)
    if np.any(p_total <= 0.0):
        raise ValueError("equation of state requires strictly positive total pressure")
    gamma_exp = params.cv / (params.cv + params.R)
    rho = params.k * p_total**gamma_exp * np.exp(-np.asarray(s_total) / (params.cv + params.R))
    return rho if rho.ndim else float(rho)


def derived_thermo(p_total, s_total, params: PhysicalParams, u=0.0):
    """Temperature, internal energy, and total energy for given (p, s[, u]).

    ``u`` may be a scalar speed, a matching array of speeds, or a
    component-stacked velocity field (leading axis of length 3).
    """
    rho = eos_density(p_total, s_total, params)
    theta = np.asarray(p_total) / (params.R * rho)
    e = params.cv * theta
    u = np.asarray(u, dtype=np.float64)
    if u.ndim and u.shape[0] == 3 and u.ndim == np.asarray(theta).ndim + 1:
        speed_sq = np.sum(u**2, axis=0)
    else:
        speed_sq = u**2
    total = 0.5 * speed_sq + e
    if np.ndim(theta) == 0:
        return float(theta), float(e), float(total)
    return theta, e, total


@dataclass
class StateField:
    """Perturbation fields (p, u, s) sampled on a periodic grid."""

    p: np.ndarray
    u: np.ndarray
    s: np.ndarray
    grid: SpectralGrid

    def __post_init__(self):
        shape = self.grid.shape
        if self.p.shape != shape or self.s.shape != shape:
            raise ValueError("scalar fields do not match the grid shape")
        if self.u.shape != (3,) + shape:
            raise ValueError("velocity must be component-stacked with shape (3, N, N, N)")

    @classmethod
    def zeros(cls, grid: SpectralGrid) -> "StateField":
        shape = grid.shape
        return cls(np.zeros(shape), np.zeros((3,) + shape), np.zeros(shape), grid)

    def copy(self) -> "StateField":
        return StateField(self.p.copy(), self.u.copy(), self.s.copy(), self.grid)

    def min_total_pressure(self, params: PhysicalParams) -> float:
        return float(np.min(self.p) + params.p_inf)

    def require_positive_pressure(self, params: PhysicalParams) -> float:
        mn = self.min_total_pressure(params)
        if not mn > 0.0:
            raise PositivityError(f"total pressure reached {mn:.3e} (must stay > 0)")
        return mn


# --------------------------------------------------------------------------
# quadratic couplings; pointwise combiners are shared with the solver, which
# feeds them precomputed spectral derivatives
# --------------------------------------------------------------------------

def pressure_coupling(p, div_u, u, grad_p, params: PhysicalParams):
    """F = -((R+cv) kappa1/cv) p div u - kappa1 u . grad p (pointwise)."""
    c = (params.R + params.cv) * params.kappa1 / params.cv
    advect = u[0] * grad_p[0] + u[1] * grad_p[1] + u[2] * grad_p[2]
    return -c * p * div_u - params.kappa1 * advect


def velocity_coupling(p, u, grad_u, grad_p, s, params: PhysicalParams):
    """G = -kappa1 (u . grad) u - (1/kappa1)(1/rho - 1/rho_inf) grad p.

    ``grad_u`` has shape (3, 3, ...) with grad_u[i, j] = d_j u^i.  The
    density factor is evaluated exactly from the equation of state; a
    non-positive total pressure raises `PositivityError`.
    """
    p_tot = p + params.p_inf
    if np.any(p_tot <= 0.0):
        raise PositivityError(
            f"total pressure reached {float(np.min(p_tot)):.3e} while evaluating the velocity coupling"
        )
    rho = eos_density(p_tot, s + params.s_inf, params)
    factor = (1.0 / rho - 1.0 / params.rho_inf) / params.kappa1
    out = np.empty_like(u)
    for i in range(3):
        advect = u[0] * grad_u[i, 0] + u[1] * grad_u[i, 1] + u[2] * grad_u[i, 2]
        out[i] = -params.kappa1 * advect - factor * grad_p[i]
    return out


def entropy_coupling(u, grad_s, params: PhysicalParams):
    """Entropy transport rate -kappa1 u . grad s (pointwise)."""
    return -params.kappa1 * (u[0] * grad_s[0] + u[1] * grad_s[1] + u[2] * grad_s[2])


def compute_F(state: StateField, params: PhysicalParams) -> np.ndarray:
    """Quadratic pressure coupling evaluated with spectral derivatives."""
    grid = state.grid
    u_hat = spectral.to_spectral(state.u, grid)
    div_u = spectral.to_physical(spectral.div_hat(u_hat, grid), grid)
    grad_p = spectral.grad(state.p, grid)
    return pressure_coupling(state.p, div_u, state.u, grad_p, params)


def compute_G(state: StateField, params: PhysicalParams) -> np.ndarray:
    """Quadratic velocity coupling evaluated with spectral derivatives."""
    grid = state.grid
    u_hat = spectral.to_spectral(state.u, grid)
    grad_u = np.stack([
        spectral.to_physical(spectral.grad_hat(u_hat[i], grid), grid) for i in range(3)
    ])
    grad_p = spectral.grad(state.p, grid)
    return velocity_coupling(state.p, state.u, grad_u, grad_p, state.s, params)


# --------------------------------------------------------------------------
# change of variables
# --------------------------------------------------------------------------

def to_physical_vars(state: StateField, params: PhysicalParams):
    """Original variables (p + p_inf, kappa1 * u, s + s_inf)."""
    return state.p + params.p_inf, params.kappa1 * state.u, state.s + params.s_inf


def from_physical_vars(p_orig, u_orig, s_orig, grid: SpectralGrid, params: PhysicalParams) -> StateField:
    """Inverse change of variables back to the perturbation fields."""
    return StateField(
        p=np.asarray(p_orig) - params.p_inf,
        u=np.asarray(u_orig) / params.kappa1,
        s=np.asarray(s_orig) - params.s_inf,
        grid=grid,
    )
