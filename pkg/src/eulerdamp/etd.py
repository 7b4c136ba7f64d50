"""Exponential-integrator coefficient tables.

The time stepper advances, per wavenumber, the block system

    d/dt (p, v)   = A (p, v)   + (N_p, N_v),      A = [[0, -c], [c, -a]],
    d/dt omega_ij = -a omega_ij + N_ij,
    d/dt s        = 0           + N_s,

so every scheme coefficient is a phi-function of dt*A (2x2, per mode) or
of the scalars -a*dt and 0.  With the two eigenvalues z_a, z_b of dt*A,
any analytic f gives

    f(dt A) = f(z_b) I + f[z_a, z_b] (dt A - z_b I)

(first-order Newton/Hermite form, exact for 2x2).  The divided difference
f[z_a, z_b] is evaluated by its Taylor double series once the eigenvalues
get close, where the naive quotient cancels.  All entries are provably
real (the eigenvalues are real or conjugate) and are returned real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import PhysicalParams

_FACT = np.array([float(math.factorial(k)) for k in range(48)])

# series for phi_j itself below this |z|; direct formula above
_PHI_SERIES_RADIUS = 1.0
_PHI_SERIES_TERMS = 26
# series for the divided difference below this |z_a - z_b|
_DD_SERIES_GAP = 0.25
_DD_SERIES_TERMS = 40


def phi(z, j: int):
    """phi_j(z) = sum_k z^k / (k+j)! for complex array z (j = 1, 2, 3)."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    small = np.abs(z) < _PHI_SERIES_RADIUS
    if small.any():
        zs = z[small]
        acc = np.zeros_like(zs)
        for k in range(_PHI_SERIES_TERMS - 1, -1, -1):
            acc = acc * zs + 1.0 / _FACT[k + j]
        out[small] = acc
    big = ~small
    if big.any():
        zb = z[big]
        ez = np.exp(zb)
        if j == 1:
            out[big] = (ez - 1.0) / zb
        elif j == 2:
            out[big] = (ez - 1.0 - zb) / zb**2
        elif j == 3:
            out[big] = (ez - 1.0 - zb - 0.5 * zb**2) / zb**3
        else:
            raise ValueError("phi order must be 1, 2, or 3")
    return out


def phi_divided_diff(za, zb, j: int):
    """(phi_j(za) - phi_j(zb)) / (za - zb), stable as za -> zb.

    Near coalescence this uses the bivariate series
    sum_{k>=1} h_k / (k+j)! with h_k = sum_{i+l=k-1} za^i zb^l.
    """
    za = np.asarray(za, dtype=np.complex128)
    zb = np.asarray(zb, dtype=np.complex128)
    dz = za - zb
    out = np.empty_like(za)
    close = np.abs(dz) < _DD_SERIES_GAP
    far = ~close
    if far.any():
        out[far] = (phi(za[far], j) - phi(zb[far], j)) / dz[far]
    if close.any():
        A, B = za[close], zb[close]
        hk = np.ones_like(A)  # h_1
        acc = hk / _FACT[1 + j]
        zb_pow = np.ones_like(B)
        for k in range(2, _DD_SERIES_TERMS):
            zb_pow = zb_pow * B
            hk = A * hk + zb_pow
            acc = acc + hk / _FACT[k + j]
        out[close] = acc
    return out


def _pair_entries(f_b, dd, za, zb, offdiag):
    """Real entries of f(M) for M = [[0, -offdiag], [offdiag, za+zb]]."""
    m11 = (f_b - zb * dd).real
    m12 = (-offdiag * dd).real
    m21 = (offdiag * dd).real
    m22 = (f_b + za * dd).real
    return m11, m12, m21, m22


@dataclass
class CoefBlock:
    """One scheme coefficient: 2x2 entries per mode plus the scalar blocks."""

    m11: np.ndarray
    m12: np.ndarray
    m21: np.ndarray
    m22: np.ndarray
    c_omega: float
    c_s: float


def _pair_eigenvalues(dt: float, xi: np.ndarray, params: PhysicalParams):
    a = params.a
    disc = np.asarray(a * a - 4.0 * params.kappa2**2 * xi**2, dtype=np.complex128)
    root = np.sqrt(disc)
    za = dt * 0.5 * (-a - root)  # fast root
    zb = dt * 0.5 * (-a + root)  # slow root
    return za, zb


def exp_block(dt: float, xi: np.ndarray, params: PhysicalParams) -> CoefBlock:
    """exp(dt L): matrix exponential per mode, exp(-a dt) and 1 scalars.

    Reuses the real-branch kernel so the stepper's linear phase matches
    `semigroup.propagate_linear` bit for bit.
    """
    g11, g12, g21, g22 = kernels.green_entries(xi, dt, params.a, params.kappa2)
    return CoefBlock(g11, g12, g21, g22, float(np.exp(-params.a * dt)), 1.0)


def phi_block(dt: float, xi: np.ndarray, params: PhysicalParams,
              weights=(1.0, 0.0, 0.0), scale: float = 1.0) -> CoefBlock:
    """scale * sum_j weights[j-1] * phi_j(dt L) as a coefficient block.

    The linear combination is evaluated in one Newton form (values and
    divided differences combine linearly).
    """
    xi = np.asarray(xi, dtype=np.float64)
    za, zb = _pair_eigenvalues(dt, xi, params)
    offdiag = dt * params.kappa2 * xi
    f_b = np.zeros_like(zb)
    dd = np.zeros_like(zb)
    z_omega = complex(-params.a * dt)
    f_omega = 0.0
    f_s = 0.0
    for jm1, wgt in enumerate(weights):
        if wgt == 0.0:
            continue
        j = jm1 + 1
        f_b = f_b + wgt * phi(zb, j)
        dd = dd + wgt * phi_divided_diff(za, zb, j)
        f_omega += wgt * float(phi(np.array([z_omega]), j)[0].real)
        f_s += wgt / _FACT[j]  # phi_j(0) = 1/j!
    m11, m12, m21, m22 = _pair_entries(f_b, dd, za, zb, offdiag)
    return CoefBlock(scale * m11, scale * m12, scale * m21, scale * m22,
                     scale * f_omega, scale * f_s)


@dataclass
class EtdTables:
    """Precomputed per-mode coefficients for one (grid, dt, scheme)."""

    scheme: str
    dt: float
    exp_full: CoefBlock
    exp_half: CoefBlock
    stage: CoefBlock | None = None       # (dt/2) phi1(dt L / 2)   [etd_rk4]
    p1: CoefBlock | None = None          # dt phi1(dt L)           [etd2]
    p2: CoefBlock | None = None          # dt phi2(dt L)           [etd2]
    w_u: CoefBlock | None = None         # dt (phi1 - 3 phi2 + 4 phi3)
    w_ab: CoefBlock | None = None        # dt (2 phi2 - 4 phi3)
    w_c: CoefBlock | None = None         # dt (4 phi3 - phi2)


def build_tables(scheme: str, dt: float, xi: np.ndarray, params: PhysicalParams) -> EtdTables:
    exp_full = exp_block(dt, xi, params)
    exp_half = exp_block(0.5 * dt, xi, params)
    tables = EtdTables(scheme=scheme, dt=dt, exp_full=exp_full, exp_half=exp_half)
    if scheme == "etd_rk4":
        tables.stage = phi_block(0.5 * dt, xi, params, weights=(1.0, 0.0, 0.0), scale=0.5 * dt)
        tables.w_u = phi_block(dt, xi, params, weights=(1.0, -3.0, 4.0), scale=dt)
        tables.w_ab = phi_block(dt, xi, params, weights=(0.0, 2.0, -4.0), scale=dt)
        tables.w_c = phi_block(dt, xi, params, weights=(0.0, -1.0, 4.0), scale=dt)
    elif scheme == "etd2":
        tables.p1 = phi_block(dt, xi, params, weights=(1.0, 0.0, 0.0), scale=dt)
        tables.p2 = phi_block(dt, xi, params, weights=(0.0, 1.0, 0.0), scale=dt)
    elif scheme != "strang_split":
        raise ValueError(f"unknown scheme {scheme!r}")
    return tables
