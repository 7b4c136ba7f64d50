"""Periodic-box spectral machinery.

Real fields live on a uniform N^3 grid over a cube of side ``length``;
their spectral representation uses the real-input FFT layout
(shape ``(N, N, N//2 + 1)``) with the *forward* normalization, i.e.
coefficients are true Fourier-series amplitudes:

    f(x) = sum_k  f_hat(k) exp(i k . x),        k = (2*pi/L) * m.

Provided operators: fractional powers ``Lambda^r`` (multiplier |k|^r),
exact spectral grad/div/curl, the velocity splitting into a compressible
scalar ``v = Lambda^-1 div u`` and an antisymmetric rotational part
``omega = Lambda^-1 curl u`` (with ``(curl z)_i^j = d_j z^i - d_i z^j``),
and Parseval-based norms.

Zero-mode convention: ``Lambda^r`` zeroes the k = 0 mode for r <= 0, so
splitting requires mean-zero velocity; a non-zero mean is dropped with a
warning.  Omega is stored as its three independent components in the
index-pair order ``CURL_PAIRS``; the full 3x3 antisymmetric matrix is
materialized on demand.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.fft import irfftn, rfftn

# (i, j) index pairs of the stored independent entries of omega_i^j.
CURL_PAIRS = ((0, 1), (0, 2), (1, 2))

NORM_KINDS = ("l1", "l2", "linf", "h1", "h2", "h3")


class MeanDroppedWarning(UserWarning):
    """Velocity handed to the splitting had a non-zero mean."""


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform periodic grid with cached wavenumber arrays.

    Parameters
    ----------
    n : int
        Points per dimension; even and >= 4 (powers of two are fastest).
    length : float
        Physical box side.
    """

    n: int
    length: float

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ValueError(f"grid size must be even and >= 4, got {self.n}")
        if not self.length > 0:
            raise ValueError(f"box length must be positive, got {self.length}")

    # --- derived geometry ----------------------------------------------
    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def cell_volume(self) -> float:
        return (self.length / self.n) ** 3

    @property
    def volume(self) -> float:
        return self.length**3

    @property
    def shape(self):
        return (self.n, self.n, self.n)

    @property
    def spectral_shape(self):
        return (self.n, self.n, self.n // 2 + 1)

    def axis_coordinates(self):
        return np.arange(self.n) * self.spacing

    def axis_wavenumbers(self) -> np.ndarray:
        """Full symmetric wavenumber axis, (2*pi/L)*m for m in [-N/2, N/2)."""
        return 2.0 * np.pi / self.length * np.fft.fftfreq(self.n, d=1.0 / self.n)

    # --- cached spectral-layout arrays -----------------------------------
    @property
    def k_vectors(self):
        """Broadcastable (kx, ky, kz) arrays in the rfft layout."""
        return _grid_cache(self)["k_vectors"]

    @property
    def k_mag(self) -> np.ndarray:
        """|k| over the rfft layout, zero at the mean mode."""
        return _grid_cache(self)["k_mag"]

    @property
    def parseval_weight(self) -> np.ndarray:
        """Hermitian multiplicity of each stored rfft mode (1 or 2)."""
        return _grid_cache(self)["parseval_weight"]

    @property
    def dealias_mask(self) -> np.ndarray:
        """Two-thirds-rule keep mask (per-axis integer modes <= N/3)."""
        return _grid_cache(self)["dealias_mask"]


_GRID_CACHE: dict = {}


def _grid_cache(grid: SpectralGrid) -> dict:
    key = (grid.n, grid.length)
    entry = _GRID_CACHE.get(key)
    if entry is None:
        n = grid.n
        kfull = grid.axis_wavenumbers()
        khalf = 2.0 * np.pi / grid.length * np.arange(n // 2 + 1)
        kx = kfull[:, None, None]
        ky = kfull[None, :, None]
        kz = khalf[None, None, :]
        k_mag = np.sqrt(kx**2 + ky**2 + kz**2)
        weight = np.ones(n // 2 + 1)
        weight[1:] = 2.0
        if n % 2 == 0:
            weight[-1] = 1.0
        weight = np.broadcast_to(weight[None, None, :], grid.spectral_shape)
        m_full = np.abs(np.fft.fftfreq(n, d=1.0 / n))
        m_half = np.arange(n // 2 + 1)
        keep = n // 3
        mask = (
            (m_full[:, None, None] <= keep)
            & (m_full[None, :, None] <= keep)
            & (m_half[None, None, :] <= keep)
        )
        entry = {
            "k_vectors": (kx, ky, kz),
            "k_mag": k_mag,
            "parseval_weight": weight,
            "dealias_mask": mask,
        }
        _GRID_CACHE[key] = entry
    return entry


# --------------------------------------------------------------------------
# transforms
# --------------------------------------------------------------------------

def to_spectral(f: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Forward transform of a real field (last three axes are the grid)."""
    return rfftn(f, axes=(-3, -2, -1), norm="forward")


def to_physical(f_hat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Inverse transform back to the physical grid."""
    return irfftn(f_hat, s=grid.shape, axes=(-3, -2, -1), norm="forward")


# --------------------------------------------------------------------------
# multiplier operators (spectral in/out, suffix _hat)
# --------------------------------------------------------------------------

def lambda_power_hat(f_hat: np.ndarray, r: float, grid: SpectralGrid) -> np.ndarray:
    with np.errstate(divide="ignore"):
        mult = grid.k_mag**r
    if r <= 0:
        mult[0, 0, 0] = 0.0  # mean mode annihilated; |k|^r undefined there for r < 0
    return f_hat * mult


def grad_hat(f_hat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    kx, ky, kz = grid.k_vectors
    return np.stack([1j * kx * f_hat, 1j * ky * f_hat, 1j * kz * f_hat])


def div_hat(u_hat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    kx, ky, kz = grid.k_vectors
    return 1j * (kx * u_hat[0] + ky * u_hat[1] + kz * u_hat[2])


def curl_hat(u_hat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Independent components (d_j u^i - d_i u^j) in CURL_PAIRS order."""
    k = grid.k_vectors
    out = np.empty((3,) + u_hat.shape[1:], dtype=u_hat.dtype)
    for m, (i, j) in enumerate(CURL_PAIRS):
        out[m] = 1j * (k[j] * u_hat[i] - k[i] * u_hat[j])
    return out


def curl_matrix_div_hat(w_hat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Row-wise divergence d_j omega_i^j of the antisymmetric matrix field."""
    kx, ky, kz = grid.k_vectors
    w12, w13, w23 = w_hat
    out = np.empty((3,) + w_hat.shape[1:], dtype=w_hat.dtype)
    out[0] = 1j * (ky * w12 + kz * w13)
    out[1] = 1j * (-kx * w12 + kz * w23)
    out[2] = 1j * (-kx * w13 - ky * w23)
    return out


def _inverse_k(grid: SpectralGrid) -> np.ndarray:
    k = grid.k_mag
    safe = np.where(k > 0.0, k, 1.0)
    return np.where(k > 0.0, 1.0 / safe, 0.0)


def hodge_decompose_hat(u_hat: np.ndarray, grid: SpectralGrid):
    """Split spectral velocity into (v_hat, w_hat, mean_dropped).

    The mean flag fires only on a mean that is large relative to the
    field (round-trip transforms leave ~1e-17 dust on the zero mode).
    """
    inv_k = _inverse_k(grid)
    scale = float(np.max(np.abs(u_hat)))
    mean_dropped = bool(np.max(np.abs(u_hat[:, 0, 0, 0])) > 1e-13 * scale) if scale else False
    v_hat = div_hat(u_hat, grid) * inv_k
    w_hat = curl_hat(u_hat, grid) * inv_k
    v_hat[0, 0, 0] = 0.0
    w_hat[:, 0, 0, 0] = 0.0
    return v_hat, w_hat, mean_dropped


def hodge_reconstruct_hat(v_hat: np.ndarray, w_hat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Velocity u_hat = -Lambda^-1 grad v - Lambda^-1 div omega."""
    u_hat = -(grad_hat(v_hat, grid) + curl_matrix_div_hat(w_hat, grid)) * _inverse_k(grid)
    u_hat[:, 0, 0, 0] = 0.0
    return u_hat


# --------------------------------------------------------------------------
# physical-field wrappers
# --------------------------------------------------------------------------

def lambda_power(f: np.ndarray, r: float, grid: SpectralGrid) -> np.ndarray:
    return to_physical(lambda_power_hat(to_spectral(f, grid), r, grid), grid)


def grad(f: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    return to_physical(grad_hat(to_spectral(f, grid), grid), grid)


def div(u: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    return to_physical(div_hat(to_spectral(u, grid), grid), grid)


def curl(u: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    return to_physical(curl_hat(to_spectral(u, grid), grid), grid)


def hodge_decompose(u: np.ndarray, grid: SpectralGrid):
    """Split physical velocity into (v, omega components).

    The velocity must be mean-zero per component; a non-zero mean is
    dropped and reported through a `MeanDroppedWarning`.
    """
    v_hat, w_hat, dropped = hodge_decompose_hat(to_spectral(u, grid), grid)
    if dropped:
        warnings.warn(
            "velocity mean dropped by the compressible/rotational split",
            MeanDroppedWarning,
            stacklevel=2,
        )
    return to_physical(v_hat, grid), to_physical(w_hat, grid)


def hodge_reconstruct(v: np.ndarray, omega: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    u_hat = hodge_reconstruct_hat(to_spectral(v, grid), to_spectral(omega, grid), grid)
    return to_physical(u_hat, grid)


def omega_matrix(omega: np.ndarray) -> np.ndarray:
    """Materialize the full antisymmetric 3x3 matrix field from components."""
    shape = omega.shape[1:]
    full = np.zeros((3, 3) + shape, dtype=omega.dtype)
    for m, (i, j) in enumerate(CURL_PAIRS):
        full[i, j] = omega[m]
        full[j, i] = -omega[m]
    return full


# --------------------------------------------------------------------------
# norms and inner products
# --------------------------------------------------------------------------

def spectral_l2(f_hat: np.ndarray, grid: SpectralGrid, multiplier: Optional[np.ndarray] = None) -> float:
    """Parseval L2 norm of (possibly component-stacked) spectral data."""
    dens = grid.parseval_weight * np.abs(f_hat) ** 2
    if multiplier is not None:
        dens = dens * multiplier
    return float(np.sqrt(grid.volume * np.sum(dens.real)))


def spectral_inner(f_hat: np.ndarray, g_hat: np.ndarray, grid: SpectralGrid, multiplier: Optional[np.ndarray] = None) -> float:
    """Real L2 inner product <f, g>, summed over leading component axes."""
    dens = grid.parseval_weight * (np.conj(f_hat) * g_hat).real
    if multiplier is not None:
        dens = dens * multiplier
    return float(grid.volume * np.sum(dens))


def sobolev_multiplier(k_order: int, grid: SpectralGrid) -> np.ndarray:
    """Multiplier sum_{m<=k} |k|^(2m) for the H^k norm."""
    k2 = grid.k_mag**2
    mult = np.ones_like(k2)
    acc = np.ones_like(k2)
    for _ in range(k_order):
        acc = acc * k2
        mult = mult + acc
    return mult


def norms(field: np.ndarray, kind: str, grid: SpectralGrid) -> float:
    """Norm of a scalar field or a component-stacked vector field.

    ``l2`` and ``h1``..``h3`` are evaluated spectrally via Parseval (the
    H^k multiplier counts derivative tuples, sum_{m<=k} |k|^(2m)); ``l1``
    and ``linf`` act on the physical grid with cell-volume weighting, on
    the pointwise Euclidean magnitude for vector input.
    """
    kind = kind.lower()
    if kind not in NORM_KINDS:
        raise ValueError(f"unsupported norm kind {kind!r}; expected one of {NORM_KINDS}")
    if kind in ("l1", "linf"):
        mag = np.abs(field) if field.ndim == 3 else np.sqrt(np.sum(field**2, axis=0))
        if kind == "l1":
            return float(np.sum(mag) * grid.cell_volume)
        return float(np.max(mag))
    f_hat = to_spectral(field, grid)
    if kind == "l2":
        return spectral_l2(f_hat, grid)
    order = int(kind[1])
    return spectral_l2(f_hat, grid, multiplier=sobolev_multiplier(order, grid))


# --------------------------------------------------------------------------
# spectral state container
# --------------------------------------------------------------------------

@dataclass
class FourierState:
    """Spectral state split into (p_hat, v_hat, omega_hat) plus optional s_hat.

    ``omega_hat`` holds the three independent components (CURL_PAIRS
    order) of the antisymmetric rotational part.  The zero modes of
    ``v_hat`` and ``omega_hat`` are forced to zero on construction.
    """

    p_hat: np.ndarray
    v_hat: np.ndarray
    omega_hat: np.ndarray
    grid: SpectralGrid
    s_hat: Optional[np.ndarray] = None

    def __post_init__(self):
        expect = self.grid.spectral_shape
        if self.p_hat.shape != expect or self.v_hat.shape != expect:
            raise ValueError("scalar spectral fields do not match the grid layout")
        if self.omega_hat.shape != (3,) + expect:
            raise ValueError("omega_hat must hold 3 independent components")
        if self.s_hat is not None and self.s_hat.shape != expect:
            raise ValueError("s_hat does not match the grid layout")
        self.v_hat[0, 0, 0] = 0.0
        self.omega_hat[:, 0, 0, 0] = 0.0

    def u_hat(self) -> np.ndarray:
        return hodge_reconstruct_hat(self.v_hat, self.omega_hat, self.grid)

    def copy(self) -> "FourierState":
        return FourierState(
            self.p_hat.copy(),
            self.v_hat.copy(),
            self.omega_hat.copy(),
            self.grid,
            None if self.s_hat is None else self.s_hat.copy(),
        )


def fourier_from_fields(p, u, grid: SpectralGrid, s=None) -> FourierState:
    """Build a FourierState from physical (p, u[, s]) fields."""
    v_hat, w_hat, dropped = hodge_decompose_hat(to_spectral(u, grid), grid)
    if dropped:
        warnings.warn(
            "velocity mean dropped while building the spectral state",
            MeanDroppedWarning,
            stacklevel=2,
        )
    return FourierState(
        p_hat=to_spectral(p, grid),
        v_hat=v_hat,
        omega_hat=w_hat,
        grid=grid,
        s_hat=None if s is None else to_spectral(s, grid),
    )


def fourier_to_fields(fs: FourierState):
    """Physical (p, u, s) from a FourierState; s is None when absent."""
    p = to_physical(fs.p_hat, fs.grid)
    u = to_physical(fs.u_hat(), fs.grid)
    s = None if fs.s_hat is None else to_physical(fs.s_hat, fs.grid)
    return p, u, s
