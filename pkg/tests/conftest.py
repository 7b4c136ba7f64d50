import numpy as np
import pytest

from eulerdamp import PhysicalParams, SpectralGrid, spectral


@pytest.fixture
def params():
    """Default constants: rho_inf = 1, kappa1*kappa2 = 1."""
    return PhysicalParams()


@pytest.fixture
def unit_params():
    """Constants tuned so kappa2 = 1 and a = 1 (rho_inf = 2)."""
    p = PhysicalParams(R=1.0, cv=1.0, a=1.0, p_inf=1.0, s_inf=0.0, k=2.0)
    assert abs(p.kappa2 - 1.0) < 1e-15
    return p


@pytest.fixture
def grid16():
    return SpectralGrid(n=16, length=2.0 * np.pi)


@pytest.fixture
def grid32():
    return SpectralGrid(n=32, length=2.0 * np.pi)


def smooth_scalar(rng, grid, decay=0.3, mean_zero=True):
    """Band-limited random scalar field (spectrum cut at the 2/3 rule)."""
    f_hat = spectral.to_spectral(rng.standard_normal(grid.shape), grid)
    f_hat *= np.exp(-decay * grid.k_mag**2) * grid.dealias_mask
    if mean_zero:
        f_hat[0, 0, 0] = 0.0
    return spectral.to_physical(f_hat, grid)


def smooth_vector(rng, grid, decay=0.3):
    return np.stack([smooth_scalar(rng, grid, decay) for _ in range(3)])


def gradient_field(rng, grid, decay=0.3):
    """Curl-free velocity u = grad(phi) for a random smooth potential."""
    phi = smooth_scalar(rng, grid, decay)
    return spectral.grad(phi, grid)


def solenoidal_field(rng, grid, decay=0.3):
    """Divergence-free velocity u = curl(A) for a random smooth potential."""
    a_hat = np.stack([
        spectral.to_spectral(smooth_scalar(rng, grid, decay), grid) for _ in range(3)
    ])
    kx, ky, kz = grid.k_vectors
    u_hat = np.stack([
        1j * (ky * a_hat[2] - kz * a_hat[1]),
        1j * (kz * a_hat[0] - kx * a_hat[2]),
        1j * (kx * a_hat[1] - ky * a_hat[0]),
    ])
    return spectral.to_physical(u_hat, grid)
