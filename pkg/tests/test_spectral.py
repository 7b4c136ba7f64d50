import numpy as np
import pytest

from eulerdamp import SpectralGrid, spectral
from eulerdamp.spectral import (
    FourierState,
    MeanDroppedWarning,
    fourier_from_fields,
    fourier_to_fields,
    hodge_decompose,
    hodge_reconstruct,
    lambda_power,
    norms,
    omega_matrix,
)

from conftest import gradient_field, smooth_scalar, smooth_vector, solenoidal_field


def test_grid_invariants():
    grid = SpectralGrid(n=8, length=3.0)
    axis = grid.axis_wavenumbers()
    assert axis.shape == (8,)
    assert np.count_nonzero(axis == 0.0) == 1
    ints = axis * grid.length / (2 * np.pi)
    assert sorted(np.round(ints).astype(int)) == [-4, -3, -2, -1, 0, 1, 2, 3]
    with pytest.raises(ValueError):
        SpectralGrid(n=3, length=1.0)
    with pytest.raises(ValueError):
        SpectralGrid(n=6, length=-1.0)
    with pytest.raises(ValueError):
        SpectralGrid(n=7, length=1.0)


def test_lambda_power_identity_and_mean(grid16):
    rng = np.random.default_rng(0)
    f = smooth_scalar(rng, grid16)
    assert np.max(np.abs(lambda_power(f, 0.0, grid16) - f)) < 1e-13
    g = f + 2.5  # non-zero mean is annihilated for r <= 0
    assert np.max(np.abs(lambda_power(g, 0.0, grid16) - f)) < 1e-13


def test_lambda_power_single_mode(grid16):
    # |k| = 2 mode on the 2*pi box: amplitude halves under Lambda^-1
    x = grid16.axis_coordinates()
    f = np.broadcast_to(np.sin(2 * x)[:, None, None], grid16.shape).copy()
    out = lambda_power(f, -1.0, grid16)
    assert np.max(np.abs(out - 0.5 * f)) < 1e-13


def test_lambda_power_inverse_pair(grid16):
    rng = np.random.default_rng(1)
    f = smooth_scalar(rng, grid16)
    back = lambda_power(lambda_power(f, 1.0, grid16), -1.0, grid16)
    assert np.max(np.abs(back - f)) <= 1e-13 * np.max(np.abs(f))


def test_grad_div_curl_identities(grid16):
    rng = np.random.default_rng(2)
    assert np.max(np.abs(spectral.grad(np.full(grid16.shape, 1.3), grid16))) < 1e-14

    # div(grad f) = -Lambda^2 f; single mode eigenvalue -(2*pi/L)^2
    x = grid16.axis_coordinates()
    f = np.broadcast_to(np.sin(x)[:, None, None], grid16.shape).copy()
    lap = spectral.div(spectral.grad(f, grid16), grid16)
    assert np.max(np.abs(lap + f)) < 1e-12  # (2*pi/L)^2 = 1 here

    g = smooth_scalar(rng, grid16)
    lap_g = spectral.div(spectral.grad(g, grid16), grid16)
    lam2 = lambda_power(g, 2.0, grid16)
    assert np.max(np.abs(lap_g + lam2)) <= 1e-12 * np.max(np.abs(lam2))

    curl_grad = spectral.curl(spectral.grad(g, grid16), grid16)
    assert np.max(np.abs(curl_grad)) <= 1e-13 * np.max(np.abs(spectral.grad(g, grid16)))


def test_derivative_commutes_with_lambda(grid16):
    rng = np.random.default_rng(3)
    f = smooth_scalar(rng, grid16)
    a = spectral.grad(lambda_power(f, 1.5, grid16), grid16)
    b = np.stack([lambda_power(a_i, 1.5, grid16) for a_i in spectral.grad(f, grid16)])
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))


# --------------------------------------------------------------------------
# velocity splitting
# --------------------------------------------------------------------------

def test_hodge_gradient_has_no_rotation(grid32):
    rng = np.random.default_rng(4)
    u = gradient_field(rng, grid32)
    v, omega = hodge_decompose(u, grid32)
    assert norms(omega, "l2", grid32) <= 1e-13 * norms(u, "l2", grid32)


def test_hodge_solenoidal_has_no_compression(grid32):
    rng = np.random.default_rng(5)
    u = solenoidal_field(rng, grid32)
    v, omega = hodge_decompose(u, grid32)
    assert norms(v, "l2", grid32) <= 1e-13 * norms(u, "l2", grid32)


def test_hodge_roundtrip_and_orthogonality(grid32):
    rng = np.random.default_rng(6)
    u = smooth_vector(rng, grid32)
    v, omega = hodge_decompose(u, grid32)
    back = hodge_reconstruct(v, omega, grid32)
    assert np.linalg.norm(back - u) <= 1e-12 * np.linalg.norm(u)

    # ||u||^2 = ||v||^2 + 0.5 ||omega||^2 with omega the full matrix field
    full = omega_matrix(omega)
    norm_matrix_sq = sum(
        norms(full[i, j], "l2", grid32) ** 2 for i in range(3) for j in range(3)
    )
    lhs = norms(u, "l2", grid32) ** 2
    rhs = norms(v, "l2", grid32) ** 2 + 0.5 * norm_matrix_sq
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_omega_matrix_antisymmetric(grid16):
    rng = np.random.default_rng(7)
    _, omega = hodge_decompose(smooth_vector(rng, grid16), grid16)
    full = omega_matrix(omega)
    for i in range(3):
        assert np.all(full[i, i] == 0.0)
        for j in range(3):
            assert np.array_equal(full[i, j], -full[j, i])


def test_hodge_mean_dropped_warning(grid16):
    rng = np.random.default_rng(8)
    u = smooth_vector(rng, grid16)
    u[0] += 0.5
    with pytest.warns(MeanDroppedWarning):
        v, omega = hodge_decompose(u, grid16)
    back = hodge_reconstruct(v, omega, grid16)
    assert np.linalg.norm(back - (u - u.mean(axis=(1, 2, 3), keepdims=True))) <= 1e-12 * np.linalg.norm(u)


# --------------------------------------------------------------------------
# norms
# --------------------------------------------------------------------------

def test_norms_zero_field(grid16):
    zero = np.zeros(grid16.shape)
    for kind in ("l1", "l2", "linf", "h1", "h2", "h3"):
        assert norms(zero, kind, grid16) == 0.0


def test_norms_single_mode():
    grid = SpectralGrid(n=16, length=5.0)
    x = grid.axis_coordinates()
    f = np.broadcast_to(np.sin(2 * np.pi * x / grid.length)[:, None, None], grid.shape).copy()
    vol = grid.volume
    assert norms(f, "l2", grid) == pytest.approx(np.sqrt(vol / 2.0), rel=1e-13)
    k1 = 2 * np.pi / grid.length
    assert norms(f, "h1", grid) == pytest.approx(
        np.sqrt(vol / 2.0) * np.sqrt(1.0 + k1**2), rel=1e-13
    )
    assert norms(f, "linf", grid) == pytest.approx(1.0, rel=1e-12)


def test_parseval(grid16):
    rng = np.random.default_rng(9)
    f = smooth_scalar(rng, grid16, mean_zero=False)
    physical = np.sqrt(np.sum(f**2) * grid16.cell_volume)
    assert norms(f, "l2", grid16) == pytest.approx(physical, rel=1e-12)


def test_norms_bad_kind(grid16):
    with pytest.raises(ValueError):
        norms(np.zeros(grid16.shape), "h4", grid16)


# --------------------------------------------------------------------------
# spectral state container
# --------------------------------------------------------------------------

def test_fourier_state_roundtrip(grid16):
    rng = np.random.default_rng(10)
    p = smooth_scalar(rng, grid16)
    u = smooth_vector(rng, grid16)
    s = smooth_scalar(rng, grid16)
    fs = fourier_from_fields(p, u, grid16, s=s)
    p2, u2, s2 = fourier_to_fields(fs)
    assert np.max(np.abs(p2 - p)) <= 1e-13 * np.max(np.abs(p))
    assert np.max(np.abs(u2 - u)) <= 1e-12 * np.max(np.abs(u))
    assert np.max(np.abs(s2 - s)) <= 1e-13 * np.max(np.abs(s))


def test_fourier_state_validation(grid16):
    shape = grid16.spectral_shape
    with pytest.raises(ValueError):
        FourierState(np.zeros(shape, complex), np.zeros(shape, complex),
                     np.zeros((2,) + shape, complex), grid16)
    fs = FourierState(np.zeros(shape, complex), np.ones(shape, complex),
                      np.ones((3,) + shape, complex), grid16)
    assert fs.v_hat[0, 0, 0] == 0.0  # zero modes forced
    assert np.all(fs.omega_hat[:, 0, 0, 0] == 0.0)
