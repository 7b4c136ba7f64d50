"""phi-function evaluation against an arbitrary-precision oracle."""

import mpmath
import numpy as np
import pytest

from eulerdamp import PhysicalParams, kernels
from eulerdamp.etd import CoefBlock, build_tables, phi, phi_divided_diff, phi_block

mpmath.mp.dps = 50


def _phi_mp(z, j):
    z = mpmath.mpc(z)
    if z == 0:
        return mpmath.mpf(1) / mpmath.factorial(j)
    e = mpmath.exp(z)
    if j == 1:
        return (e - 1) / z
    if j == 2:
        return (e - 1 - z) / z**2
    return (e - 1 - z - z**2 / 2) / z**3


_SAMPLES = [
    0.0, 1e-12, -1e-12, 0.3, -0.3, 0.999, -0.999, 1.001, -1.001,
    -5.0, -20.0, 3.0, 1e-12j, 2j, 7j, 20j, -0.5 + 4j, -3 - 3j, -0.05 + 0.9j,
]


@pytest.mark.parametrize("j", [1, 2, 3])
def test_phi_matches_mpmath(j):
    z = np.array(_SAMPLES, dtype=complex)
    mine = phi(z, j)
    for zi, vi in zip(z, mine):
        ref = complex(_phi_mp(zi, j))
        assert vi == pytest.approx(ref, rel=5e-14, abs=1e-16)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_divided_difference_matches_mpmath(j):
    rng = np.random.default_rng(1)
    base = rng.uniform(-3, 0.3, 40) + 1j * rng.uniform(-4, 4, 40)
    gaps = 10.0 ** rng.uniform(-14, 0, 40) * np.exp(1j * rng.uniform(0, 2 * np.pi, 40))
    za = base
    zb = base + gaps
    mine = phi_divided_diff(za, zb, j)
    for a_, b_, v in zip(za, zb, mine):
        ref = complex((_phi_mp(a_, j) - _phi_mp(b_, j)) / (mpmath.mpc(a_) - mpmath.mpc(b_)))
        assert v == pytest.approx(ref, rel=1e-11, abs=1e-15)


def test_divided_difference_at_coalescence():
    # za == zb exactly: series limit equals phi_j'(z)
    z = np.array([-0.4 + 0.0j])
    for j in (1, 2, 3):
        val = phi_divided_diff(z, z.copy(), j)[0]
        h = mpmath.mpf(1) / 10**20
        ref = complex((_phi_mp(z[0] + h, j) - _phi_mp(z[0] - h, j)) / (2 * h))
        assert val == pytest.approx(ref, rel=1e-12)


def test_phi_block_reduces_to_rk4_weights(params):
    # the zero-eigenvalue (entropy) channel carries classical RK4 weights
    xi = np.array([0.0, 0.4, 2.0])
    dt = 0.37
    alpha = phi_block(dt, xi, params, weights=(1.0, -3.0, 4.0), scale=dt)
    beta = phi_block(dt, xi, params, weights=(0.0, 2.0, -4.0), scale=dt)
    gamma = phi_block(dt, xi, params, weights=(0.0, -1.0, 4.0), scale=dt)
    assert alpha.c_s == pytest.approx(dt / 6.0, rel=1e-14)
    assert beta.c_s == pytest.approx(dt / 3.0, rel=1e-14)
    assert gamma.c_s == pytest.approx(dt / 6.0, rel=1e-14)


def test_exp_block_matches_kernel(params):
    xi = np.linspace(0.0, 4.0, 33)
    dt = 0.21
    blk = build_tables("etd_rk4", dt, xi, params).exp_full
    g11, g12, g21, g22 = kernels.green_entries(xi, dt, params.a, params.kappa2)
    assert np.array_equal(blk.m11, g11) and np.array_equal(blk.m12, g12)
    assert np.array_equal(blk.m21, g21) and np.array_equal(blk.m22, g22)
    assert blk.c_omega == pytest.approx(np.exp(-params.a * dt), rel=1e-15)
    assert blk.c_s == 1.0


def test_phi_block_entries_match_expm_oracle(params):
    # dt * phi1(dt A) == A^-1 (exp(dt A) - I) for invertible A (xi > 0)
    from scipy.linalg import expm

    dt = 0.3
    for xi in (0.05, 0.4, params.a / (2 * params.kappa2), 3.0):
        blk = phi_block(dt, np.array([xi]), params, weights=(1.0, 0.0, 0.0), scale=dt)
        A = np.array([[0.0, -params.kappa2 * xi], [params.kappa2 * xi, -params.a]])
        ref = np.linalg.solve(A, expm(dt * A) - np.eye(2))
        mine = np.array([[blk.m11[0], blk.m12[0]], [blk.m21[0], blk.m22[0]]])
        assert np.allclose(mine, ref, rtol=1e-11, atol=1e-13)
