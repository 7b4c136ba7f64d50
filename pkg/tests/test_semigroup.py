import numpy as np
import pytest
from scipy.linalg import expm

from eulerdamp import (
    GaussianRadialProfile,
    PhysicalParams,
    critical_wavenumber,
    eigenvalues,
    green_hat,
    high_freq_bound,
    low_freq_approx,
    propagate_linear,
    spectral,
    whole_space_cross,
    whole_space_norm,
)
from eulerdamp.quadrature import QuadratureError
from eulerdamp.semigroup import CRITICAL, OVERDAMPED, UNDERDAMPED, decay_study
from eulerdamp.spectral import fourier_from_fields

from conftest import smooth_scalar, smooth_vector, solenoidal_field


def _system_matrix(xi, params):
    return np.array([[0.0, -params.kappa2 * xi], [params.kappa2 * xi, -params.a]])


# --------------------------------------------------------------------------
# eigenvalues
# --------------------------------------------------------------------------

def test_eigenvalues_at_zero(unit_params):
    pair = eigenvalues(0.0, unit_params)
    assert pair.lambda_plus == pytest.approx(-1.0)
    assert pair.lambda_minus == pytest.approx(0.0)
    assert pair.regime == OVERDAMPED


def test_eigenvalues_hand_values(unit_params):
    pair = eigenvalues(0.3, unit_params)  # sqrt(1 - 0.36) = 0.8
    assert pair.lambda_plus == pytest.approx(-0.9, rel=1e-14)
    assert pair.lambda_minus == pytest.approx(-0.1, rel=1e-14)

    crit = eigenvalues(0.5, unit_params)
    assert crit.regime == CRITICAL
    assert crit.lambda_plus == pytest.approx(-0.5) and crit.lambda_minus == pytest.approx(-0.5)

    osc = eigenvalues(2.0, unit_params)
    assert osc.regime == UNDERDAMPED
    assert osc.lambda_plus == pytest.approx(np.conj(osc.lambda_minus))


def test_eigenvalue_vieta_and_stability():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        params = PhysicalParams(
            R=10.0 ** rng.uniform(-0.5, 0.5),
            cv=10.0 ** rng.uniform(-0.5, 0.5),
            a=10.0 ** rng.uniform(-1, 1),
            p_inf=10.0 ** rng.uniform(-0.5, 0.5),
            s_inf=rng.uniform(-1, 1),
            k=10.0 ** rng.uniform(-0.5, 0.5),
        )
        crit = critical_wavenumber(params)
        xi = crit * rng.choice([rng.uniform(0, 1), 1.0 + rng.uniform(-1e-10, 1e-10), rng.uniform(1, 5)])
        pair = eigenvalues(xi, params)
        assert pair.lambda_plus + pair.lambda_minus == pytest.approx(-params.a, rel=1e-12)
        assert pair.lambda_plus * pair.lambda_minus == pytest.approx(
            params.kappa2**2 * xi**2, rel=1e-12, abs=1e-18
        )
        assert pair.lambda_plus.real <= 0 and pair.lambda_minus.real <= 1e-15
        if xi > 0:
            assert pair.spectral_abscissa < 0


def test_eigenvalues_negative_xi_rejected(params):
    with pytest.raises(ValueError):
        eigenvalues(-0.1, params)


# --------------------------------------------------------------------------
# solution matrix
# --------------------------------------------------------------------------

def test_green_zero_mode(unit_params):
    # xi = 0 decouples: p frozen, v damped at rate a (vs expm oracle too)
    for t in (0.0, 0.5, 3.0, 50.0):
        g = green_hat(0.0, t, unit_params)
        assert g.g11 == pytest.approx(1.0, abs=1e-14)
        assert g.g12 == 0.0 and g.g21 == 0.0
        assert g.g22 == pytest.approx(np.exp(-unit_params.a * t), rel=1e-13)
        oracle = expm(_system_matrix(0.0, unit_params) * t)
        assert np.allclose(g.as_array(), oracle, rtol=1e-13, atol=1e-16)


def test_green_identity_at_t0(params):
    for xi in (0.0, 0.2, critical_wavenumber(params), 4.0):
        g = green_hat(xi, 0.0, params)
        assert np.array_equal(g.as_array(), np.eye(2))


def test_green_critical_closed_form(unit_params):
    # double root at xi = 1/2: g11 = exp(-t/2)(1 + t/2), phi = t exp(-t/2)
    xi = critical_wavenumber(unit_params)
    for t in (0.1, 1.0, 7.0):
        g = green_hat(xi, t, unit_params)
        assert g.g11 == pytest.approx(np.exp(-t / 2) * (1 + t / 2), rel=1e-12)
        phi = -g.g12 / (unit_params.kappa2 * xi)
        assert phi == pytest.approx(t * np.exp(-t / 2), rel=1e-12)
        oracle = expm(_system_matrix(xi, unit_params) * t)
        rel = np.linalg.norm(g.as_array() - oracle) / np.linalg.norm(oracle)
        assert rel < 1e-12


def test_green_matches_expm_sampled():
    # quick version of the acceptance sweep (full version in test_acceptance)
    rng = np.random.default_rng(12)
    for _ in range(200):
        a = 10.0 ** rng.uniform(-1, 1)
        kappa2 = 10.0 ** rng.uniform(-1, 1)
        params = _raw_params(a, kappa2)
        xi = rng.uniform(0, 4) * critical_wavenumber(params)
        t = rng.uniform(0, 20)
        g = green_hat(xi, t, params).as_array()
        oracle = expm(_system_matrix(xi, params) * t)
        assert np.linalg.norm(g - oracle) <= 1e-10 * max(np.linalg.norm(oracle), 1e-30)


def _raw_params(a, kappa2):
    # R = cv = 1 makes kappa2^2 = 2 p / rho with rho = k sqrt(p); choose
    # p = 1, k = 2 / kappa2^2 so that kappa2 comes out as requested
    return PhysicalParams(R=1.0, cv=1.0, a=a, p_inf=1.0, s_inf=0.0, k=2.0 / kappa2**2)


def test_raw_params_helper():
    p = _raw_params(0.7, 2.3)
    assert p.a == 0.7 and p.kappa2 == pytest.approx(2.3, rel=1e-14)


def test_green_determinant_identity(params):
    rng = np.random.default_rng(13)
    for _ in range(200):
        xi = rng.uniform(0, 3)
        t = rng.uniform(0, 10)
        g = green_hat(xi, t, params)
        assert g.det() == pytest.approx(np.exp(-params.a * t), rel=1e-10)


# --------------------------------------------------------------------------
# propagation
# --------------------------------------------------------------------------

def _random_fourier_state(rng, grid):
    p = smooth_scalar(rng, grid)
    u = smooth_vector(rng, grid)
    s = smooth_scalar(rng, grid)
    return fourier_from_fields(p, u, grid, s=s)


def test_propagate_identity_at_t0(params, grid16):
    rng = np.random.default_rng(14)
    fs = _random_fourier_state(rng, grid16)
    out = propagate_linear(fs, 0.0, params)
    assert np.array_equal(out.p_hat, fs.p_hat)
    assert np.array_equal(out.v_hat, fs.v_hat)
    assert np.array_equal(out.omega_hat, fs.omega_hat)
    assert np.array_equal(out.s_hat, fs.s_hat)


def test_propagate_pure_rotational_decay(params, grid32):
    rng = np.random.default_rng(15)
    u = solenoidal_field(rng, grid32)
    fs = fourier_from_fields(np.zeros(grid32.shape), u, grid32)
    n0 = spectral.norms(u, "l2", grid32)
    for t in (1.0, 5.0):
        out = propagate_linear(fs, t, params)
        u_t = spectral.to_physical(out.u_hat(), grid32)
        n_t = spectral.norms(u_t, "l2", grid32)
        assert abs(n_t / (np.exp(-params.a * t) * n0) - 1.0) <= 1e-12


def test_propagate_semigroup_property(params, grid16):
    rng = np.random.default_rng(16)
    fs = _random_fourier_state(rng, grid16)
    two_step = propagate_linear(propagate_linear(fs, 0.7, params), 1.6, params)
    one_step = propagate_linear(fs, 2.3, params)
    for a, b in ((two_step.p_hat, one_step.p_hat), (two_step.v_hat, one_step.v_hat),
                 (two_step.omega_hat, one_step.omega_hat)):
        scale = np.max(np.abs(b)) or 1.0
        assert np.max(np.abs(a - b)) <= 1e-10 * scale
    assert np.array_equal(two_step.s_hat, one_step.s_hat)  # entropy untouched


def test_propagate_entropy_frozen(params, grid16):
    rng = np.random.default_rng(17)
    fs = _random_fourier_state(rng, grid16)
    out = propagate_linear(fs, 4.2, params)
    assert np.array_equal(out.s_hat, fs.s_hat)


# --------------------------------------------------------------------------
# low-frequency surrogate
# --------------------------------------------------------------------------

def test_low_freq_matches_exactly_at_zero(unit_params):
    for t in (0.5, 2.0, 25.0):
        approx = low_freq_approx(0.0, t, unit_params)
        exact = green_hat(0.0, t, unit_params)
        assert np.allclose(approx.as_array(), exact.as_array(), rtol=1e-13, atol=1e-16)


def test_low_freq_quadratic_error(unit_params):
    # entrywise difference <= C xi^2 uniformly over t; report fitted C
    xis = [0.01, 0.02, 0.05, 0.1]
    ts = [1.0, 10.0, 100.0]
    c_fit = 0.0
    for xi in xis:
        worst = max(
            np.max(np.abs(low_freq_approx(xi, t, unit_params).as_array()
                          - green_hat(xi, t, unit_params).as_array()))
            for t in ts
        )
        c_fit = max(c_fit, worst / xi**2)
    assert c_fit < 10.0  # O(1) constant for a = kappa2 = 1


def test_low_freq_g21_sign_agreement(unit_params):
    for xi in (0.01, 0.05, 0.1):
        for t in (0.5, 1.0, 10.0, 100.0):
            approx = low_freq_approx(xi, t, unit_params)
            exact = green_hat(xi, t, unit_params)
            if abs(exact.g21) > 1e-14:
                assert np.sign(approx.g21) == np.sign(exact.g21)


def test_low_freq_variants_coincide_when_a_is_one(unit_params):
    a_sq = low_freq_approx(0.05, 10.0, unit_params, diffusive_rate="a_squared")
    ex = low_freq_approx(0.05, 10.0, unit_params, diffusive_rate="exact")
    assert np.array_equal(a_sq.as_array(), ex.as_array())
    with pytest.raises(ValueError):
        low_freq_approx(0.05, 1.0, unit_params, diffusive_rate="bogus")


# --------------------------------------------------------------------------
# high-frequency bound
# --------------------------------------------------------------------------

def test_high_freq_underdamped_rate(unit_params):
    eta = 2.0 * critical_wavenumber(unit_params)
    report = high_freq_bound(eta, unit_params)
    assert report.ok
    assert report.r0_emp == pytest.approx(unit_params.a / 2.0, rel=1e-12)
    assert report.c_emp >= 1.0  # identity at t = 0


def test_high_freq_detects_vanishing_rate(unit_params):
    report = high_freq_bound(1e-12, unit_params, samples=[1e-12, 0.5, 2.0])
    assert not report.ok
    assert "vanishing" in report.reason


def test_high_freq_empty_samples(unit_params):
    with pytest.raises(ValueError):
        high_freq_bound(1.0, unit_params, samples=[])


# --------------------------------------------------------------------------
# whole-space quadrature
# --------------------------------------------------------------------------

def _simpson_oracle(f, lo, hi, n=4001):
    x = np.linspace(lo, hi, n)
    return float(np.trapezoid(f(x), x))  # fine fixed grid; trapezoid suffices at n=4001


def test_whole_space_t0_closed_form(params):
    profile = GaussianRadialProfile()
    val = whole_space_norm(profile, 0.0, 0, params, component="p")
    exact = np.sqrt(4 * np.pi * np.sqrt(2 * np.pi) / 16)
    assert val == pytest.approx(exact, rel=1e-10)
    # independent fixed-grid oracle
    oracle = np.sqrt(_simpson_oracle(lambda r: 4 * np.pi * r**2 * np.exp(-2 * r**2), 0, 8, 20001))
    assert val == pytest.approx(oracle, rel=1e-8)


def test_whole_space_higher_order_t0(params):
    profile = GaussianRadialProfile()
    for order in (1, 2, 3):
        val = whole_space_norm(profile, 0.0, order, params, component="p")
        oracle = np.sqrt(_simpson_oracle(
            lambda r: 4 * np.pi * r ** (2 + 2 * order) * np.exp(-2 * r**2), 0, 10, 40001
        ))
        assert val == pytest.approx(oracle, rel=1e-7)


def test_whole_space_validation(params):
    profile = GaussianRadialProfile()
    with pytest.raises(ValueError):
        whole_space_norm(profile, 1.0, 5, params)
    with pytest.raises(ValueError):
        whole_space_norm(profile, 1.0, 0, params, component="bogus")

    class NoCutoff:
        def p0(self, r):
            return np.exp(-(r**2))

        def v0(self, r):
            return 0.0 * r

    with pytest.raises(ValueError, match="cutoff"):
        whole_space_norm(NoCutoff(), 1.0, 0, params)
    # explicit cutoff works
    val = whole_space_norm(NoCutoff(), 0.0, 0, params, r_cut=8.0)
    assert val == pytest.approx(np.sqrt(4 * np.pi * np.sqrt(2 * np.pi) / 16), rel=1e-8)


def test_whole_space_quadrature_failure_propagates(params):
    profile = GaussianRadialProfile()
    with pytest.raises(QuadratureError, match="no convergence"):
        whole_space_norm(profile, 13.7, 3, params, rtol=0.0)


def test_decay_slopes_quick(params):
    # 16-point version of the acceptance fit
    profile = GaussianRadialProfile()
    times = np.geomspace(50, 500, 16)
    study = decay_study(profile, times, params, components=("p", "u"), orders=(0,))
    x = np.log1p(times)
    slope_p = np.polyfit(x, np.log(study[("p", 0)]), 1)[0]
    slope_u = np.polyfit(x, np.log(study[("u", 0)]), 1)[0]
    assert -0.80 <= slope_p <= -0.70
    assert -1.32 <= slope_u <= -1.18


def test_cross_term_cauchy_schwarz(params):
    profile = GaussianRadialProfile(p_amp=1.0, v_amp=0.5)
    for t in (0.0, 1.0, 10.0):
        cross = whole_space_cross(profile, t, 0, params)
        bound = whole_space_norm(profile, t, 1, params, component="p") * \
            whole_space_norm(profile, t, 0, params, component="u")
        assert abs(cross) <= bound * (1 + 1e-9) + 1e-15
