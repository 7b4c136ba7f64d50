"""Backend equivalence and input validation for the Green-entry kernel."""

import numpy as np
import pytest

from eulerdamp import kernels
from eulerdamp.kernels import pure_backend


def _sample_inputs(rng, n=500):
    a = 10.0 ** rng.uniform(-1, 1, n)
    kappa2 = 10.0 ** rng.uniform(-1, 1, n)
    t = rng.uniform(0.0, 20.0, n)
    branch = rng.integers(0, 3, n)
    xi = np.where(
        branch == 0,
        rng.uniform(0.0, 0.9, n) * a / (2 * kappa2),          # overdamped
        np.where(
            branch == 1,
            a / (2 * kappa2) * (1.0 + rng.uniform(-1e-9, 1e-9, n)),  # near critical
            a / (2 * kappa2) * rng.uniform(1.1, 6.0, n),       # underdamped
        ),
    )
    return a, kappa2, t, xi


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled backend unavailable")
def test_backends_agree():
    # libm and numpy trig differ by ~ulp(b*t) in argument reduction, so
    # agreement is measured against the matrix scale, not entrywise
    rng = np.random.default_rng(42)
    a, kappa2, t, xi = _sample_inputs(rng)
    for i in range(len(t)):
        fast = kernels.green_entries(np.array([xi[i]]), t[i], a[i], kappa2[i])
        slow = kernels.green_entries(np.array([xi[i]]), t[i], a[i], kappa2[i], impl=pure_backend)
        scale = max(max(abs(float(s[0])) for s in slow), 1e-300)
        for f, s in zip(fast, slow):
            assert abs(float(f[0]) - float(s[0])) <= 2e-12 * scale


def test_identity_at_t0():
    g11, g12, g21, g22 = kernels.green_entries(np.array([0.0, 0.3, 0.5, 2.0]), 0.0, 1.0, 1.0)
    assert np.all(g11 == 1.0) and np.all(g22 == 1.0)
    assert np.all(g12 == 0.0) and np.all(g21 == 0.0)


def test_shape_preserved():
    xi = np.linspace(0, 3, 24).reshape(2, 3, 4)
    out = kernels.green_entries(xi, 0.7, 1.0, 1.3)
    assert all(g.shape == xi.shape for g in out)


def test_validation():
    with pytest.raises(ValueError):
        kernels.green_entries(np.array([1.0]), -0.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        kernels.green_entries(np.array([1.0]), 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        kernels.green_entries(np.array([1.0]), np.nan, 1.0, 1.0)
