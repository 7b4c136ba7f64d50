"""Backend dispatch for the hot Green-function kernel.

The compiled Cython extension is used when it imported cleanly; otherwise
the pure-numpy twin takes over.  Set the environment variable
``EULERDAMP_PURE_PYTHON=1`` before import to force the fallback (the
benchmark and the equivalence tests do this).
"""

import os

import numpy as np

if os.environ.get("EULERDAMP_PURE_PYTHON"):
    from . import _green_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _green_cy as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _green_py as _impl

        BACKEND = "python"

from . import _green_py as pure_backend  # noqa: E402  (always importable)


def green_entries(xi, t, a, kappa2, impl=None):
    """Entries of the 2x2 linear solution matrix at time ``t``.

    Parameters
    ----------
    xi : array_like
        Wavenumber magnitudes, any shape, must be >= 0.
    t : float
        Time, >= 0.
    a, kappa2 : float
        Damping coefficient and acoustic speed, both > 0.
    impl : module, optional
        Kernel backend override (used by tests and the benchmark).

    Returns
    -------
    (g11, g12, g21, g22) : tuple of ndarray
        Float64 arrays with the shape of ``xi``.
    """
    if not (t >= 0.0 and np.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t}")
    if not (a > 0.0 and kappa2 > 0.0):
        raise ValueError("a and kappa2 must be positive")
    mod = _impl if impl is None else impl
    arr = np.ascontiguousarray(xi, dtype=np.float64)
    flat = arr.reshape(-1)
    out = mod.green_entries_flat(flat, float(t), float(a), float(kappa2))
    return tuple(g.reshape(arr.shape) for g in out)
