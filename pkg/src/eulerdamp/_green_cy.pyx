# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Green-function entry kernel.

Semantics are identical to `_green_py.green_entries_flat`; the per-element
branch on the eigenvalue regime runs in a single pass instead of three
masked numpy passes, which pays off for the many small arrays the radial
quadrature feeds through here.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, sin, sqrt

cnp.import_array()

cdef double W_SWITCH = 1e-4


def green_entries_flat(double[::1] xi, double t, double a, double kappa2):
    """Entries (g11, g12, g21, g22) for a flat float64 array of |xi|."""
    cdef Py_ssize_t n = xi.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g11 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g12 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g21 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g22 = np.empty(n)
    cdef double[::1] v11 = g11
    cdef double[::1] v12 = g12
    cdef double[::1] v21 = g21
    cdef double[::1] v22 = g22

    cdef double mu = -0.5 * a
    cdef double emu = exp(mu * t)
    cdef double q, h2, w, h, b, bt, ea, eb
    cdef double cosh_s, sinc_s, half_sum, sinc_e, ph
    cdef Py_ssize_t i

    for i in range(n):
        q = kappa2 * xi[i]
        h2 = mu * mu - q * q
        w = h2 * t * t
        if fabs(w) < W_SWITCH:
            cosh_s = 1.0 + w * (1.0 / 2.0 + w * (1.0 / 24.0 + w * (1.0 / 720.0)))
            sinc_s = t * (1.0 + w * (1.0 / 6.0 + w * (1.0 / 120.0 + w * (1.0 / 5040.0))))
            v11[i] = emu * (cosh_s - mu * sinc_s)
            v22[i] = emu * (cosh_s + mu * sinc_s)
            ph = emu * sinc_s
        elif h2 > 0.0:
            h = sqrt(h2)
            ea = exp((mu + h) * t)
            eb = exp((mu - h) * t)
            half_sum = 0.5 * (ea + eb)
            sinc_e = (ea - eb) / (2.0 * h)
            v11[i] = half_sum - mu * sinc_e
            v22[i] = half_sum + mu * sinc_e
            ph = sinc_e
        else:
            b = sqrt(-h2)
            bt = b * t
            sinc_e = emu * sin(bt) / b
            half_sum = emu * cos(bt)
            v11[i] = half_sum - mu * sinc_e
            v22[i] = half_sum + mu * sinc_e
            ph = sinc_e
        v12[i] = -q * ph
        v21[i] = q * ph

    return g11, g12, g21, g22
