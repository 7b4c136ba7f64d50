"""Pure-numpy fallback for the Green-function entry kernel.

Evaluates the four entries of the mode-wise solution matrix of

    d/dt (p, v) = [[0, -kappa2*xi], [kappa2*xi, -a]] (p, v)

for an array of wavenumber magnitudes ``xi`` at a single time ``t``.
The quadratic lambda^2 + a*lambda + kappa2^2 xi^2 has roots

    lambda_pm = mu -/+ h,   mu = -a/2,   h = sqrt(a^2/4 - kappa2^2 xi^2),

and every entry is a combination of exp(mu t) with cosh(h t) and
sinh(h t)/h (trigonometric for h^2 < 0).  Three evaluation branches keep
all four entries accurate to ~1e-13 relative across the regimes:

* ``|h^2 t^2| < W_SWITCH``: both special functions by their even Taylor
  series in w = h^2 t^2 (covers t = 0 and the double-root wavenumber,
  where the naive divided difference loses every digit);
* overdamped (h^2 > 0): factored exponentials exp((mu +/- h) t), which
  never overflow since both rates are <= 0;
* underdamped (h^2 < 0): cos(b t) and sin(b t)/b with b = sqrt(-h^2),
  which keeps the output exactly real.

See `_green_cy.pyx` for the compiled twin with identical semantics.
"""

import numpy as np

# Switch to the series once the direct divided difference would lose more
# than ~4 digits: |exp(ht) - exp(-ht)| ~ 2|h|t = 2 sqrt(w).
W_SWITCH = 1e-4


def green_entries_flat(xi, t, a, kappa2):
    """Entries (g11, g12, g21, g22) for a flat float64 array of |xi|.

    Returns four float64 arrays of the same length.  Requires t >= 0,
    a > 0, kappa2 > 0 (not re-validated here; see `kernels.green_entries`).
    """
    xi = np.asarray(xi, dtype=np.float64)
    n = xi.shape[0]
    mu = -0.5 * a
    q = kappa2 * xi
    h2 = mu * mu - q * q
    w = h2 * (t * t)

    g11 = np.empty(n)
    g22 = np.empty(n)
    ph = np.empty(n)

    near = np.abs(w) < W_SWITCH
    if near.any():
        wn = w[near]
        emu = np.exp(mu * t)
        # cosh(ht) and sinh(ht)/h as even series in w = (ht)^2
        cosh_s = 1.0 + wn * (1.0 / 2.0 + wn * (1.0 / 24.0 + wn * (1.0 / 720.0)))
        sinc_s = t * (1.0 + wn * (1.0 / 6.0 + wn * (1.0 / 120.0 + wn * (1.0 / 5040.0))))
        g11[near] = emu * (cosh_s - mu * sinc_s)
        g22[near] = emu * (cosh_s + mu * sinc_s)
        ph[near] = emu * sinc_s

    over = (~near) & (h2 > 0.0)
    if over.any():
        h = np.sqrt(h2[over])
        ea = np.exp((mu + h) * t)  # slow root
        eb = np.exp((mu - h) * t)  # fast root
        half_sum = 0.5 * (ea + eb)
        sinc_e = (ea - eb) / (2.0 * h)
        g11[over] = half_sum - mu * sinc_e
        g22[over] = half_sum + mu * sinc_e
        ph[over] = sinc_e

    under = (~near) & (h2 < 0.0)
    if under.any():
        b = np.sqrt(-h2[under])
        emu = np.exp(mu * t)
        bt = b * t
        cos_b = np.cos(bt)
        sinc_b = np.sin(bt) / b
        g11[under] = emu * (cos_b - mu * sinc_b)
        g22[under] = emu * (cos_b + mu * sinc_b)
        ph[under] = emu * sinc_b

    g12 = -q * ph
    g21 = q * ph
    return g11, g12, g21, g22
