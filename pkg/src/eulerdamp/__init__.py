"""Pseudo-spectral laboratory for the damped compressible Euler system.

Simulates the perturbation form of 3D adiabatic flow through porous media
on a periodic box, provides the exact mode-wise linear solution operator,
and measures the algebraic decay exponents of the pressure and velocity.
"""

__version__ = "0.1.0"

from .diagnostics import (  # noqa: F401
    DecayFit,
    DiagnosticsRecord,
    apriori_check,
    entropy_bound_check,
    fit_decay,
    record,
    sobolev_ratio_report,
    state_h3_norm,
)
from .model import (  # noqa: F401
    PhysicalParams,
    PositivityError,
    StateField,
    compute_F,
    compute_G,
    derived_thermo,
    eos_density,
    from_physical_vars,
    to_physical_vars,
)
from .semigroup import (  # noqa: F401
    EigenPair,
    GaussianRadialProfile,
    GreenMatrix,
    critical_wavenumber,
    eigenvalues,
    green_hat,
    high_freq_bound,
    low_freq_approx,
    propagate_linear,
    whole_space_cross,
    whole_space_norm,
)
from .solver import (  # noqa: F401
    RunResult,
    SolverConfig,
    Stepper,
    cfl_limit,
    make_initial,
    rhs_nonlinear,
    run,
    step,
)
from .spectral import (  # noqa: F401
    FourierState,
    SpectralGrid,
    curl,
    div,
    grad,
    hodge_decompose,
    hodge_reconstruct,
    lambda_power,
    norms,
    omega_matrix,
)
