"""Exact series, bispinor densities and the coupling-constant eigenvalue equation."""

from .terms import (
    LogPolySeries,
    Term,
    antiderivative,
    differentiate,
    eval_at_one,
    eval_numeric,
    series_add,
    series_mul,
)
from .series import (
    ExternalSolution,
    SolutionFamily,
    external_pair,
    external_solution,
    f_step,
    g_step,
    generate_family,
    normalized_product,
    product_density,
    system_residuals,
)
from .moments import (
    BetaResult,
    DampedMoment,
    damped_moment,
    euler_probe,
    gauss_flux,
    integrate_series_damped,
    solve_beta,
)
from .densities import (
    BispinorState,
    DensityTable,
    angular_reduce,
    bilinear_density,
    build_bispinor,
    invariants_I1_I2,
    spherical_harmonic,
)
from .eigen import (
    AlphaResult,
    EigenConfig,
    eq64_residual,
    lambda_exponent,
    refine_alpha,
    solve_alpha,
)
from .oracle import (
    Trajectory,
    compare_series_ode,
    continuity_check,
    fig1_data,
    integrate_ode,
    laplacian_ndim,
)

__version__ = "0.1.0"
