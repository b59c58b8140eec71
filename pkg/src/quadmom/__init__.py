"""quadmom: momentum methods on quadratics, solved in polynomial space.

Gradient descent, the Chebyshev semi-iterative method, second-order
Richardson (heavy ball), and the Nesterov scheme all contract each Hessian
eigen-direction by a degree-k polynomial in mu = 1 - lambda/beta. This
package evaluates those polynomials in closed form and by recurrence,
computes their worst-case values and asymptotics, certifies per-eigenvalue
exponential decay rates (including the divergence window of the Nesterov
family at the edge of its design interval), runs the matching optimizers,
and reconciles the two views to rounding error.
"""

from .backend import HAVE_NUMBA, active_backend
from .chebnumbers import (
    ChebyshevNumber,
    TheoremReport,
    admissible_decay,
    asymptotic_cheb,
    cheb_number_closed,
    cheb_number_grid,
    check_ordering,
    compare_nonstrong,
    corollary_rate,
    grid_scan,
    log_cheb_number,
    param_effect,
    rate_certificate,
)
from .errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    IndefiniteError,
    IoError,
    MismatchError,
    NonFiniteError,
    NotSymmetricError,
    ParseError,
    QuadmomError,
    SpecError,
)
from .optimizers import (
    OptimizerState,
    Trajectory,
    consistency_check,
    make_optimizer,
    run,
    step,
    worst_case_probe,
)
from .params import (
    AccelParams,
    AngleKind,
    Regime,
    SpectralPoint,
    accel_params,
    classify,
    mu_from_hessian,
)
from .polynomials import (
    ACCELERATED,
    METHODS,
    Method,
    MethodPolynomial,
    as_method,
    aux_Q,
    chebyshev_C,
    eval_closed,
    eval_closed_log,
    eval_recurrence,
    gamma_schedule,
    recurrence_coefficients,
    recurrence_values,
    residual_from_aux,
)
from .problems import (
    QuadraticProblem,
    SpectrumKind,
    SpectrumSpec,
    descriptor,
    gen_spectrum,
    load_matrix,
    sqrt_factor,
)
from .risk import (
    RiskBreakdown,
    excess_risk_direct,
    expected_excess_risk_rate,
    reconstruct,
)
from .verification import SUITE_NAMES, merge_reports, run_all, run_suite

__version__ = "0.1.0"

__all__ = [
    "ACCELERATED",
    "AccelParams",
    "AngleKind",
    "ChebyshevNumber",
    "DegenerateError",
    "DimensionError",
    "DomainError",
    "HAVE_NUMBA",
    "IndefiniteError",
    "IoError",
    "METHODS",
    "Method",
    "MethodPolynomial",
    "MismatchError",
    "NonFiniteError",
    "NotSymmetricError",
    "OptimizerState",
    "ParseError",
    "QuadmomError",
    "QuadraticProblem",
    "Regime",
    "RiskBreakdown",
    "SUITE_NAMES",
    "SpecError",
    "SpectralPoint",
    "SpectrumKind",
    "SpectrumSpec",
    "TheoremReport",
    "Trajectory",
    "accel_params",
    "active_backend",
    "admissible_decay",
    "as_method",
    "asymptotic_cheb",
    "aux_Q",
    "cheb_number_closed",
    "cheb_number_grid",
    "chebyshev_C",
    "check_ordering",
    "classify",
    "compare_nonstrong",
    "consistency_check",
    "corollary_rate",
    "descriptor",
    "eval_closed",
    "eval_closed_log",
    "eval_recurrence",
    "excess_risk_direct",
    "expected_excess_risk_rate",
    "gamma_schedule",
    "gen_spectrum",
    "grid_scan",
    "load_matrix",
    "log_cheb_number",
    "make_optimizer",
    "merge_reports",
    "mu_from_hessian",
    "param_effect",
    "rate_certificate",
    "reconstruct",
    "recurrence_coefficients",
    "recurrence_values",
    "residual_from_aux",
    "run",
    "run_all",
    "run_suite",
    "sqrt_factor",
    "step",
    "worst_case_probe",
    "__version__",
]
