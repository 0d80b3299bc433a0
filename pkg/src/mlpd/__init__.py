"""Mittag-Leffler-type functions and their derivatives with respect to parameters."""

from .deriv import (
    audit_uniform_majorant,
    deriv_coefficient,
    digamma_shift_difference,
    evaluate_param_derivative,
    log_deriv_coefficients,
    majorant_threshold,
)
from .errors import BranchError, ConfigError, DomainError, MLPDError, NotConverged, PoleError
from .gamma import (
    EULER_GAMMA,
    LogComplex,
    audit_digamma_bounds,
    digamma,
    digamma_asymptotic,
    gamma_ratio_asymptotic,
    log_gamma,
    psi_over_gamma,
    recip_gamma,
)
from .mellin_barnes import ContourSpec, audit_integrand_decay, mb_evaluate, mb_integrand, mb_param_derivative
from .reports import AuditRecord, AuditReport
from .series import (
    FAMILIES,
    ML2,
    ML3,
    ML4,
    Evaluation,
    LeRoy,
    ParameterSet,
    TruncationPolicy,
    Wright,
    coefficient,
    evaluate_series,
    growth_exponent,
    increasing_from,
    make_params,
    radius_probe,
)
from .validation import (
    AuditBundle,
    AuditConfig,
    ComparisonReport,
    EvalRequest,
    central_fd,
    cauchy_riemann_residual,
    compare_methods,
    observed_order,
    run_full_audit,
)

__version__ = "0.1.0"
