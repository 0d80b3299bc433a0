"""
Series for the derivatives of each family with respect to its parameters.

Term-by-term differentiation of the defining series gives, with
``w_k = alpha k + beta``:

* ML2:    d/dalpha -> -k psi(w_k)/Gamma(w_k),   d/dbeta -> -psi(w_k)/Gamma(w_k)
* ML3:    the same times (gamma)_k/k!, and d/dgamma ->
          (psi(gamma + k) - psi(gamma)) (gamma)_k / (k! Gamma(w_k))
* ML4:    -k psi(alpha_j k + beta_j) / (Gamma_1 Gamma_2) and -psi(...)/(...)
* Wright: ML4 with (alpha2, beta2) = (1, 1)
* LeRoy:  -gamma k psi(w_k)/Gamma(w_k)^gamma, -gamma psi(w_k)/Gamma(w_k)^gamma,
          and d/dgamma -> -log Gamma(w_k) / Gamma(w_k)^gamma

The alpha-derivative series start at k = 1 (their k = 0 coefficient is
exactly zero).  Every beta- and gamma-derivative series starts at k = 0,
including both LeRoy ones; dropping the k = 0 term there is caught at once
by the finite-difference oracle in :mod:`mlpd.validation`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .gamma import EULER_GAMMA, LogComplex, digamma, log_gamma, log_psi_over_gamma, log_recip_gamma
from .reports import AuditReport, fmt
from .series import (
    ML2,
    ML3,
    ML4,
    Evaluation,
    LeRoy,
    ParameterSet,
    TruncationPolicy,
    Wright,
    sum_log_series,
)

TARGETS = ("alpha", "beta", "gamma", "alpha1", "beta1", "alpha2", "beta2")

_MINUS = LogComplex(0.0, math.pi)

# below this k, psi(gamma + k) - psi(gamma) is summed as sum_j 1/(gamma + j)
_POCHHAMMER_DIRECT_K = 64


def _log_k(ks) -> LogComplex:
    with np.errstate(divide="ignore"):
        return LogComplex(np.log(np.asarray(ks, dtype=float)), np.zeros(np.shape(ks)))


def digamma_shift_difference(g: complex, ks) -> np.ndarray:
    """psi(g + k) - psi(g) for an array of non-negative integers k."""
    ks = np.asarray(ks)
    out = np.empty(ks.shape, dtype=complex)
    small = ks <= _POCHHAMMER_DIRECT_K
    if small.any():
        partial = np.concatenate(([0j], np.cumsum(1.0 / (g + np.arange(_POCHHAMMER_DIRECT_K)))))
        out[small] = partial[ks[small]]
    if (~small).any():
        out[~small] = digamma(g + ks[~small]) - digamma(g)
    return out


def _ml_pair(alpha, beta, ks, target_kind):
    """-(k) psi(w)/Gamma(w) in log form for one Gamma factor."""
    w = alpha * ks + beta
    base = log_psi_over_gamma(w) * _MINUS
    return base * _log_k(ks) if target_kind == "alpha" else base


def log_deriv_coefficients(params: ParameterSet, target: str, ks) -> LogComplex:
    """Derivative-series coefficients in log form for an array of k."""
    params.check_target(target)
    ks = np.atleast_1d(np.asarray(ks))

    if isinstance(params, Wright):
        return log_deriv_coefficients(params.as_ml4(), target + "1", ks)

    if isinstance(params, ML2):
        return _ml_pair(params.alpha, params.beta, ks, target)

    if isinstance(params, ML3):
        poch = params.log_pochhammer_ratio(ks)
        if target == "gamma":
            diff = LogComplex.from_complex(digamma_shift_difference(params.gamma, ks))
            return diff * poch * log_recip_gamma(params.alpha * ks + params.beta)
        return poch * _ml_pair(params.alpha, params.beta, ks, target)

    if isinstance(params, ML4):
        j = int(target[-1])
        a, b = params.pair(j)
        a_other, b_other = params.pair(3 - j)
        return _ml_pair(a, b, ks, target[:-1]) * log_recip_gamma(a_other * ks + b_other)

    if isinstance(params, LeRoy):
        w = params.arguments(ks)
        powered = log_recip_gamma(w) ** params.gamma
        if target == "gamma":
            return LogComplex.from_complex(log_gamma(w)) * powered * _MINUS
        scale = LogComplex(math.log(params.gamma), math.pi)
        out = LogComplex.from_complex(digamma(w)) * powered * scale
        return out * _log_k(ks) if target == "alpha" else out

    raise DomainError(f"no derivative series for {type(params).__name__}")


def deriv_coefficient(params: ParameterSet, target: str, k: int) -> complex:
    """k-th coefficient of the series for dF/d(target)."""
    if k < 0:
        raise DomainError("k must be non-negative")
    c = complex(log_deriv_coefficients(params, target, [k]).to_complex()[0])
    return complex(c.real, 0.0) if params.is_real() else c


def evaluate_param_derivative(
    params: ParameterSet,
    target: str,
    z: complex,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """dF/d(target) at ``z`` by summing the derivative series.

    >>> ev = evaluate_param_derivative(ML2(1, 1), "beta", 0)
    >>> round(ev.value.real, 12)
    0.577215664902
    """
    params.check_target(target)
    real = params.is_real() and complex(z).imag == 0
    return sum_log_series(lambda ks: log_deriv_coefficients(params, target, ks), z, policy, real=real)


def majorant_threshold(a: float, b: float, B: float) -> float:
    """k0 = max(2/a, (3 - B - e^(1-gamma))/b, 1) for the alpha-derivative majorant."""
    k1 = 2.0 / a
    k2 = (3.0 - B - math.exp(1.0 - EULER_GAMMA)) / b
    return max(k1, k2, 1.0)


def audit_uniform_majorant(
    alpha_range: tuple[float, float],
    beta_range: tuple[float, float],
    z: complex,
    k_range: tuple[int, int],
    n_grid: int = 5,
) -> AuditReport:
    """Audit the parameter-uniform majorant of the alpha-derivative series.

    For alpha in [a, b], beta in [0, B] and every k in ``k_range``::

        |k psi(alpha k + beta) z^k / Gamma(alpha k + beta)|
            <= k ln(b k + B + e^(1-gamma) - 2) |z|^k / Gamma(a k)

    One record per (alpha, beta) grid point; its margin is the smallest
    log(bound / term) over the k range.  The k range must start above the
    threshold returned by :func:`majorant_threshold`.
    """
    a, b = map(float, alpha_range)
    lo_beta, B = map(float, beta_range)
    if not (0 < a <= b) or lo_beta != 0 or not B > 0:
        raise DomainError("majorant audit needs 0 < a <= b and beta range [0, B] with B > 0")
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    k0 = majorant_threshold(a, b, B)
    if k_lo <= k0 or k_hi < k_lo:
        raise DomainError(f"k range must start above k0={k0:.6g}")

    ks = np.arange(k_lo, k_hi + 1, dtype=float)
    log_z = math.log(abs(complex(z))) if z != 0 else -math.inf
    rhs = (
        np.log(ks)
        + np.log(np.log(b * ks + B + math.exp(1.0 - EULER_GAMMA) - 2.0))
        - log_gamma(a * ks).real
        + ks * log_z
    )
    report = AuditReport("uniform_majorant")
    report.notes.append(f"k0={fmt(k0)}")
    grows = total = 0
    for alpha in np.unique(np.linspace(a, b, n_grid)):
        for beta in np.linspace(0.0, B, n_grid):
            w = alpha * ks + beta
            lhs = np.log(ks) + np.log(np.abs(digamma(w))) - log_gamma(w).real + ks * log_z
            gap = rhs - lhs
            i = int(np.argmin(gap))
            grows += bool(gap[-1] > gap[0])
            total += 1
            report.add(f"alpha={fmt(alpha)} beta={fmt(beta)} z={complex(z)} worst_k={int(ks[i])}", gap[i])
    # at the corner (a, 0) the ratio is ln(bk)/psi(ak), which falls towards 1
    report.notes.append(f"bound/term ratio larger at k={k_hi} than at k={k_lo} on {grows} of {total} grid points")
    return report
