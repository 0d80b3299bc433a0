"""
Contour-integral evaluation of the Mittag-Leffler-type families.

For ML2 the function is

    E_{a,b}(z) = 1/(2 pi i) * int_L Gamma(s) Gamma(1 - s) / Gamma(b - a s) * (-z)^(-s) ds

where L is a left loop (hairpin): it runs from -X - i phi rightward to
c - i phi, up to c + i phi, then leftward to -X + i phi.  The poles of
Gamma(s) at 0, -1, -2, ... are inside the loop and their residues rebuild
the power series; the poles of Gamma(1 - s) at 1, 2, ... stay outside.

ML3 replaces Gamma(1 - s) by Gamma(g - s)/Gamma(g), ML4 and Wright use two
reciprocal Gamma factors.  The Le Roy function has no such left-loop form;
it is written as

    F(z) = 1/Gamma(b)^g + 1/(2 pi i) * int Gamma(-s) Gamma(1 + s) / Gamma(b + a s)^g * (-z)^s ds

over a clockwise right loop crossing the real axis at c in (0, 1), which
encloses the poles at s = 1, 2, ...  The k = 0 term is added separately.

Gamma(s) Gamma(1 - s) is always evaluated as pi / sin(pi s), and every
other factor is carried in log form so that |z|^x and 1/Gamma(...) never
overflow separately on long legs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deriv import deriv_coefficient
from .errors import BranchError, DomainError, PoleError
from .gamma import LogComplex, log_gamma, log_psi_over_gamma, log_recip_gamma
from .quadrature import integrate
from .reports import AuditReport, fmt
from .series import ML2, ML3, ML4, Evaluation, LeRoy, ParameterSet, Wright, coefficient

INTEGER_POLE_TOL = 1e-12
X_MAX_CAP = 400.0
_PROBE_RUN = 5
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ContourSpec:
    """Hairpin contour: crossing point ``c``, half-width ``phi``, leg length ``x_max``.

    ``x_max=None`` picks the leg length from the decay of the integrand.
    """

    c: float = 0.5
    phi: float = 1.0
    x_max: float | None = None
    quad_tol: float = 1e-10
    max_nodes: int = 200_000

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise DomainError(f"contour crossing c must lie in (0, 1), got {self.c}")
        if not self.phi > 0:
            raise DomainError(f"contour half-width phi must be positive, got {self.phi}")
        if self.x_max is not None and not self.x_max > self.c:
            raise DomainError(f"x_max must exceed c, got {self.x_max}")
        if not self.quad_tol > 0:
            raise DomainError("quad_tol must be positive")
        if self.max_nodes < 15:
            raise DomainError("max_nodes must be at least 15")


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real < 0:
        raise BranchError(f"z={z} lies on the negative real axis (|arg z| = pi)")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("z must be finite")
    return z


def _log_reflection(s) -> LogComplex:
    """pi / sin(pi s) in log form."""
    return LogComplex.from_complex(np.pi / np.sin(np.pi * s))


def _check_integer_distance(s, what="Gamma(s) Gamma(1 - s)"):
    d = np.abs(s - np.round(s.real))
    if np.any(d < INTEGER_POLE_TOL):
        raise PoleError(f"{what} has a pole at s={complex(s[d < INTEGER_POLE_TOL][0])}")


def _log_power(s, log_mz: complex, sign: int) -> LogComplex:
    """(-z)^(sign * s) in log form with the principal log of -z."""
    e = sign * s * log_mz
    return LogComplex(e.real, e.imag)


def _integrand_log(params: ParameterSet, s: np.ndarray, log_mz: complex, target: str | None = None) -> LogComplex:
    """Integrand in log form (no pole checks)."""
    if isinstance(params, Wright):
        params = params.as_ml4()

    if isinstance(params, LeRoy):
        w = params.beta + params.alpha * s
        return _log_reflection(s) * LogComplex(0.0, np.pi) * log_recip_gamma(w) ** params.gamma * _log_power(
            s, log_mz, 1
        )

    base = _log_reflection(s) * _log_power(s, log_mz, -1)
    if isinstance(params, ML2):
        w = params.beta - params.alpha * s
        if target is None:
            return base * log_recip_gamma(w)
        pog = log_psi_over_gamma(w)
        if target == "alpha":
            return base * pog * LogComplex.from_complex(s)
        return base * pog * LogComplex(0.0, np.pi)
    if isinstance(params, ML3):
        lg = log_gamma(params.gamma - s) - log_gamma(1.0 - s) - log_gamma(params.gamma)
        return base * LogComplex(lg.real, lg.imag) * log_recip_gamma(params.beta - params.alpha * s)
    if isinstance(params, ML4):
        return (
            base
            * log_recip_gamma(params.beta1 - params.alpha1 * s)
            * log_recip_gamma(params.beta2 - params.alpha2 * s)
        )
    raise DomainError(f"no contour integral for {type(params).__name__}")


def mb_integrand(params: ParameterSet, s, z: complex, target: str | None = None):
    """Integrand of the contour representation at ``s`` (scalar or array).

    ``target`` selects the ML2 parameter-derivative integrand ('alpha' adds
    the factor s psi(b - a s), 'beta' the factor -psi(b - a s)).

    >>> v = mb_integrand(ML2(1, 1), 0.5, 1j)
    >>> abs(v - math.sqrt(math.pi) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))) < 1e-14
    True
    """
    z = _check_z(z)
    if z == 0:
        raise DomainError("the contour integrand is undefined at z = 0")
    if target is not None and not isinstance(params, ML2):
        raise DomainError("contour derivatives are available for ml2 only")
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    _check_integer_distance(s)
    if isinstance(params, ML3):
        g = params.gamma - s
        near = (np.abs(g - np.round(g.real)) < INTEGER_POLE_TOL) & (np.round(g.real) <= 0)
        if np.any(near):
            raise PoleError(f"Gamma(gamma - s) has a pole at s={complex(s[near][0])}")
    out = _integrand_log(params, s, np.log(-z), target).to_complex()
    return complex(out[0]) if scalar else out


def _crossing(params: ParameterSet, contour: ContourSpec) -> float:
    """Crossing point actually used; moved left for ML3 when Re(gamma) <= c."""
    if isinstance(params, ML3):
        g = params.gamma
        if g.real <= contour.c and abs(g.imag) <= contour.phi:
            if g.real > 0:
                return 0.5 * g.real
            raise DomainError(
                f"the poles of Gamma(gamma - s) for gamma={g} cannot be kept outside the loop;"
                " use |Im gamma| > phi or the series pathway"
            )
    if isinstance(params, LeRoy):
        a = params.alpha
        if a.imag != 0 or not a.real > 0:
            raise DomainError("the Le Roy contour integral needs a real alpha > 0")
        if not params.beta.real + a.real * contour.c > 0:
            raise DomainError("the Le Roy contour integral needs Re(beta) + alpha*c > 0")
    return contour.c


def _leg_length(f_leg, sigma: int, c: float, contour: ContourSpec) -> tuple[float, float, bool]:
    """Distance along the legs, tail estimate, and whether the decay rule was met."""
    xs = np.arange(1.0, X_MAX_CAP + 1.0)
    if sigma < 0:
        ds = xs + c
    else:
        ds = np.maximum(xs - c, 0.0)
    mags = np.abs(f_leg(ds, 1)) + np.abs(f_leg(ds, -1))
    mags = np.where(np.isfinite(mags), mags, np.inf)
    if contour.x_max is not None:
        d_end = contour.x_max + c if sigma < 0 else contour.x_max - c
        tail = float(np.sum(mags[ds > d_end]))
        return d_end, tail, tail < contour.quad_tol
    small = mags < contour.quad_tol * 1e-3
    run = 0
    for i, ok in enumerate(small):
        run = run + 1 if ok else 0
        if run >= _PROBE_RUN:
            return float(ds[i]), float(np.sum(mags[i:])), True
    return float(ds[-1]), float(mags[-1]), False


def _contour_integral(params: ParameterSet, z: complex, contour: ContourSpec, target: str | None, method: str):
    log_mz = np.log(-z)
    c = _crossing(params, contour)
    phi = contour.phi
    sigma = 1 if isinstance(params, LeRoy) else -1

    def f(s):
        return _integrand_log(params, s, log_mz, target).to_complex()

    def f_leg(d, side):
        with np.errstate(all="ignore"):
            return f(c + sigma * d + side * 1j * phi)

    d_end, tail, decayed = _leg_length(f_leg, sigma, c, contour)
    tol = contour.quad_tol / 3.0
    budget = contour.max_nodes // 3
    panels = max(1, int(math.ceil(d_end)))
    legs = [
        integrate(lambda d: f_leg(d, 1), 0.0, d_end, tol, budget, panels),
        integrate(lambda d: f_leg(d, -1), 0.0, d_end, tol, budget, panels),
        integrate(lambda t: f(c + 1j * t), -phi, phi, tol, budget, 2),
    ]
    total = sigma * (legs[0].value - legs[1].value) + 1j * legs[2].value
    value = total / (2j * math.pi)
    if isinstance(params, LeRoy):
        value += coefficient(params, 0)
    quad_err = sum(r.error for r in legs)
    rounding = 50.0 * _EPS * sum(r.abs_integral for r in legs)
    abs_err = (quad_err + tail + rounding) / (2.0 * math.pi)
    nodes = sum(r.nodes for r in legs)
    converged = decayed and all(r.ok for r in legs) and math.isfinite(abs(value))
    if params.is_real() and z.imag == 0 and z.real > 0:
        value = complex(value.real, 0.0)
    return Evaluation(complex(value), float(abs_err), int(nodes), method, bool(converged))


def mb_evaluate(params: ParameterSet, z: complex, contour: ContourSpec | None = None) -> Evaluation:
    """Evaluate the selected function at ``z`` by contour quadrature.

    ``terms_used`` of the result counts integrand evaluations.  When the
    node budget runs out or the legs never decay the result is returned
    with ``converged=False``.

    >>> ev = mb_evaluate(ML2(2, 1), 1.0)
    >>> round(ev.value.real, 10)
    1.5430806348
    """
    contour = contour or ContourSpec()
    z = _check_z(z)
    if z == 0:
        return Evaluation(coefficient(params, 0), 0.0, 0, "mellin-barnes", True)
    return _contour_integral(params, z, contour, None, "mellin-barnes")


def mb_param_derivative(params: ML2, target: str, z: complex, contour: ContourSpec | None = None) -> Evaluation:
    """d E_{a,b}(z) / d(target) by quadrature of the differentiated integrand.

    Only for real alpha > 0 and real beta >= 0.  Where b - a s hits a pole
    of Gamma the factor psi/Gamma is replaced by its finite limit, so no
    node ever needs to be moved.
    """
    if not isinstance(params, ML2):
        raise DomainError("contour derivatives are available for ml2 only")
    params.check_target(target)
    if params.alpha.imag != 0 or params.beta.imag != 0 or not params.alpha.real > 0 or params.beta.real < 0:
        raise DomainError("contour derivatives need real alpha > 0 and real beta >= 0")
    contour = contour or ContourSpec()
    z = _check_z(z)
    if z == 0:
        return Evaluation(deriv_coefficient(params, target, 0), 0.0, 0, "mellin-barnes", True)
    return _contour_integral(params, z, contour, target, "mellin-barnes")


def audit_integrand_decay(params: ML2, contour: ContourSpec, x_grid, z: complex = 1.0) -> AuditReport:
    """Check the integrand bounds on the rays s = -x +/- i phi.

    Two kinds of record:

    * ``reflection``: |Gamma(s) Gamma(1 - s)| <= pi / sinh(pi phi), with the
      product computed from two independent log-gamma evaluations (not the
      reflection formula).  Margin is the relative slack; a relative
      rounding allowance of 1e-12 is granted.
    * ``decay``: past the crossover (the last grid point where the majorant
      pi/sinh(pi phi) |z|^x e^{+-phi arg(-z)} / |Gamma(b + a x -+ i a phi)|
      increases), the majorant must decrease at every step and bound
      |integrand|.  Margin is log(majorant / |integrand|) at the worst point.
    """
    if not isinstance(params, ML2):
        raise DomainError("integrand decay audit is defined for ml2")
    x = np.asarray(x_grid, dtype=float)
    if x.size == 0:
        return AuditReport("integrand_decay")
    if np.any(x < 0) or np.any(np.diff(x) <= 0):
        raise DomainError("x_grid must be non-negative and increasing")
    phi = contour.phi
    bound = math.pi / math.sinh(math.pi * phi)
    report = AuditReport("integrand_decay")
    report.notes.append(f"phi={fmt(phi)} bound={fmt(bound)}")
    for side in (1, -1):
        s = -x + side * 1j * phi
        with np.errstate(all="ignore"):
            prod = np.exp((log_gamma(s) + log_gamma(1.0 - s)).real)
        for xi, p in zip(x, prod):
            report.add(f"reflection ray={'+' if side > 0 else '-'} x={fmt(xi)}", (bound - p) / bound + 1e-12)
    _add_decay_records(params, _check_z(z), phi, bound, x, report)
    return report


def _add_decay_records(params, z, phi, bound, x, report) -> None:
    log_mz = np.log(-z)
    for side in (1, -1):
        s = -x + side * 1j * phi
        with np.errstate(all="ignore"):
            f = np.abs(_integrand_log(params, s, log_mz).to_complex())
        logf = np.log(np.where(f > 0, f, np.nan))
        # |(-z)^(-s)| = |z|^x e^{side phi arg(-z)};  1/|Gamma(b - a s)|
        log_major = (
            math.log(bound)
            + x * math.log(abs(z))
            + side * phi * log_mz.imag
            - log_gamma(params.beta - params.alpha * s).real
        )
        rising = np.flatnonzero(np.diff(log_major) >= 0)
        start = int(rising[-1] + 1) if rising.size else 0
        tag = "+" if side > 0 else "-"
        if start >= x.size - 1:
            report.add(f"decay ray={tag} z={complex(z)} crossover=none", -1.0)
            continue
        gap = log_major[start:] - logf[start:]
        gap = np.where(np.isnan(gap), np.inf, gap)
        i = int(np.argmin(gap))
        report.add(
            f"decay ray={tag} z={complex(z)} crossover_x={fmt(x[start])} worst_x={fmt(x[start + i])}",
            float(gap[i]) + 1e-12,
        )
