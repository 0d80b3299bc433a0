"""
Finite-difference oracle, cross-pathway comparison and the audit bundle.

Everything here is deterministic: random grids are drawn from
``numpy.random.default_rng(seed)`` and reports keep input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .deriv import audit_uniform_majorant, evaluate_param_derivative
from .errors import ConfigError, DomainError, MLPDError
from .gamma import audit_digamma_bounds
from .mellin_barnes import ContourSpec, audit_integrand_decay, mb_evaluate, mb_param_derivative
from .reports import AuditReport, fmt, fmt_complex
from .series import (
    ML2,
    ML3,
    ML4,
    Evaluation,
    LeRoy,
    ParameterSet,
    TruncationPolicy,
    Wright,
    evaluate_series,
    growth_exponent,
    increasing_from,
    radius_probe,
)

FD_STEP = 1e-5
RICHARDSON_STEP = 1e-3
FD_REL_TOL = 1e-6
CR_TOL = 1e-5
BUDGET_FLOOR = 1e-8

METHOD_ALIASES = {
    "series": "series",
    "mb": "mellin-barnes",
    "mellin-barnes": "mellin-barnes",
    "fd": "finite-difference",
    "finite-difference": "finite-difference",
}


def _tight(policy: TruncationPolicy | None) -> TruncationPolicy:
    policy = policy or TruncationPolicy()
    return TruncationPolicy(policy.rel_tol / 100.0, policy.max_terms, policy.small_run, policy.tail_mode)


def central_fd(
    params: ParameterSet,
    target: str,
    z: complex,
    h: float = FD_STEP,
    direction: complex = 1.0,
    policy: TruncationPolicy | None = None,
) -> complex:
    """[F(theta + h d) - F(theta - h d)] / (2 h) with d = ``direction``.

    The two function values come from the series at ``rel_tol / 100``.
    Raises DomainError when either stencil point leaves the family's
    domain.  For a complex direction the result is the derivative along
    that direction, i.e. ``direction * dF/dtheta`` for analytic F.
    """
    if not h > 0:
        raise DomainError("finite-difference step must be positive")
    params.check_target(target)
    tight = _tight(policy)
    plus = params.shifted(target, h * direction)
    minus = params.shifted(target, -h * direction)
    return (evaluate_series(plus, z, tight).value - evaluate_series(minus, z, tight).value) / (2.0 * h)


@dataclass(frozen=True)
class OrderCheck:
    h: float
    err_h: float
    err_half: float
    order: float


def observed_order(
    params: ParameterSet,
    target: str,
    z: complex,
    h: float = RICHARDSON_STEP,
    exact: complex | None = None,
) -> OrderCheck:
    """Observed convergence order of :func:`central_fd` from the pair (h, h/2).

    ``exact`` defaults to the analytic derivative series.  At h = 1e-5 the
    O(h^2) error is already at the rounding floor and the observed order is
    noise, so the default step is 1e-3.
    """
    if exact is None:
        exact = evaluate_param_derivative(params, target, z, _tight(None)).value
    e1 = abs(central_fd(params, target, z, h) - exact)
    e2 = abs(central_fd(params, target, z, h / 2.0) - exact)
    order = math.log2(e1 / e2) if e1 > 0 and e2 > 0 else math.nan
    return OrderCheck(h, e1, e2, order)


def cauchy_riemann_residual(params: ParameterSet, target: str, z: complex, h: float = FD_STEP) -> float:
    """Relative mismatch between the real- and imaginary-direction differences.

    For F analytic in the parameter, D_i F = i D_1 F.  The residual is
    ``|D_i F - i D_1 F| / max(|D_1 F|, 1e-300)``.
    """
    if isinstance(params, LeRoy) and target == "gamma":
        raise DomainError("the Le Roy exponent gamma is real; no Cauchy-Riemann check")
    d_re = central_fd(params, target, z, h, 1.0)
    d_im = central_fd(params, target, z, h, 1j)
    return abs(d_im - 1j * d_re) / max(abs(d_re), 1e-300)


def _fd_evaluation(params, target, z, h, policy) -> Evaluation:
    d1 = central_fd(params, target, z, h, policy=policy)
    d2 = central_fd(params, target, z, 2.0 * h, policy=policy)
    # Richardson: the O(h^2) error of d1 is about (d2 - d1) / 3
    return Evaluation(d1, abs(d2 - d1) / 3.0, 4, "finite-difference", True)


def evaluate_with(
    method: str,
    params: ParameterSet,
    z: complex,
    target: str | None = None,
    policy: TruncationPolicy | None = None,
    contour: ContourSpec | None = None,
    h: float = FD_STEP,
) -> Evaluation:
    """Evaluate F (or dF/d target) by the named pathway."""
    try:
        method = METHOD_ALIASES[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}; expected series, mb or fd") from None
    if method == "series":
        if target is None:
            return evaluate_series(params, z, policy)
        return evaluate_param_derivative(params, target, z, policy)
    if method == "mellin-barnes":
        if target is None:
            return mb_evaluate(params, z, contour)
        return mb_param_derivative(params, target, z, contour)
    if target is None:
        raise DomainError("the finite-difference pathway needs a derivative target")
    return _fd_evaluation(params, target, z, h, policy)


@dataclass(frozen=True)
class EvalRequest:
    params: ParameterSet
    z: complex
    target: str | None = None
    method_a: str = "series"
    method_b: str = "mellin-barnes"
    policy: TruncationPolicy | None = None
    contour: ContourSpec | None = None


@dataclass(frozen=True)
class ComparisonReport:
    family: str
    params: dict
    target: str | None
    z: complex
    method_a: str
    method_b: str
    value_a: complex
    value_b: complex
    abs_diff: float
    budget: float
    passed: bool
    error: str | None = None

    def descriptor(self) -> str:
        ps = " ".join(f"{k}={fmt_complex(v) if isinstance(v, complex) else fmt(v)}" for k, v in self.params.items())
        return f"family={self.family} {ps} target={self.target or '-'} z={fmt_complex(self.z)}"


def compare_one(req: EvalRequest) -> ComparisonReport:
    """Compare two pathways at one point; errors become a failed report."""
    nan = complex(math.nan, math.nan)
    common = dict(family=req.params.family, params=req.params.as_dict(), target=req.target, z=complex(req.z))
    method_a = METHOD_ALIASES.get(req.method_a, req.method_a)
    method_b = METHOD_ALIASES.get(req.method_b, req.method_b)
    try:
        a = evaluate_with(method_a, req.params, req.z, req.target, req.policy, req.contour)
        b = evaluate_with(method_b, req.params, req.z, req.target, req.policy, req.contour)
    except MLPDError as exc:
        return ComparisonReport(
            **common, method_a=method_a, method_b=method_b, value_a=nan, value_b=nan,
            abs_diff=math.inf, budget=BUDGET_FLOOR, passed=False, error=f"{type(exc).__name__}: {exc}",
        )
    diff = abs(a.value - b.value)
    budget = BUDGET_FLOOR + 10.0 * (a.abs_err_est + b.abs_err_est)
    error = None
    if not (a.converged and b.converged):
        error = "NotConverged: " + ", ".join(e.method for e in (a, b) if not e.converged)
    passed = bool(diff <= budget) and error is None
    return ComparisonReport(
        **common, method_a=method_a, method_b=method_b, value_a=a.value, value_b=b.value,
        abs_diff=float(diff), budget=float(budget), passed=passed, error=error,
    )


def compare_methods(points) -> list[ComparisonReport]:
    """One :class:`ComparisonReport` per request, in input order.

    The budget is 1e-8 + 10 (err_a + err_b).  A pathway that raises (branch
    cut, pole, bad domain) or does not converge yields a failed report; the
    batch is never aborted.
    """
    return [compare_one(p) for p in points]


# ---------------------------------------------------------------- grids


def pathway_grid() -> list[tuple[ML2, complex]]:
    """30 ML2 points: (alpha, beta) cycles through {0.6, 1, 1.7} x {0, 0.5, 1, 2.5},
    z walks the ring |z| = 0.8 at angles -pi + 2 pi (j + 1/2) / 30 (never on the cut)."""
    combos = [(a, b) for a in (0.6, 1.0, 1.7) for b in (0.0, 0.5, 1.0, 2.5)]
    out = []
    for j in range(30):
        a, b = combos[j % len(combos)]
        theta = -math.pi + 2.0 * math.pi * (j + 0.5) / 30.0
        out.append((ML2(a, b), 0.8 * complex(math.cos(theta), math.sin(theta))))
    return out


def random_point(family: str, rng: np.random.Generator, z_max: float = 3.0) -> tuple[ParameterSet, complex]:
    """An admissible random parameter set of ``family`` and a z with |z| <= z_max."""
    u = lambda lo, hi: float(rng.uniform(lo, hi))  # noqa: E731
    r = z_max * math.sqrt(rng.uniform())
    z = r * complex(math.cos(t := rng.uniform(-math.pi, math.pi)), math.sin(t))
    if family == "ml2":
        p = ML2(u(0.5, 2.0), u(0.3, 2.0))
    elif family == "ml3":
        p = ML3(u(0.5, 2.0), u(0.3, 2.0), u(0.3, 2.0))
    elif family == "ml4":
        p = ML4(u(0.5, 2.0), u(0.3, 2.0), u(0.5, 2.0), u(0.3, 2.0))
    elif family == "wright":
        p = Wright(u(-0.5, 2.0), u(0.3, 2.0))
    elif family == "leroy":
        p = LeRoy(u(0.5, 2.0), u(0.3, 2.0), u(0.5, 2.0))
    else:
        raise DomainError(f"unknown family {family!r}")
    return p, z


FAMILY_TARGETS = [(f, t) for f, cls in (
    ("ml2", ML2), ("ml3", ML3), ("ml4", ML4), ("wright", Wright), ("leroy", LeRoy)
) for t in cls.targets]


def radius_families(alpha: float) -> list[ParameterSet]:
    return [
        ML2(alpha, 0.7),
        ML3(alpha, 0.7, 1.3),
        ML4(alpha, 0.7, alpha, 1.2),
        Wright(alpha, 0.7),
        LeRoy(alpha, 0.7, 1.5),
    ]


# ---------------------------------------------------------------- audits


def _audit_digamma(cfg: AuditConfig, rng) -> AuditReport:
    return audit_digamma_bounds(np.logspace(-3, 3, cfg.digamma_points))


def _audit_majorant(cfg: AuditConfig, rng) -> AuditReport:
    a, b, B = cfg.majorant_box
    return audit_uniform_majorant((a, b), (0.0, B), cfg.majorant_z, cfg.majorant_k)


def _audit_decay(cfg: AuditConfig, rng) -> AuditReport:
    zs = [1.0 + 0j]
    for _ in range(cfg.decay_random_z):
        r = float(rng.uniform(0.2, 2.0))
        t = float(rng.uniform(-0.9, 0.9)) * math.pi
        zs.append(r * complex(math.cos(t), math.sin(t)))
    x = np.linspace(0.0, cfg.decay_x_max, int(cfg.decay_x_max * 2) + 1)
    report = AuditReport("integrand_decay")
    for phi in cfg.decay_phis:
        for z in zs:
            sub = audit_integrand_decay(ML2(1.0, 1.0), ContourSpec(phi=phi), x, z)
            report.records.extend(sub.records)
            report.notes.extend(n for n in sub.notes if n not in report.notes)
    return report


def _radius_records(report: AuditReport, k_max: int, threshold: float | None) -> None:
    for alpha in (0.5, 1.0, 2.0):
        for p in radius_families(alpha):
            for target in (None, *p.targets):
                ratios = radius_probe(p, target, k_max)
                start = increasing_from(ratios)
                desc = f"family={p.family} target={target or '-'} alpha={fmt(alpha)}"
                if threshold is None:
                    g = growth_exponent(ratios)
                    report.add(f"{desc} increasing_from_k={start + 1 if start is not None else 'never'}",
                               g, passed=start is not None and g > 0)
                else:
                    hit = np.flatnonzero(ratios > threshold)
                    where = f"k={int(hit[0]) + 1}" if hit.size else "never"
                    report.add(f"{desc} exceeds_at={where}", math.log10(float(np.max(ratios)) / threshold))


def _audit_radius(cfg: AuditConfig, rng) -> AuditReport:
    """Ratio |a_k|/|a_{k+1}| eventually increasing with a positive log-log slope."""
    report = AuditReport("radius_witness")
    report.notes.append(f"k_max={cfg.radius_k_max}; margin is the growth exponent of the ratio")
    _radius_records(report, cfg.radius_k_max, None)
    return report


def _audit_radius_threshold(cfg: AuditConfig, rng) -> AuditReport:
    """Ratio must pass ``radius_threshold`` within k <= radius_threshold_k; margin log10(max/threshold)."""
    report = AuditReport("radius_threshold")
    report.notes.append(f"threshold={fmt(cfg.radius_threshold)} k_max={cfg.radius_threshold_k}")
    _radius_records(report, cfg.radius_threshold_k, cfg.radius_threshold)
    return report


def _audit_pathways(cfg: AuditConfig, rng) -> AuditReport:
    report = AuditReport("pathway_equivalence")
    reqs = []
    for p, z in pathway_grid():
        reqs += [EvalRequest(p, z), EvalRequest(p, z, "alpha"), EvalRequest(p, z, "beta")]
    for rep in compare_methods(reqs):
        tag = f" error={rep.error}" if rep.error else ""
        report.add(rep.descriptor() + tag, rep.budget - rep.abs_diff, rep.passed)
    return report


def _audit_fd(cfg: AuditConfig, rng) -> AuditReport:
    """Analytic derivative vs central difference; margin is 1e-6 minus |gap| / max(1, |analytic|)."""
    report = AuditReport("fd_agreement")
    report.notes.append(f"h={fmt(FD_STEP)} tol={fmt(FD_REL_TOL)}")
    for family, target in FAMILY_TARGETS:
        for _ in range(cfg.fd_points):
            p, z = random_point(family, rng)
            a = evaluate_param_derivative(p, target, z, _tight(None)).value
            d = central_fd(p, target, z, FD_STEP)
            rel = abs(a - d) / max(abs(a), 1.0)
            desc = " ".join(f"{k}={fmt_complex(v) if isinstance(v, complex) else fmt(v)}" for k, v in p.as_dict().items())
            report.add(f"family={family} target={target} {desc} z={fmt_complex(z)}", FD_REL_TOL - rel)
    return report


AUDITS = {
    "digamma_bounds": _audit_digamma,
    "uniform_majorant": _audit_majorant,
    "integrand_decay": _audit_decay,
    "radius_witness": _audit_radius,
    "radius_threshold": _audit_radius_threshold,
    "pathway_equivalence": _audit_pathways,
    "fd_agreement": _audit_fd,
}

SUITES = {
    "default": ("digamma_bounds", "uniform_majorant", "integrand_decay", "radius_witness"),
    "full": tuple(AUDITS),
}


@dataclass(frozen=True)
class AuditConfig:
    audits: tuple[str, ...] = SUITES["default"]
    seed: int = 42
    digamma_points: int = 1000
    majorant_box: tuple[float, float, float] = (0.5, 2.0, 3.0)
    majorant_z: complex = 2.0 + 0j
    majorant_k: tuple[int, int] = (5, 200)
    decay_phis: tuple[float, ...] = (0.5, 1.0, 2.0)
    decay_x_max: float = 50.0
    decay_random_z: int = 4
    radius_k_max: int = 2000
    radius_threshold: float = 1e6
    radius_threshold_k: int = 10_000
    fd_points: int = 3

    def __post_init__(self):
        object.__setattr__(self, "audits", tuple(self.audits))
        unknown = [a for a in self.audits if a not in AUDITS]
        if unknown:
            raise ConfigError(f"unknown audit(s): {', '.join(unknown)}; known: {', '.join(AUDITS)}")

    @classmethod
    def for_suite(cls, suite: str, **overrides) -> AuditConfig:
        if suite in SUITES:
            return cls(audits=SUITES[suite], **overrides)
        names = tuple(n for n in suite.split(",") if n)
        return cls(audits=names, **overrides)


@dataclass
class AuditBundle:
    config: AuditConfig
    reports: list[AuditReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def lines(self) -> list[str]:
        out = [f"# audit bundle seed={self.config.seed} audits={','.join(self.config.audits) or '-'}"]
        for r in self.reports:
            out.append(f"# section {r.name} records={len(r.records)} pass={'yes' if r.passed else 'no'}")
            out.extend(f"# note {r.name}: {n}" for n in r.notes)
            out.extend(r.lines())
        out.append(f"# overall {'pass' if self.passed else 'FAIL'}")
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def run_full_audit(config: AuditConfig | None = None) -> AuditBundle:
    """Run the configured audits in order and collect their reports.

    >>> run_full_audit(AuditConfig(audits=())).passed
    True
    """
    config = config or AuditConfig()
    rng = np.random.default_rng(config.seed)
    bundle = AuditBundle(config)
    for name in config.audits:
        bundle.reports.append(AUDITS[name](config, rng))
    return bundle
