"""
Power-series evaluation of the Mittag-Leffler-type families.

Five coefficient families are supported, each represented by a frozen
parameter dataclass:

=========  ==============================================  ===================
class      k-th coefficient                                domain
=========  ==============================================  ===================
ML2        1 / Gamma(a k + b)                              Re a > 0
ML3        (g)_k / (k! Gamma(a k + b))                     Re a > 0, g != 0,-1,..
ML4        1 / (Gamma(a1 k + b1) Gamma(a2 k + b2))         Re(a1 + a2) > 0
Wright     1 / (k! Gamma(a k + b))                         Re a > -1
LeRoy      1 / Gamma(a k + b)^g                            Re a > 0, g > 0 real
=========  ==============================================  ===================

Coefficients are built in log form (:class:`~mlpd.gamma.LogComplex`) so that
Gamma(a k + b) never overflows; terms are converted to ordinary complex
numbers one at a time and accumulated with ``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable, ClassVar

import numpy as np

from .errors import DomainError, NotConverged, PoleError
from .gamma import LogComplex, log_gamma, log_recip_gamma, pole_mask

TAIL_MODES = ("geometric-ratio", "last-term")
METHODS = ("series", "mellin-barnes", "finite-difference")

_EPS = np.finfo(float).eps
_LOG_MAX = math.log(np.finfo(float).max)


def _is_nonpositive_integer(w: complex) -> bool:
    return bool(pole_mask(w))


@dataclass(frozen=True)
class ParameterSet:
    """Common behaviour of the five parameter families."""

    family: ClassVar[str] = ""
    targets: ClassVar[tuple[str, ...]] = ()

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.type in ("complex", complex):
                v = complex(v)
                if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                    raise DomainError(f"{self.family}: {f.name} must be finite")
                object.__setattr__(self, f.name, v)
        self._validate()

    def _validate(self):  # pragma: no cover - overridden
        pass

    def replace(self, **changes) -> ParameterSet:
        return replace(self, **changes)

    def shifted(self, target: str, delta: complex) -> ParameterSet:
        """Copy with ``target`` moved by ``delta``; revalidates the domain."""
        self.check_target(target)
        return replace(self, **{target: getattr(self, target) + delta})

    def check_target(self, target: str) -> None:
        if target not in self.targets:
            raise DomainError(
                f"{target!r} is not a parameter of {self.family} (expected one of {', '.join(self.targets)})"
            )

    def as_dict(self) -> dict:
        return asdict(self)

    def is_real(self) -> bool:
        """True when every coefficient is real (so real z gives a real sum)."""
        return all(complex(getattr(self, f.name)).imag == 0 for f in fields(self))

    def log_coefficients(self, ks: np.ndarray) -> LogComplex:
        raise NotImplementedError


@dataclass(frozen=True)
class ML2(ParameterSet):
    alpha: complex
    beta: complex

    family: ClassVar[str] = "ml2"
    targets: ClassVar[tuple[str, ...]] = ("alpha", "beta")

    def _validate(self):
        if not self.alpha.real > 0:
            raise DomainError(f"ml2 needs Re(alpha) > 0, got alpha={self.alpha}")

    def log_coefficients(self, ks):
        return log_recip_gamma(self.alpha * ks + self.beta)


@dataclass(frozen=True)
class ML3(ParameterSet):
    """Prabhakar function parameters."""

    alpha: complex
    beta: complex
    gamma: complex

    family: ClassVar[str] = "ml3"
    targets: ClassVar[tuple[str, ...]] = ("alpha", "beta", "gamma")

    def _validate(self):
        if not self.alpha.real > 0:
            raise DomainError(f"ml3 needs Re(alpha) > 0, got alpha={self.alpha}")
        if _is_nonpositive_integer(self.gamma):
            raise DomainError(f"ml3 needs gamma not in {{0, -1, -2, ...}}, got gamma={self.gamma}")

    def log_pochhammer_ratio(self, ks) -> LogComplex:
        """(gamma)_k / k! in log form."""
        ks = np.asarray(ks)
        lp = (log_gamma(self.gamma + ks) - log_gamma(self.gamma)) - log_gamma(ks + 1.0)
        return LogComplex(lp.real, lp.imag)

    def log_coefficients(self, ks):
        return self.log_pochhammer_ratio(ks) * log_recip_gamma(self.alpha * ks + self.beta)


@dataclass(frozen=True)
class ML4(ParameterSet):
    alpha1: complex
    beta1: complex
    alpha2: complex
    beta2: complex

    family: ClassVar[str] = "ml4"
    targets: ClassVar[tuple[str, ...]] = ("alpha1", "beta1", "alpha2", "beta2")

    def _validate(self):
        if not (self.alpha1 + self.alpha2).real > 0:
            raise DomainError(
                f"ml4 needs Re(alpha1 + alpha2) > 0, got alpha1={self.alpha1}, alpha2={self.alpha2}"
            )

    def pair(self, j: int) -> tuple[complex, complex]:
        return (self.alpha1, self.beta1) if j == 1 else (self.alpha2, self.beta2)

    def log_coefficients(self, ks):
        return log_recip_gamma(self.alpha1 * ks + self.beta1) * log_recip_gamma(self.alpha2 * ks + self.beta2)


@dataclass(frozen=True)
class Wright(ParameterSet):
    alpha: complex
    beta: complex

    family: ClassVar[str] = "wright"
    targets: ClassVar[tuple[str, ...]] = ("alpha", "beta")

    def _validate(self):
        if not self.alpha.real > -1:
            raise DomainError(f"wright needs Re(alpha) > -1, got alpha={self.alpha}")

    def as_ml4(self) -> ML4:
        return ML4(self.alpha, self.beta, 1.0, 1.0)

    def log_coefficients(self, ks):
        return self.as_ml4().log_coefficients(ks)


@dataclass(frozen=True)
class LeRoy(ParameterSet):
    alpha: complex
    beta: complex
    gamma: float

    family: ClassVar[str] = "leroy"
    targets: ClassVar[tuple[str, ...]] = ("alpha", "beta", "gamma")

    def __post_init__(self):
        g = complex(self.gamma)
        if g.imag != 0:
            raise DomainError(f"leroy needs a real gamma, got {self.gamma}")
        object.__setattr__(self, "gamma", g.real)
        super().__post_init__()

    def _validate(self):
        if not self.alpha.real > 0:
            raise DomainError(f"leroy needs Re(alpha) > 0, got alpha={self.alpha}")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"leroy needs gamma > 0, got gamma={self.gamma}")

    def arguments(self, ks) -> np.ndarray:
        w = self.alpha * np.asarray(ks) + self.beta
        if np.any(pole_mask(w)):
            bad = np.asarray(ks)[pole_mask(w)][0]
            raise PoleError(f"leroy: Gamma(alpha*k + beta) has a pole at k={int(bad)}")
        return w

    def is_real(self) -> bool:
        # Gamma(a k + b) > 0 for every k only when b > 0
        return super().is_real() and self.beta.real > 0

    def log_coefficients(self, ks):
        return log_recip_gamma(self.arguments(ks)) ** self.gamma


FAMILIES: dict[str, type[ParameterSet]] = {c.family: c for c in (ML2, ML3, ML4, Wright, LeRoy)}


def make_params(family: str, **values) -> ParameterSet:
    """Build a parameter set from a family name and keyword values."""
    try:
        cls = FAMILIES[family.lower()]
    except KeyError:
        raise DomainError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}") from None
    names = [f.name for f in fields(cls)]
    missing = [n for n in names if values.get(n) is None]
    if missing:
        raise DomainError(f"{family} needs parameter(s): {', '.join(missing)}")
    return cls(**{n: values[n] for n in names})


@dataclass(frozen=True)
class TruncationPolicy:
    rel_tol: float = 1e-12
    max_terms: int = 100_000
    small_run: int = 3
    tail_mode: str = "geometric-ratio"

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1 or self.small_run < 1:
            raise DomainError("max_terms and small_run must be at least 1")
        if self.tail_mode not in TAIL_MODES:
            raise DomainError(f"tail_mode must be one of {TAIL_MODES}")


@dataclass(frozen=True)
class Evaluation:
    value: complex
    abs_err_est: float
    terms_used: int
    method: str
    converged: bool

    def check(self) -> Evaluation:
        if not self.converged:
            raise NotConverged(f"{self.method} evaluation did not converge", self)
        return self


def coefficient(params: ParameterSet, k: int) -> complex:
    """k-th Taylor coefficient of the family selected by ``params``."""
    if k < 0:
        raise DomainError("k must be non-negative")
    c = complex(params.log_coefficients(np.array([k])).to_complex()[0])
    return complex(c.real, 0.0) if params.is_real() else c


def sum_log_series(
    log_coef: Callable[[np.ndarray], LogComplex],
    z: complex,
    policy: TruncationPolicy | None = None,
    method: str = "series",
    real: bool = False,
) -> Evaluation:
    """Sum ``sum_k c_k z^k`` where ``log_coef(ks)`` returns the c_k in log form.

    Stops after ``policy.small_run`` consecutive terms that are both below
    ``rel_tol * |partial sum|`` and not growing.  The error estimate adds the
    tail bound selected by ``policy.tail_mode`` and a first-order bound on
    the rounding error of every term.
    """
    policy = policy or TruncationPolicy()
    z = complex(z)
    if z == 0:
        c0 = complex(log_coef(np.array([0])).to_complex()[0])
        return Evaluation(complex(c0.real, 0.0) if real else c0, 0.0, 1, method, True)

    lz = LogComplex.from_complex(z)
    lz_abs = abs(float(lz.log_mag)) + abs(float(lz.phase))
    re_parts: list[np.ndarray] = []
    im_parts: list[np.ndarray] = []
    rounding = 0.0
    s = 0j
    run = 0
    last_nz = prev_nz = 0.0
    stop = None
    overflow = False
    k0, chunk = 0, 16
    while k0 < policy.max_terms and stop is None:
        ks = np.arange(k0, min(k0 + chunk, policy.max_terms))
        c = log_coef(ks)
        lt = c * LogComplex(ks * lz.log_mag, ks * lz.phase)
        if np.any(lt.log_mag > _LOG_MAX):
            overflow = True
            break
        t = lt.to_complex()
        mags = np.abs(t)
        with np.errstate(invalid="ignore"):
            pieces = 8.0 + np.abs(np.where(np.isfinite(c.log_mag), c.log_mag, 0.0)) + np.abs(c.phase) + ks * lz_abs
        rel = pieces * _EPS
        n_used = len(ks)
        for i in range(len(ks)):
            s += t[i]
            m = mags[i]
            if m > 0:
                prev_nz, last_nz = last_nz, m
            growing = prev_nz > 0 and last_nz > prev_nz
            if m < policy.rel_tol * abs(s) and not growing:
                run += 1
            else:
                run = 0
            if run >= policy.small_run:
                stop = int(ks[i])
                n_used = i + 1
                break
        re_parts.append(t.real[:n_used])
        im_parts.append(t.imag[:n_used])
        rounding += float(np.dot(mags[:n_used], rel[:n_used]))
        k0 += chunk
        chunk = min(chunk * 2, 2048)

    if overflow:
        return Evaluation(complex(math.inf, 0.0), math.inf, k0, method, False)

    value = complex(
        math.fsum(np.concatenate(re_parts)),
        0.0 if real else math.fsum(np.concatenate(im_parts)),
    )
    n_terms = sum(len(p) for p in re_parts)
    if policy.tail_mode == "last-term":
        nxt = log_coef(np.array([n_terms])) * LogComplex(n_terms * lz.log_mag, n_terms * lz.phase)
        tail = float(np.exp(nxt.log_mag[0]))
    else:
        ratio = last_nz / prev_nz if prev_nz > 0 else 0.0
        tail = last_nz / (1.0 - min(ratio, 0.99))
    abs_err = tail + 2.0 * rounding
    converged = stop is not None and abs_err <= 10.0 * policy.rel_tol * max(abs(value), 1e-300)
    return Evaluation(value, float(abs_err), n_terms, method, bool(converged))


def evaluate_series(params: ParameterSet, z: complex, policy: TruncationPolicy | None = None) -> Evaluation:
    """Evaluate the selected function at ``z`` by its power series.

    Examples
    --------
    >>> ev = evaluate_series(ML2(1, 1), 1.0)
    >>> round(ev.value.real, 12)
    2.718281828459
    """
    real = params.is_real() and complex(z).imag == 0
    return sum_log_series(params.log_coefficients, z, policy, real=real)


def radius_probe(params: ParameterSet, derivative_target: str | None = None, k_max: int = 50) -> np.ndarray:
    """Ratios |a_k| / |a_{k+1}| for k = 1..k_max.

    With ``derivative_target`` the coefficients are those of the
    parameter-derivative series.  An entire series shows ratios that
    eventually increase without bound.
    """
    if k_max < 10:
        raise DomainError("radius_probe needs k_max >= 10")
    ks = np.arange(1, k_max + 2)
    if derivative_target is None:
        c = params.log_coefficients(ks)
    else:
        from .deriv import log_deriv_coefficients

        c = log_deriv_coefficients(params, derivative_target, ks)
    lm = np.asarray(c.log_mag, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        return np.exp(lm[:-1] - lm[1:])


def increasing_from(seq) -> int | None:
    """Smallest index from which ``seq`` is strictly increasing, or None."""
    seq = np.asarray(seq, dtype=float)
    if seq.size < 2:
        return 0 if seq.size else None
    ok = np.diff(seq) > 0
    if not ok[-1]:
        return None
    bad = np.flatnonzero(~ok)
    return int(bad[-1] + 1) if bad.size else 0


def growth_exponent(ratios) -> float:
    """Least-squares slope of log(ratio) against log(k) over the upper half."""
    ratios = np.asarray(ratios, dtype=float)
    ks = np.arange(1, ratios.size + 1)
    half = ratios.size // 2
    x, y = np.log(ks[half:]), np.log(ratios[half:])
    return float(np.polyfit(x, y, 1)[0])
