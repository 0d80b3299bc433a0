"""
Gamma-function kernel: complex log-gamma, reciprocal gamma and digamma.

Every series coefficient in the package is assembled from the functions in
this module.  All of them accept scalars or numpy arrays and broadcast.

``log_gamma`` uses the branch of :math:`\\log\\Gamma` that is real on the
positive axis and continuous in the plane cut along the negative axis; it
satisfies ``log_gamma(z + 1) == log_gamma(z) + log(z)`` with the principal
logarithm everywhere in the cut plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, PoleError
from .reports import AuditReport, fmt

EULER_GAMMA = 0.5772156649015329

POLE_TOL = 1e-300

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2n} / (2n (2n - 1)), n = 1..8
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# B_{2n} / (2n), n = 1..5
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
)

_STIRLING_SHIFT = 10.0
_DIGAMMA_SHIFT = 20.0
_HARMONIC = [math.fsum(1.0 / j for j in range(1, n)) for n in range(1, 21)]


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as ``exp(log_mag + 1j * phase)``.

    The phase is accumulated, never reduced modulo 2*pi.  Zero is
    ``log_mag == -inf``.  Fields may be numpy arrays.
    """

    log_mag: float | np.ndarray
    phase: float | np.ndarray

    @classmethod
    def from_complex(cls, w) -> LogComplex:
        w = np.asarray(w, dtype=complex)
        with np.errstate(divide="ignore"):
            return cls(np.log(np.abs(w)), np.angle(w))

    def to_complex(self):
        with np.errstate(over="ignore", invalid="ignore"):
            mag = np.exp(self.log_mag)
            return mag * np.cos(self.phase) + 1j * (mag * np.sin(self.phase))

    def __mul__(self, other: LogComplex) -> LogComplex:
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    def __truediv__(self, other: LogComplex) -> LogComplex:
        return LogComplex(self.log_mag - other.log_mag, self.phase - other.phase)

    def __pow__(self, g: float) -> LogComplex:
        return LogComplex(g * self.log_mag, g * self.phase)

    def __getitem__(self, idx) -> LogComplex:
        return LogComplex(np.asarray(self.log_mag)[idx], np.asarray(self.phase)[idx])


def _prep(z):
    z = np.asarray(z, dtype=complex)
    return z.ndim == 0, np.atleast_1d(z)


def pole_mask(z) -> np.ndarray:
    """True where ``z`` is (within ``POLE_TOL``) a non-positive integer."""
    z = np.asarray(z, dtype=complex)
    re = z.real
    return (z.imag == 0) & (np.round(re) <= 0) & (np.abs(re - np.round(re)) < POLE_TOL)


def _check_poles(z, what):
    bad = pole_mask(z)
    if np.any(bad):
        raise PoleError(f"{what} has a pole at {complex(z[bad][0])}")


def _stirling(w):
    r = 1.0 / w
    r2 = r * r
    ser = np.full_like(w, _STIRLING_COEFFS[-1])
    for c in _STIRLING_COEFFS[-2::-1]:
        ser = ser * r2 + c
    return (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + ser * r


def _lift(z, target, step):
    """Shift ``z`` right by integers until Re >= target; accumulate ``step``."""
    shift = np.maximum(0.0, np.ceil(target - z.real)).astype(np.int64)
    acc = np.zeros_like(z)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        acc[m] += step(z[m] + j)
    return z + shift, acc


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Real positive arguments go through ``scipy.special.gammaln``; everything
    else is lifted to Re z >= 10 with the recurrence and finished with the
    Stirling series through the B_16 term.
    """
    scalar, z = _prep(z)
    _check_poles(z, "log_gamma")
    out = np.empty_like(z)
    real_pos = (z.imag == 0) & (z.real > 0)
    out[real_pos] = special.gammaln(z.real[real_pos])
    rest = ~real_pos
    if rest.any():
        w, acc = _lift(z[rest], _STIRLING_SHIFT, np.log)
        out[rest] = _stirling(w) - acc
    return out[0] if scalar else out


def recip_gamma(z):
    """1/Gamma(z); an entire function, exactly zero at 0, -1, -2, ..."""
    scalar, z = _prep(z)
    out = np.zeros_like(z)
    ok = ~pole_mask(z)
    if ok.any():
        zz = z[ok]
        with np.errstate(over="ignore", under="ignore"):
            v = np.exp(-log_gamma(zz))
        v = np.where(zz.imag == 0, v.real + 0j, v)
        out[ok] = v
    return out[0] if scalar else out


def digamma_asymptotic(z):
    """ln z - 1/(2z) - sum_{n<=5} B_2n / (2n z^2n), with no recurrence lift.

    Only meaningful for large |z| away from the negative real axis.
    """
    scalar, z = _prep(z)
    r2 = 1.0 / (z * z)
    ser = np.full_like(z, _DIGAMMA_COEFFS[-1])
    for c in _DIGAMMA_COEFFS[-2::-1]:
        ser = ser * r2 + c
    out = np.log(z) - 0.5 / z - ser * r2
    return out[0] if scalar else out


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z).

    Lifts with psi(z) = psi(z+1) - 1/z until Re z >= 20, then applies the
    Bernoulli asymptotic series truncated after the B_10 term.  Positive
    integers below 20 use -gamma + H_{n-1} directly.
    """
    scalar, z = _prep(z)
    _check_poles(z, "digamma")
    w, acc = _lift(z, _DIGAMMA_SHIFT, np.reciprocal)
    out = digamma_asymptotic(w) - acc
    out = np.where(z.imag == 0, out.real + 0j, out)
    small_int = (z.imag == 0) & (z.real >= 1) & (z.real < _DIGAMMA_SHIFT) & (z.real == np.round(z.real))
    for i in np.flatnonzero(small_int):
        out[i] = _HARMONIC[int(z.real[i]) - 1] - EULER_GAMMA
    return out[0] if scalar else out


def _pole_order(z):
    return (-np.round(np.asarray(z, dtype=complex).real)).astype(np.int64)


def log_recip_gamma(z) -> LogComplex:
    """1/Gamma(z) in log form; log_mag is -inf at the poles of Gamma."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    lm = np.full(z.shape, -np.inf)
    ph = np.zeros(z.shape)
    ok = ~pole_mask(z)
    if ok.any():
        lg = log_gamma(z[ok])
        lm[ok] = -lg.real
        ph[ok] = -lg.imag
    return LogComplex(lm, ph)


def log_psi_over_gamma(z) -> LogComplex:
    """psi(z)/Gamma(z) in log form.

    The product is entire: at z = -n it equals (-1)^(n+1) n!, the value of
    -d/dz[1/Gamma] there, so poles are handled by that limit instead of
    raising.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    lm = np.empty(z.shape)
    ph = np.empty(z.shape)
    poles = pole_mask(z)
    if poles.any():
        n = _pole_order(z[poles])
        lm[poles] = special.gammaln(n + 1.0)
        ph[poles] = np.where(n % 2 == 0, np.pi, 0.0)
    ok = ~poles
    if ok.any():
        rest = LogComplex.from_complex(digamma(z[ok])) * log_recip_gamma(z[ok])
        lm[ok] = rest.log_mag
        ph[ok] = rest.phase
    return LogComplex(lm, ph)


def psi_over_gamma(z):
    """psi(z)/Gamma(z) as an ordinary complex value (finite at the poles)."""
    scalar = np.ndim(z) == 0
    out = log_psi_over_gamma(z).to_complex()
    return out[0] if scalar else out


def gamma_ratio_asymptotic(alpha: float, k: int) -> float:
    """Two-term expansion of Gamma(alpha (k+1)) / Gamma(alpha k).

    ``(alpha k)^alpha * (1 + alpha (alpha - 1) / (2 alpha k))``; for tail
    heuristics only.
    """
    ak = alpha * k
    if not ak >= 1:
        raise DomainError(f"gamma_ratio_asymptotic needs alpha*k >= 1, got {ak}")
    return ak**alpha * (1.0 + alpha * (alpha - 1.0) / (2.0 * ak))


def audit_digamma_bounds(x_grid) -> AuditReport:
    """Check the two-sided digamma bounds on a grid of positive reals.

    For every x > 0::

        ln(x + 1/2) <= psi(x + 1) <= ln(x + exp(-gamma))

    and for x >= 1 additionally::

        psi(x + 1) <= ln(x + exp(1 - gamma) - 1)

    The margin is the smaller gap to either bound (absolute, in units of psi).
    The x >= 1 upper bound is attained at x = 1, so a point passes when its
    margin is above -4 ulp of psi.
    """
    x = np.asarray(x_grid, dtype=float)
    if x.size and not np.all(x > 0):
        raise DomainError("digamma bound audit needs a positive grid")
    report = AuditReport("digamma_bounds")
    if x.size == 0:
        return report
    psi = digamma(x + 1.0).real
    lower = np.log(x + 0.5)
    upper_all = np.log(x + math.exp(-EULER_GAMMA))
    upper_ge1 = np.log(x + math.exp(1.0 - EULER_GAMMA) - 1.0)
    slack = 4.0 * np.spacing(np.maximum(np.abs(psi), 1.0))
    for xi, p, lo, up, up1, sl in zip(x, psi, lower, upper_all, upper_ge1, slack):
        m = min(p - lo, up - p)
        report.add(f"eq=all-x x={fmt(xi)}", m, m >= -sl)
        if xi >= 1:
            m = min(p - lo, up1 - p)
            report.add(f"eq=x>=1 x={fmt(xi)}", m, m >= -sl)
    skipped = int(np.sum(x < 1))
    if skipped:
        report.notes.append(f"x>=1 bound skipped at {skipped} grid points below 1")
    return report
