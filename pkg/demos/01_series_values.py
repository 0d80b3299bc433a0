"""
Evaluating the five families by power series
============================================

Each family is a power series sum_k a_k z^k whose coefficients are ratios of
gamma functions.  The coefficients are kept as (log|a_k|, arg a_k) so that
huge factorials never overflow before the z^k factor brings them back down.
"""

import cmath
import math

from mlpd import ML2, ML3, ML4, LeRoy, Wright, evaluate_series

# two classical special cases
print("E_{1,1}(1)  ", evaluate_series(ML2(1, 1), 1.0).value, "vs e =", math.e)
print("E_{2,1}(4)  ", evaluate_series(ML2(2, 1), 4.0).value, "vs cosh 2 =", math.cosh(2))

# a genuinely fractional one, off the real axis
ev = evaluate_series(ML2(0.8, 1.2), 0.5 + 0.5j)
print("E_{0.8,1.2}(0.5+0.5i) =", ev.value, " est. error", ev.abs_err_est, " terms", ev.terms_used)

#%% the other families at the same point
z = 0.7 - 0.3j
for p in (ML3(0.8, 1.2, 1.7), ML4(0.8, 1.2, 1.3, 0.4), Wright(0.5, 1), LeRoy(1, 1, 2)):
    ev = evaluate_series(p, z)
    print(f"{p.family:7s} {ev.value:.15g}  err<={ev.abs_err_est:.1e}")

#%% Le Roy with gamma = 2 at z = 1 is sum 1/(k!)^2 = I_0(2)
print("LeRoy(1,1,2)(1) =", evaluate_series(LeRoy(1, 1, 2), 1.0).value.real)

#%% cancellation is reported, not hidden
# at |z| = 100 on the far side of the plane the terms reach ~1e42 while the
# sum is ~e^{-80}; the result comes back flagged as not converged
ev = evaluate_series(ML2(1, 1), 100 * cmath.exp(2.5j))
print("E_{1,1}(100 e^{2.5i}): converged =", ev.converged, " est. error", f"{ev.abs_err_est:.1e}")
