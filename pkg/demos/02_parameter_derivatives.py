"""
Derivatives with respect to the parameters
==========================================

Differentiating a coefficient 1/Gamma(alpha k + beta) in alpha or beta brings
down a digamma factor.  psi/Gamma is entire, so poles of Gamma in the
coefficients need no special casing.
"""

from mlpd import EULER_GAMMA, ML2, ML3, Wright, central_fd, evaluate_param_derivative

# at z = 0 only the constant term survives: d/dbeta 1/Gamma(beta) at beta = 1 is gamma
print("dE/dbeta at z=0:", evaluate_param_derivative(ML2(1, 1), "beta", 0).value, " Euler gamma:", EULER_GAMMA)

# Wright with alpha = 0: every coefficient has psi(1), so the sum is e^z times gamma
print("Wright(0,1) d/dbeta at z=1:", evaluate_param_derivative(Wright(0, 1), "beta", 1.0).value)

#%% every target against a central difference
p, z = ML3(0.9, 1.1, 2.0), 0.4 + 0.2j
for target in p.targets:
    a = evaluate_param_derivative(p, target, z).value
    d = central_fd(p, target, z, 1e-5)
    print(f"{target:6s} analytic {a:.12g}   fd {d:.12g}   gap {abs(a - d):.1e}")

#%% complex beta: the difference quotient is the same along 1 and i
from mlpd import cauchy_riemann_residual

print("Cauchy-Riemann residual:", cauchy_riemann_residual(ML2(0.8, 1.1 + 0.4j), "beta", 1.2 - 0.7j))
