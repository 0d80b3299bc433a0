"""
Bound audits
============

The audits check, point by point, the inequalities the evaluation routines
lean on: digamma bounds, a uniform majorant for the alpha-derivative terms,
decay of the contour integrand, and growth of the coefficient ratios.
"""

from mlpd import AuditConfig, run_full_audit

bundle = run_full_audit(AuditConfig.for_suite("default", seed=42))
for r in bundle.reports:
    worst = min(x.margin for x in r.records)
    print(f"{r.name:18s} {len(r.records):5d} records  smallest margin {worst:.3g}  {'pass' if r.passed else 'FAIL'}")

#%% the 1e6 ratio threshold is not reached for alpha = 1/2
# the ratio |a_k/a_{k+1}| grows like (alpha k)^alpha, about 70 at k = 1e4
t = run_full_audit(AuditConfig(audits=("radius_threshold",)))
for rec in t.reports[0].records[:4]:
    print(rec.line())
