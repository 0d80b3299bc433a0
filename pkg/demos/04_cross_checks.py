"""
Comparing the two routes
========================

compare_methods evaluates each request both ways and checks the gap against
1e-8 plus ten times the two error estimates.  A request that one route
cannot handle becomes a failed report instead of stopping the batch.
"""

from mlpd import ML2, EvalRequest, compare_methods
from mlpd.validation import pathway_grid

reqs = [EvalRequest(ML2(1, 1), z) for z in (1j, 1 + 1j, 0.3, -2.0)]
for r in compare_methods(reqs):
    print(r.descriptor(), "pass" if r.passed else f"FAIL ({r.error})")

#%% the 30 point grid: values and both derivatives
reqs = []
for p, z in pathway_grid():
    reqs += [EvalRequest(p, z), EvalRequest(p, z, "alpha"), EvalRequest(p, z, "beta")]
reps = compare_methods(reqs)
print(sum(r.passed for r in reps), "of", len(reps), "agree;",
      "largest gap/budget", max(r.abs_diff / r.budget for r in reps))
