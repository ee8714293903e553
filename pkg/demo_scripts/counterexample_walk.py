"""A walk with negative drift everywhere outside {1} whose maximum explodes.

The walk decrements until it reaches 1, then restarts at n + 1.  Every
one-step drift outside the singleton is exactly -1, yet the running max is
unbounded: negative drift alone proves nothing without control of the
restart set.  verify_assumption flags exactly the failing condition.
"""

import numpy as np

from driftlab.demos import counterexample_demo
from driftlab.drift import verify_assumption
from driftlab.process import simulate_ensemble

model = counterexample_demo()
orbit = simulate_ensemble(model, [1.0], 10000, 1, 7, r_values=[1.0])
print(f"running max over 10^4 steps: {orbit.sup_estimates[1.0]:.0f}")

report = verify_assumption(
    model,
    states=[[1.0], [3.0], [5.0], [9.0], [17.0], [33.0]],
    p=4.0, s=0.0, times=(0, 10, 20, 30, 40, 50), samples=200, base_seed=11,
)
for name in ("a", "b", "c"):
    print(f"condition ({name}): {report.verdicts[name]}")
print(f"overall: {report.overall}   (the restart set is not uniformly bounded)")
print(f"conditional mean on the restart set climbs to {report.sup_condmean_on_d:.0f}")
