"""Halving chain with nonnegative noise: X' = X/2 + xi, E[xi] = 1.

The drift of V = |x| is -x/2 + 1, negative outside {x <= 4}, and the
ensemble mean settles at 2.  The running moment profile is estimated with
streaming (compensated) accumulation, never storing whole ensembles.
"""

from driftlab.demos import additive_demo
from driftlab.process import simulate_ensemble

model = additive_demo(noise_mean=1.0)
report = simulate_ensemble(model, [0.0], 200, 2000, 20250817, r_values=[1.0, 2.0])

for n in (0, 5, 20, 50, 200):
    print(f"n = {n:4d}  E[X_n] = {report.means[1.0][n]:.4f}"
          f"  (se {report.ses[1.0][n]:.4f})")
print(f"terminal mean {report.means[1.0][-1]:.4f}, limit 2.0")
print(f"sup_n E[X_n^2] estimate: {report.sup_estimates[2.0]:.4f}")
