"""Euler chain of the unit OU diffusion, discretized to a finite surrogate.

X' = (1 - delta) X + sqrt(delta) xi is an AR(1) chain with stationary
variance 1/(2 - delta).  Its truncated-grid surrogate reproduces that
variance; a long Monte Carlo run of the continuum chain agrees.
"""

import numpy as np

from driftlab.demos import ou_euler_maruyama_spec, ou_step_factory
from driftlab.ergodicity import chain_moment, discretize_multiplicative, stationary_distribution
from driftlab.linalg import RngStream

delta = 0.1
target = 1.0 / (2.0 - delta)

chain = discretize_multiplicative(ou_euler_maruyama_spec(delta=delta))
pi = stationary_distribution(chain)
grid_var = chain_moment(chain, pi, power=2.0, center=True)
print(f"grid stationary variance: {grid_var:.5f}  target 1/(2-delta) = {target:.5f}")

step = ou_step_factory(delta=delta)
rng = RngStream(401, 1)
x = np.zeros(1)
for n in range(2000):
    x = step(n, x, rng)
draws = np.empty(50000)
for i in range(draws.size):
    x = step(2000 + i, x, rng)
    draws[i] = x[0]
print(f"Monte Carlo variance:     {np.var(draws):.5f}  ({draws.size} post-burn-in samples)")
