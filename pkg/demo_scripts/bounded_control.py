"""Stabilizing an orthogonal plant with a hard control budget.

The quarter-turn plant X' = A X + B u + xi is reachable in k = 2 steps.
The k-periodic policy saturates the anchor state so every physical control
stays inside ||u|| <= 0.5, yet the closed-loop second moment is bounded
while the open-loop one grows linearly at the noise-trace rate.
"""

import numpy as np

from driftlab.control import build_policy, control_input, sat, simulate_controlled, simulate_uncontrolled
from driftlab.demos import rotation_plant_demo
from driftlab.process import no_growth_trend

plant = rotation_plant_demo(u_max=0.5, noise_var=0.1)
policy = build_policy(plant)
print(f"saturation radius: {policy.u_hat_max:.3f}  (authority {plant.u_max})")

# noise-free deadbeat: any saturated anchor is zeroed in k steps
a, b = np.asarray(plant.a, float), np.asarray(plant.b, float)
x = sat(np.array([3.0, 0.0]), policy.u_hat_max)
anchor = x
for n in range(plant.k):
    u = control_input(policy, n, anchor)
    print(f"step {n}: ||u|| = {np.linalg.norm(u):.3f}")
    x = a @ x + b @ u
print(f"state after k steps, noise off: {x}")

closed = simulate_controlled(plant, policy, [3.0, 0.0], 3000, 50, 509)
open_loop = simulate_uncontrolled(plant, [3.0, 0.0], 3000, 50, 509)
times = np.arange(3001.0)
slope = float(np.polyfit(times, open_loop.means[2.0], 1, w=1.0 / (1.0 + times))[0])
print(f"closed loop E||X||^2 terminal: {closed.means[2.0][-1]:.2f}  "
      f"bounded: {no_growth_trend(closed.means[2.0])}")
print(f"open loop slope: {slope:.3f}  (noise trace {2 * 0.1})")
