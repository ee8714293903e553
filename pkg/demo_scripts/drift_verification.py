"""Statistical certification of drift and jump conditions for the halving chain.

Conditional expectations are estimated by resampling the one-step kernel at
probe states; "pass" requires a 3-standard-error margin at every probe.
"""

from driftlab.demos import additive_demo
from driftlab.drift import geometric_probe_plan, verify_assumption

model = additive_demo(noise_mean=1.0)
probes = geometric_probe_plan(model, base_seed=42, radii=(1, 2, 4, 8, 16, 32, 64))

report = verify_assumption(model, probes, p=4.0, s=0.0, times=(0,), samples=2000,
                           base_seed=42)
print(f"fitted drift margin A:  {report.fitted_a:.4f}")
print(f"fitted jump constant:   {report.fitted_c_phi:.4f}")
print(f"sup V on the small set: {report.sup_v_on_d:.4f}")
for name in ("a", "b", "c"):
    print(f"condition ({name}): {report.verdicts[name]}")
print(f"overall: {report.overall}")
