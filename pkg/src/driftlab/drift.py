"""Monte Carlo certification of the drift / jump / small-set conditions.

The three conditions checked for a ProcessModel are: (a) negative one-step
drift of V outside the set D, (b) a state-dependent bound
Xi_n <= C_phi (1 + V^s) on the centered conditional p-th moment of
V(X_{n+1}), and (c) boundedness of V and of the one-step conditional mean
on D.  Conditional expectations are estimated by plug-in resampling: the
model's step function is a fresh-draw sampler at any (n, x), so no nested
Monte Carlo is needed.

Certification is statistical, never formal: "pass" requires the inequality
to hold with a 3-standard-error margin at every sampled state,
"inconclusive" means the point estimates satisfy it but the margin fails.
"""

import numpy as np
from dataclasses import dataclass

from .errors import InsufficientCoverage, NonFiniteState
from .linalg import RngStream, as_vector

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
_MARGIN_SES = 3.0
_JUMP_BATCHES = 10


@dataclass(frozen=True)
class DriftEstimate:
    state: np.ndarray
    time: int
    mean: float
    se: float
    samples: int


@dataclass(frozen=True)
class JumpMomentEstimate:
    state: np.ndarray
    time: int
    p: float
    estimate: float   # centered conditional p-th moment of V at (time, state)
    se: float


def _draw_values(model, x, n, samples, rng):
    vs = np.empty(samples)
    step, V = model.step, model.lyapunov_v
    for i in range(samples):
        y = step(n, x, rng)
        vs[i] = V(y)
    if not np.all(np.isfinite(vs)):
        bad = int(np.argmin(np.isfinite(vs)))
        raise NonFiniteState(f"non-finite V in sample {bad} at time {n}", time=n)
    return vs


def estimate_drift(model, x, n, samples, rng):
    """Mean and standard error of V(X_{n+1}) - V(x) given X_n = x."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    x = as_vector(x, model.dim)
    vs = _draw_values(model, x, n, samples, rng)
    deltas = vs - model.lyapunov_v(x)
    se = float(np.std(deltas, ddof=1) / np.sqrt(samples))
    return DriftEstimate(state=x, time=n, mean=float(np.mean(deltas)), se=se, samples=samples)


def estimate_centered_jump_moment(model, x, n, p, samples, rng):
    """Plug-in estimate of E[|V(X_{n+1}) - E[V(X_{n+1})|X_n=x]|^p | X_n=x].

    The inner conditional mean is estimated from the same sample; the
    standard error comes from splitting the sample into 10 batches.
    """
    if p <= 2:
        raise ValueError("p must exceed 2")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    x = as_vector(x, model.dim)
    vs = _draw_values(model, x, n, samples, rng)
    devs = np.abs(vs - np.mean(vs)) ** p
    batches = np.array_split(devs, _JUMP_BATCHES)
    batch_means = np.array([np.mean(b) for b in batches])
    se = float(np.std(batch_means, ddof=1) / np.sqrt(_JUMP_BATCHES))
    return JumpMomentEstimate(state=x, time=n, p=p, estimate=float(np.mean(devs)), se=se)


def geometric_probe_plan(model, base_seed, radii=(1, 2, 4, 8, 16, 32, 64), directions=3, extra=()):
    """Default state-sampling plan: geometric radii along random directions.

    Growth exponents are log-scale phenomena, so probes double in radius;
    user-specified probe states are appended unchanged.
    """
    rng = RngStream(base_seed, stream_id=0xD1)
    states = []
    for _ in range(directions):
        u = rng.generator.standard_normal(model.dim)
        u /= np.linalg.norm(u)
        for rad in radii:
            states.append(rad * u)
    states.extend(as_vector(e, model.dim) for e in extra)
    return states


@dataclass(frozen=True)
class AssumptionReport:
    """Per-state estimates and verdicts for the three conditions."""

    p: float
    s: float
    times: tuple
    drift_estimates: list        # DriftEstimate, one per (outside-D state, time)
    jump_estimates: list         # JumpMomentEstimate, one per (state, time)
    fitted_a: float              # certified drift margin outside D
    fitted_c_phi: float          # max of (Xi + 3 se) / (1 + V^s) over samples
    sup_v_on_d: float
    sup_condmean_on_d: float
    verdicts: dict               # {"a"|"b"|"c": pass/fail/inconclusive}

    @property
    def overall(self):
        if any(v == FAIL for v in self.verdicts.values()):
            return FAIL
        if any(v == INCONCLUSIVE for v in self.verdicts.values()):
            return INCONCLUSIVE
        return PASS

    def to_text(self, path):
        with open(path, "w") as f:
            f.write(f"p: {self.p:g}\n")
            f.write(f"s: {self.s:g}\n")
            f.write(f"fitted_A: {repr(self.fitted_a)}\n")
            f.write(f"fitted_C_phi: {repr(self.fitted_c_phi)}\n")
            f.write(f"sup_V_on_D: {repr(self.sup_v_on_d)}\n")
            f.write(f"sup_condmean_on_D: {repr(self.sup_condmean_on_d)}\n")
            for name in ("a", "b", "c"):
                f.write(f"condition_{name}: {self.verdicts[name]}\n")
            f.write(f"overall: {self.overall}\n")

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("kind,time,state,estimate,se\n")
            for d in self.drift_estimates:
                state = " ".join(repr(float(v)) for v in d.state)
                f.write(f"drift,{d.time},{state},{repr(d.mean)},{repr(d.se)}\n")
            for j in self.jump_estimates:
                state = " ".join(repr(float(v)) for v in j.state)
                f.write(f"jump,{j.time},{state},{repr(j.estimate)},{repr(j.se)}\n")


def _growing(profile, times):
    # least-squares growth over the time window large relative to the level
    profile = np.asarray(profile, dtype=float)
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        return False
    slope = float(np.polyfit(times, profile, 1)[0])
    growth = slope * (times[-1] - times[0])
    return growth > 0.5 * float(np.median(profile)) + 1e-9


def verify_assumption(model, states, p, s, times, samples, base_seed):
    """Check the drift, jump and small-set conditions over a sampling plan.

    ``states`` must cover both sides of D.  For the declared jump growth
    exponent s, the smallest workable constants A and C_phi are fitted from
    the estimates; s itself is the caller's modeling responsibility and is
    never fitted.
    """
    states = [as_vector(x, model.dim) for x in states]
    inside = [x for x in states if model.region_d(x)]
    outside = [x for x in states if not model.region_d(x)]
    if not outside:
        raise InsufficientCoverage("sampling plan has no state outside D")
    times = tuple(int(n) for n in times)
    V = model.lyapunov_v

    stream = 0
    drift_estimates, jump_estimates = [], []
    drift_margins, point_drifts = [], []
    implied_constants = []  # (V(x), (Xi + 3 se) / (1 + V^s))
    for x in outside:
        for n in times:
            d = estimate_drift(model, x, n, samples, RngStream(base_seed, stream))
            stream += 1
            drift_estimates.append(d)
            drift_margins.append(-(d.mean + _MARGIN_SES * d.se))
            point_drifts.append(-d.mean)
    for x in states:
        for n in times:
            j = estimate_centered_jump_moment(
                model, x, n, p, max(samples, 1000), RngStream(base_seed, stream)
            )
            stream += 1
            jump_estimates.append(j)
            implied_constants.append(
                (V(x), (j.estimate + _MARGIN_SES * j.se) / (1.0 + V(x) ** s))
            )

    fitted_a = min(drift_margins)
    if fitted_a > 0:
        verdict_a = PASS
    elif min(point_drifts) > 0:
        verdict_a = INCONCLUSIVE
    else:
        verdict_a = FAIL

    fitted_c_phi = max(c for _, c in implied_constants)
    # an implied constant that keeps climbing with V(x) means no finite
    # C_phi exists for the declared s
    by_v = sorted(implied_constants)
    top = max(c for _, c in by_v[-max(1, len(by_v) // 4):])
    mid = np.median([c for _, c in by_v])
    verdict_b = PASS if top <= 2.0 * mid + 1e-9 else INCONCLUSIVE

    if inside:
        sup_v_on_d = max(V(x) for x in inside)
        condmean_profile = []
        for n in times:
            per_state = []
            for x in inside:
                vs = _draw_values(model, x, n, samples, RngStream(base_seed, stream))
                stream += 1
                se = float(np.std(vs, ddof=1) / np.sqrt(len(vs)))
                per_state.append(float(np.mean(vs)) + _MARGIN_SES * se)
            condmean_profile.append(max(per_state))
        sup_condmean_on_d = max(condmean_profile)
        verdict_c = FAIL if _growing(condmean_profile, times) else PASS
    else:
        sup_v_on_d = float("nan")
        sup_condmean_on_d = float("nan")
        verdict_c = INCONCLUSIVE

    return AssumptionReport(
        p=p,
        s=s,
        times=times,
        drift_estimates=drift_estimates,
        jump_estimates=jump_estimates,
        fitted_a=float(fitted_a),
        fitted_c_phi=float(fitted_c_phi),
        sup_v_on_d=float(sup_v_on_d),
        sup_condmean_on_d=float(sup_condmean_on_d),
        verdicts={"a": verdict_a, "b": verdict_b, "c": verdict_c},
    )


@dataclass(frozen=True)
class MartingaleScalingTable:
    """Empirical E|M_n|^p against the n^{p/2-1}-scaled increment-sum bound."""

    p: float
    n_grid: tuple
    empirical: np.ndarray        # E|M_n|^p per grid point
    bound: np.ndarray            # fitted_constant * n^{p/2-1} * sum_{m<n} gamma_hat_m
    fitted_constant: float
    loglog_slope: float

    def satisfied(self):
        return bool(np.all(self.empirical <= self.bound * (1 + 1e-12)))


def martingale_scaling_harness(increment_sampler, p, n_grid, trajectories, base_seed,
                               block=20000):
    """Empirically check the p-th-moment scaling of an i.i.d.-increment martingale.

    increment_sampler(rng, shape) must return mean-zero draws with finite
    p-th moment.  A single constant is fitted across the grid so that
    E|M_n|^p <= constant * n^{p/2-1} * sum_{m<n} gamma_hat_m everywhere,
    with gamma_hat_m the empirical p-th absolute moment of the increments;
    the log-log slope of E|M_n|^p against n is reported alongside.
    """
    n_grid = tuple(sorted(int(n) for n in n_grid))
    n_max = n_grid[-1]
    sums = np.zeros(len(n_grid))
    gamma_sum = 0.0
    gamma_count = 0
    done = 0
    stream = 0
    while done < trajectories:
        m = min(block, trajectories - done)
        rng = RngStream(base_seed, stream)
        stream += 1
        increments = increment_sampler(rng, (m, n_max))
        paths = np.cumsum(increments, axis=1)
        for i, n in enumerate(n_grid):
            sums[i] += np.sum(np.abs(paths[:, n - 1]) ** p)
        gamma_sum += np.sum(np.abs(increments) ** p)
        gamma_count += increments.size
        done += m
    empirical = sums / trajectories
    gamma_hat = gamma_sum / gamma_count  # increments are i.i.d. across m
    raw = np.array([n ** (p / 2 - 1) * n * gamma_hat for n in n_grid])
    constant = float(np.max(empirical / raw))
    slope = float(np.polyfit(np.log(n_grid), np.log(empirical), 1)[0])
    return MartingaleScalingTable(
        p=p,
        n_grid=n_grid,
        empirical=empirical,
        bound=constant * raw,
        fitted_constant=constant,
        loglog_slope=slope,
    )
