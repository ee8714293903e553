"""Generic time-indexed stochastic processes and ensemble moment estimation.

A ProcessModel packages a one-step transition sampler with the target
function V whose moments are being monitored, and the small set D outside
which the negative drift is expected.  Time-inhomogeneous dynamics are
first class: the step function receives the time index.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import NonFiniteState
from .linalg import RngStream, as_vector


@dataclass(frozen=True)
class ProcessModel:
    """Transition sampler plus Lyapunov-target function.

    step(n, x, rng) must be deterministic given the rng state, and safe to
    share read-only across workers.  trajectory_v, when provided, is a
    whole-trajectory fast path: trajectory_v(x0, horizon, rng) returns the
    (horizon+1,) array of V values along one sampled path, and must define
    the same process law as iterating step.
    """

    dim: int
    step: Callable
    lyapunov_v: Callable
    region_d: Callable = field(default=lambda x: False)
    trajectory_v: Callable = None


@dataclass(frozen=True)
class EnsembleMomentReport:
    """Per-time empirical means and standard errors of V(X_n)^r, one block per r."""

    horizon: int
    trajectories: int
    r_values: tuple
    means: dict      # r -> array of length horizon+1
    ses: dict        # r -> array of length horizon+1
    sup_estimates: dict  # r -> max over time of the mean profile

    def to_csv(self, path):
        """Columns: time, then mean_r_<r>, se_r_<r> per requested r."""
        header = ["time"]
        for r in self.r_values:
            header += [f"mean_r_{r:g}", f"se_r_{r:g}"]
        with open(path, "w") as f:
            f.write(",".join(header) + "\n")
            for n in range(self.horizon + 1):
                row = [str(n)]
                for r in self.r_values:
                    row += [repr(float(self.means[r][n])), repr(float(self.ses[r][n]))]
                f.write(",".join(row) + "\n")


def _kahan_add(total, comp, x):
    # compensated summation, vectorized over the time axis
    y = x - comp
    t = total + y
    comp[:] = (t - total) - y
    total[:] = t


def simulate_ensemble(model, x0, horizon, trajectories, base_seed, r_values=(1.0,)):
    """Monte Carlo estimate of the moment profiles n -> E[V(X_n)^r].

    Trajectory t draws from RngStream(base_seed, t), so the report is
    bitwise reproducible for a given base_seed and is invariant to how
    trajectories would be distributed over workers.  Only running moments
    are retained (compensated summation), never whole ensembles.
    """
    if horizon < 1 or trajectories < 1:
        raise ValueError("horizon and trajectories must be >= 1")
    x0 = as_vector(x0, model.dim)
    r_values = tuple(float(r) for r in r_values)

    length = horizon + 1
    sums = {r: np.zeros(length) for r in r_values}
    comps = {r: np.zeros(length) for r in r_values}
    sqsums = {r: np.zeros(length) for r in r_values}
    sqcomps = {r: np.zeros(length) for r in r_values}

    vals = np.empty(length)
    step, V, traj = model.step, model.lyapunov_v, model.trajectory_v
    for t in range(trajectories):
        rng = RngStream(base_seed, t)
        if traj is not None:
            vals[:] = traj(x0, horizon, rng)
        else:
            x = x0
            vals[0] = V(x)
            for n in range(horizon):
                x = step(n, x, rng)
                vals[n + 1] = V(x)
        if not np.all(np.isfinite(vals)):
            bad = int(np.argmin(np.isfinite(vals)))
            raise NonFiniteState(
                f"non-finite V at time {bad} in trajectory {t}", time=bad, trajectory=t
            )
        for r in r_values:
            powered = vals if r == 1.0 else vals ** r
            _kahan_add(sums[r], comps[r], powered)
            _kahan_add(sqsums[r], sqcomps[r], powered * powered)

    means, ses, sups = {}, {}, {}
    m = trajectories
    for r in r_values:
        mean = sums[r] / m
        if m > 1:
            var = np.maximum(sqsums[r] - m * mean * mean, 0.0) / (m - 1)
            se = np.sqrt(var / m)
        else:
            se = np.zeros(length)
        means[r], ses[r], sups[r] = mean, se, float(np.max(mean))
    return EnsembleMomentReport(
        horizon=horizon,
        trajectories=m,
        r_values=r_values,
        means=means,
        ses=ses,
        sup_estimates=sups,
    )


def additive_reference(noise_sampler, noise_mean):
    """The halving-plus-nonnegative-noise chain X_{n+1} = X_n/2 + xi_{n+1}.

    noise_sampler(rng, size) must return nonnegative draws with mean
    noise_mean, a scalar when size is None and an array otherwise.
    V(x) = |x|; the small set is {x <= 2(mean+1)}, which the drift
    -x/2 + mean pushes the chain back into.
    """
    from scipy.signal import lfilter

    threshold = 2.0 * (noise_mean + 1.0)

    def step(n, x, rng):
        return np.array([0.5 * x[0] + noise_sampler(rng, None)])

    def trajectory_v(x0, horizon, rng):
        draws = noise_sampler(rng, horizon)
        out = np.empty(horizon + 1)
        out[0] = x0[0]
        # x_{n+1} = x_n / 2 + d_n is an order-1 linear filter of the draws
        out[1:] = lfilter([1.0], [1.0, -0.5], draws)
        out[1:] += x0[0] * 0.5 ** np.arange(1, horizon + 1)
        return np.abs(out)

    return ProcessModel(
        dim=1,
        step=step,
        lyapunov_v=lambda x: abs(x[0]),
        region_d=lambda x: x[0] <= threshold,
        trajectory_v=trajectory_v,
    )


def counterexample_reference():
    """Deterministic time-inhomogeneous walk that defeats plain negative drift.

    Decrements until it hits 1, then restarts at n+1, so the running max
    grows without bound even though the drift outside {1} is exactly -1.
    """

    def step(n, x, rng):
        if x[0] > 1:
            return np.array([x[0] - 1.0])
        return np.array([float(n + 1)])

    return ProcessModel(
        dim=1,
        step=step,
        lyapunov_v=lambda x: x[0],
        region_d=lambda x: x[0] == 1.0,
    )


def no_growth_trend(series, factor=2.0):
    """Trailing-decile mean <= factor * middle-decile mean.

    The boundedness statistic used throughout: a profile that keeps growing
    over the horizon fails; a profile that has levelled off passes.
    """
    series = np.asarray(series, dtype=float)
    n = len(series)
    trailing = series[int(0.9 * n):]
    middle = series[int(0.45 * n):int(0.55 * n)]
    return float(np.mean(trailing)) <= factor * float(np.mean(middle))
