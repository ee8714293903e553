import numpy as np
import pytest

from driftlab.errors import NonFiniteState
from driftlab.linalg import RngStream
from driftlab.process import (
    ProcessModel,
    additive_reference,
    counterexample_reference,
    no_growth_trend,
    simulate_ensemble,
)


def exponential_additive(mean=1.0):
    return additive_reference(
        noise_sampler=lambda rng, size: rng.generator.exponential(mean, size),
        noise_mean=mean,
    )


def store_all_oracle(model, x0, horizon, trajectories, base_seed, r):
    """Keep every trajectory in memory; the reference for the streaming path."""
    x0 = np.asarray(x0, dtype=float)
    table = np.empty((trajectories, horizon + 1))
    for t in range(trajectories):
        rng = RngStream(base_seed, t)
        x = x0
        table[t, 0] = model.lyapunov_v(x)
        for n in range(horizon):
            x = model.step(n, x, rng)
            table[t, n + 1] = model.lyapunov_v(x)
    powered = table ** r
    mean = powered.mean(axis=0)
    se = powered.std(axis=0, ddof=1) / np.sqrt(trajectories)
    return mean, se


def test_streaming_matches_store_all_oracle():
    model = ProcessModel(
        dim=1,
        step=lambda n, x, rng: 0.9 * x + rng.generator.standard_normal(1),
        lyapunov_v=lambda x: abs(x[0]),
    )
    report = simulate_ensemble(model, [1.0], 50, 400, 99, r_values=[1.0, 2.0])
    for r in (1.0, 2.0):
        mean, se = store_all_oracle(model, [1.0], 50, 400, 99, r)
        assert np.max(np.abs(report.means[r] - mean)) < 1e-10
        assert np.max(np.abs(report.ses[r] - se)) < 1e-10


def test_additive_fast_path_matches_step_path():
    model = exponential_additive()
    for t in range(10):
        fast = model.trajectory_v(np.array([0.0]), 100, RngStream(77, t))
        rng = RngStream(77, t)
        x = np.array([0.0])
        slow = [model.lyapunov_v(x)]
        for n in range(100):
            x = model.step(n, x, rng)
            slow.append(model.lyapunov_v(x))
        assert np.array_equal(fast, np.array(slow))


def test_report_reproducible_and_worker_invariant():
    model = exponential_additive()
    a = simulate_ensemble(model, [0.0], 30, 50, 123, r_values=[1.0])
    b = simulate_ensemble(model, [0.0], 30, 50, 123, r_values=[1.0])
    assert np.array_equal(a.means[1.0], b.means[1.0])
    assert np.array_equal(a.ses[1.0], b.ses[1.0])


def test_counterexample_orbit_values():
    model = counterexample_reference()
    x = np.array([0.0])
    seen = [x[0]]
    rng = RngStream(0, 0)
    for n in range(20):
        x = model.step(n, x, rng)
        seen.append(x[0])
    # from 0: restart to 1, restart to 2, decrement to 1, restart to 4, ...
    assert seen[:8] == [0.0, 1.0, 2.0, 1.0, 4.0, 3.0, 2.0, 1.0]
    assert model.region_d(np.array([1.0]))
    assert not model.region_d(np.array([5.0]))


def test_counterexample_running_max_grows():
    model = counterexample_reference()
    report = simulate_ensemble(model, [0.0], 10000, 1, 0, r_values=[1.0])
    assert report.sup_estimates[1.0] >= 100.0


def test_additive_terminal_mean():
    model = exponential_additive(mean=1.0)
    report = simulate_ensemble(model, [0.0], 100, 2000, 314, r_values=[1.0])
    assert abs(report.means[1.0][-1] - 2.0) <= 3.0 * report.ses[1.0][-1] + 0.05


def test_non_finite_state_reported_with_location():
    def step(n, x, rng):
        return x * 10.0 if n < 5 else x * np.inf

    model = ProcessModel(dim=1, step=step, lyapunov_v=lambda x: x[0])
    with pytest.raises(NonFiniteState) as err:
        simulate_ensemble(model, [1.0], 10, 3, 0, r_values=[1.0])
    assert err.value.time == 6
    assert err.value.trajectory == 0


def test_simulate_ensemble_argument_validation():
    model = exponential_additive()
    with pytest.raises(ValueError):
        simulate_ensemble(model, [0.0], 0, 10, 0)
    with pytest.raises(ValueError):
        simulate_ensemble(model, [0.0], 10, 0, 0)


def test_report_csv_round_trip(tmp_path):
    model = exponential_additive()
    report = simulate_ensemble(model, [0.0], 20, 30, 5, r_values=[1.0, 2.0])
    out = tmp_path / "moments.csv"
    report.to_csv(out)
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "time,mean_r_1,se_r_1,mean_r_2,se_r_2"
    assert len(lines) == 22
    last = lines[-1].split(",")
    assert float(last[1]) == report.means[1.0][-1]  # repr round-trips exactly
    report.to_csv(tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == out.read_bytes()


def test_no_growth_trend():
    flat = np.ones(1000) + 0.01 * np.sin(np.arange(1000))
    assert no_growth_trend(flat)
    growing = np.linspace(0.0, 10.0, 1000) ** 2
    assert not no_growth_trend(growing)
    decaying = np.exp(-np.linspace(0.0, 5.0, 1000))
    assert no_growth_trend(decaying)
