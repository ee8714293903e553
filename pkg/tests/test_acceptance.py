"""Top-level acceptance criteria, one test per criterion.

Each test prints a single pass/fail line and enforces its wall-time budget.
Run with ``pytest -v tests/test_acceptance.py`` for the per-criterion report.
"""

import time

import numpy as np
import pytest

from driftlab.cli import list_demos, run
from driftlab.control import build_policy, control_input, sat, simulate_controlled, simulate_uncontrolled
from driftlab.demos import (
    additive_demo,
    counterexample_demo,
    ou_euler_maruyama_spec,
    ou_step_factory,
    rot_switch_demo,
    rotation_plant_demo,
)
from driftlab.drift import (
    FAIL,
    PASS,
    estimate_drift,
    martingale_scaling_harness,
    verify_assumption,
)
from driftlab.ergodicity import (
    FiniteChain,
    chain_moment,
    convergence_profile,
    discretize_multiplicative,
    g_norm,
    stationary_distribution,
    tv_norm,
)
from driftlab.exponents import SigmaBarQuery, SigmaQuery, consistency_link, sigma, sigma_bar
from driftlab.linalg import RngStream
from driftlab.process import no_growth_trend, simulate_ensemble
from driftlab.switching import check_switch_drift, switching_process_model


class Budget:
    def __init__(self, name, seconds):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.started = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.started
        ok = exc_type is None and elapsed <= self.seconds
        print(f"criterion {self.name}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s / {self.seconds:g}s budget)")
        if exc_type is None:
            assert elapsed <= self.seconds, f"{self.name} exceeded {self.seconds}s budget"
        return False


def test_criterion_01_exponent_formulas():
    with Budget("1 exponent formulas", 1.0):
        table = [
            (sigma(SigmaQuery(s=0.0, p=4.0)), (3.0, "main")),
            (sigma(SigmaQuery(s=1.0, p=6.0)), (3.5, "main")),
            (sigma(SigmaQuery(s=0.2, p=3.0)), (1.0, "plateau")),
            (sigma(SigmaQuery(s=0.1, p=3.0)), (1.7, "main")),
            (sigma_bar(SigmaBarQuery(theta=float("inf"), p=3.0)), (2.0, "main")),
            (sigma_bar(SigmaBarQuery(theta=1.0, p=5.0)), (1.5, "main")),
            (sigma_bar(SigmaBarQuery(theta=2.0, p=3.0)), (1.0, "plateau")),
        ]
        for (value, branch), (want_value, want_branch) in table:
            assert value == pytest.approx(want_value, abs=1e-12)
            assert branch == want_branch
        rng = np.random.default_rng(1)
        for _ in range(1000):
            p = 2.0 + 6.0 * rng.random() + 1e-9
            s = (p / 2 - 1) * rng.random() * 0.9999 + 1e-12
            a, b = consistency_link(float(s), float(p))
            assert abs(a - b) <= 1e-12


def test_criterion_02_additive_terminal_mean():
    with Budget("2 additive terminal mean", 10.0):
        model = additive_demo(noise_mean=1.0)
        report = simulate_ensemble(model, [0.0], 200, 10000, 20250817, r_values=[1.0])
        terminal, se = report.means[1.0][-1], report.ses[1.0][-1]
        assert abs(terminal - 2.0) <= 3.0 * se


def test_criterion_03_counterexample():
    with Budget("3 counterexample", 1.0):
        model = counterexample_demo()
        orbit = simulate_ensemble(model, [1.0], 10000, 1, 7, r_values=[1.0])
        assert orbit.sup_estimates[1.0] > 100.0

        est = estimate_drift(model, [33.0], 0, 200, RngStream(11, 0))
        assert est.mean + 3.0 * est.se < 0.0  # condition (a) certified

        report = verify_assumption(
            model,
            [[1.0], [3.0], [5.0], [9.0], [17.0], [33.0]],
            p=4.0, s=0.0, times=(0, 10, 20, 30, 40, 50), samples=100, base_seed=11,
        )
        assert report.verdicts["a"] == PASS
        assert report.verdicts["b"] != FAIL
        assert report.verdicts["c"] == FAIL  # only (c) fails


def enumerated_fourth_moment(n):
    # all 2^n equally likely +/-1 paths
    bits = np.arange(2 ** n, dtype=np.uint32)
    signs = np.where((bits[:, None] >> np.arange(n)) & 1, 1.0, -1.0)
    return float(np.mean(signs.sum(axis=1) ** 4))


def test_criterion_04_martingale_scaling():
    with Budget("4 martingale scaling", 60.0):
        for n in range(1, 13):
            assert enumerated_fourth_moment(n) == pytest.approx(3 * n ** 2 - 2 * n, abs=1e-9)
        sampler = lambda rng, shape: rng.generator.standard_normal(shape)
        table = martingale_scaling_harness(sampler, 4.0, (4, 16, 64), 100000, 20250817)
        for i, n in enumerate(table.n_grid):
            assert table.empirical[i] == pytest.approx(3.0 * n ** 2, rel=0.05)
        assert abs(table.loglog_slope - 2.0) <= 0.1
        assert table.satisfied()


def test_criterion_05_g_norm_enumeration():
    with Budget("5 g-norm enumeration", 30.0):
        rng = np.random.default_rng(5)
        sign_cache = {}
        for _ in range(1000):
            n = int(rng.integers(1, 13))
            if n not in sign_cache:
                bits = np.arange(2 ** n, dtype=np.uint32)
                sign_cache[n] = np.where((bits[:, None] >> np.arange(n)) & 1, 1.0, -1.0)
            nu = rng.standard_normal(n)
            g = rng.random(n)
            closed = g_norm(nu, g)
            enumerated = float(np.max(np.abs((sign_cache[n] * g) @ nu)))
            assert closed == pytest.approx(enumerated, abs=1e-10)
            mass = float(np.sum(g * np.abs(nu)))
            assert mass / 2 - 1e-12 <= closed <= mass + 1e-12


def test_criterion_06_finite_chain_ergodicity():
    with Budget("6 finite-chain ergodicity", 10.0):
        chain = FiniteChain(
            states=np.array([[0.0], [1.0]]),
            matrix=np.array([[0.9, 0.1], [0.2, 0.8]]),
            v_values=np.array([1.0, 2.0]),
        )
        pi = stationary_distribution(chain)
        tv0 = tv_norm(np.array([1.0, 0.0]) - pi)
        profile = convergence_profile(chain, 0, 1.0, list(range(1, 41)))
        for i, n in enumerate(profile.n_grid):
            assert abs(profile.tv[i] - 0.7 ** n * tv0) < 1e-10

        rng = np.random.default_rng(6)
        for _ in range(3):
            m = rng.random((5, 5)) + 0.05
            m /= m.sum(axis=1, keepdims=True)
            five = FiniteChain(states=np.arange(5.0).reshape(-1, 1), matrix=m,
                               v_values=np.arange(5.0))
            prof = convergence_profile(five, 0, 1.0, [10, 100, 2000])
            assert prof.tv[-1] <= 1e-8
            assert prof.weighted[-1] <= 1e-6


def test_criterion_07_ou_stationary_variance():
    with Budget("7 OU stationary variance", 60.0):
        delta = 0.1
        target = 1.0 / (2.0 - delta)
        chain = discretize_multiplicative(ou_euler_maruyama_spec(delta=delta))
        pi = stationary_distribution(chain)
        grid_var = chain_moment(chain, pi, power=2.0, center=True)
        assert abs(grid_var - target) <= 0.05 * target

        step = ou_step_factory(delta=delta)
        rng = RngStream(401, 1)
        x = np.zeros(1)
        for n in range(2000):
            x = step(n, x, rng)
        draws = np.empty(100000)
        for i in range(100000):
            x = step(2000 + i, x, rng)
            draws[i] = x[0]
        mc_var = float(np.var(draws))
        assert abs(mc_var - target) <= 0.05 * target


def test_criterion_08_switching_demo():
    with Budget("8 switching demo", 120.0):
        spec = rot_switch_demo()
        states = [r * np.array([np.cos(a), np.sin(a)])
                  for r in (2.0, 4.0, 8.0, 16.0) for a in (0.0, 1.0, 2.5)]
        _, drift_ok = check_switch_drift(spec, states, probe_modes=(0, 1))
        assert drift_ok
        model = switching_process_model(spec)
        report = simulate_ensemble(model, [3.0, 0.0, 0.0], 10000, 200, 313,
                                   r_values=[1.0])
        assert no_growth_trend(report.means[1.0])


def test_criterion_09_control():
    with Budget("9 bounded-input control", 120.0):
        plant = rotation_plant_demo(u_max=0.5, noise_var=0.1)
        policy = build_policy(plant)

        rng = RngStream(509, 999)
        for _ in range(200):
            anchor = 20.0 * rng.generator.standard_normal(2)
            for n in range(2 * plant.k):
                assert np.linalg.norm(control_input(policy, n, anchor)) <= 0.5 + 1e-12

        a = np.asarray(plant.a, dtype=float)
        b = np.asarray(plant.b, dtype=float)
        x = sat(np.array([3.0, 0.0]), policy.u_hat_max)
        anchor = x
        for n in range(plant.k):
            x = a @ x + b @ control_input(policy, n, anchor)
        assert np.max(np.abs(x)) <= 1e-9  # noise-free deadbeat

        closed = simulate_controlled(plant, policy, [3.0, 0.0], 10000, 200, 509)
        open_loop = simulate_uncontrolled(plant, [3.0, 0.0], 10000, 200, 509)
        assert no_growth_trend(closed.means[2.0])
        times = np.arange(10001.0)
        slope = float(np.polyfit(times, open_loop.means[2.0], 1, w=1.0 / (1.0 + times))[0])
        trace = 2 * 0.1
        assert abs(slope - trace) <= 0.10 * trace


def test_criterion_10_reproducibility(tmp_path):
    with Budget("10 reproducibility", 600.0):
        for name, _, config_path in list_demos():
            out_a = tmp_path / name / "a"
            out_b = tmp_path / name / "b"
            code_a = run(config_path, output_dir=str(out_a))
            code_b = run(config_path, output_dir=str(out_b))
            assert code_a == 0, name
            assert code_b == 0, name
            csvs = sorted(p.name for p in out_a.iterdir() if p.suffix == ".csv")
            assert csvs, name
            for csv_name in csvs:
                assert (out_a / csv_name).read_bytes() == (out_b / csv_name).read_bytes(), \
                    f"{name}/{csv_name} differs between reruns"
