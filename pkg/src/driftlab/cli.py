"""Batch experiment runner: load a declarative TOML config, execute, report.

Subcommands: ``run <config>``, ``demos``, ``version``.  Every run emits a
manifest (even on failure) alongside deterministic CSV outputs; exit code
is 0 when all criteria pass, 2 when a criterion fails, 1 on error.
"""

import argparse
import hashlib
import importlib.resources
import math
import os
import sys
import time

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import __version__, demos
from .control import build_policy, control_input, sat, simulate_controlled, simulate_uncontrolled
from .drift import verify_assumption
from .ergodicity import chain_moment, convergence_profile, discretize_multiplicative, stationary_distribution
from .errors import ConfigInvalid, DriftlabError
from .exponents import SigmaBarQuery, SigmaQuery, consistency_link, sigma, sigma_bar
from .linalg import RngStream
from .process import no_growth_trend, simulate_ensemble
from .switching import check_switch_drift, switching_process_model

KINDS = ("ensemble", "verify-assumption", "switching", "ergodicity", "control", "exponent-table")

DEMO_DESCRIPTIONS = {
    "additive": "halving chain with nonnegative noise; terminal mean approaches twice the noise mean",
    "counterexample": "deterministic restart walk: negative drift alone cannot bound the running max",
    "counterexample-verify": "condition check on the restart walk: drift passes, small-set boundedness fails",
    "rot-switch": "two-mode rotating pull system; exact drift check plus bounded second moment",
    "cubic-drift": "multiplicative 1-d chain discretized to a finite ergodic surrogate",
    "euler-maruyama-ou": "Euler chain for the unit OU diffusion; stationary variance vs closed form",
    "control-rotation": "bounded-input deadbeat policy on the quarter-turn plant vs open loop",
    "exponent-table": "moment-exponent tables and the s/theta consistency identity",
}


def _require(config, field, types, validator=None):
    if field not in config:
        raise ConfigInvalid(field, "missing required field")
    value = config[field]
    if not isinstance(value, types):
        raise ConfigInvalid(field, f"expected {types}, got {type(value).__name__}")
    if validator is not None and not validator(value):
        raise ConfigInvalid(field, f"invalid value {value!r}")
    return value


def load_config(path):
    with open(path, "rb") as f:
        config = tomllib.load(f)
    kind = _require(config, "kind", str, lambda k: k in KINDS)
    _require(config, "seed", int)
    if kind in ("ensemble", "verify-assumption", "switching", "ergodicity", "control"):
        _require(config, "model", str)
    if kind in ("ensemble", "switching", "control"):
        _require(config, "horizon", int, lambda h: h >= 1)
        _require(config, "trajectories", int, lambda t: t >= 1)
    return config


def _write_csv(path, header, rows):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row) + "\n")


def _build_model(config):
    name = config["model"]
    if name == "additive":
        return demos.additive_demo(noise_mean=config.get("noise_mean", 1.0))
    if name == "counterexample":
        return demos.counterexample_demo()
    raise ConfigInvalid("model", f"unknown model {name!r}")


def run_ensemble(config, outdir):
    model = _build_model(config)
    x0 = config.get("x0", [0.0])
    r_values = config.get("r_values", [1.0])
    report = simulate_ensemble(model, x0, config["horizon"], config["trajectories"],
                               config["seed"], r_values=r_values)
    out = os.path.join(outdir, "moments.csv")
    report.to_csv(out)
    criteria = []
    if config["model"] == "additive":
        target = 2.0 * config.get("noise_mean", 1.0)
        r = float(r_values[0])
        terminal_ok = abs(report.means[r][-1] - target) <= 3.0 * report.ses[r][-1]
        criteria.append(("terminal_mean_near_target", terminal_ok))
    if config["model"] == "counterexample":
        sup_min = config.get("sup_min", 100.0)
        criteria.append(("running_max_exceeds_threshold",
                         report.sup_estimates[float(r_values[0])] >= sup_min))
    return criteria, [out]


def run_verify_assumption(config, outdir):
    model = _build_model(config)
    probes = [np.asarray(x, dtype=float) for x in config["probes"]]
    report = verify_assumption(
        model, probes,
        p=config.get("p", 4.0),
        s=config.get("s", 0.0),
        times=config.get("times", [0]),
        samples=config.get("samples", 2000),
        base_seed=config["seed"],
    )
    text_out = os.path.join(outdir, "assumption_report.txt")
    csv_out = os.path.join(outdir, "assumption_report.csv")
    report.to_text(text_out)
    report.to_csv(csv_out)
    criteria = []
    for name in ("a", "b", "c"):
        expected = config.get(f"expect_{name}")
        if expected is not None:
            criteria.append((f"condition_{name}_{expected}", report.verdicts[name] == expected))
    return criteria, [text_out, csv_out]


def run_switching(config, outdir):
    if config["model"] != "rot-switch":
        raise ConfigInvalid("model", f"unknown switching model {config['model']!r}")
    spec = demos.rot_switch_demo()
    probe_radii = config.get("probe_radii", [2.0, 4.0, 8.0, 16.0])
    probe_states = [r * np.array([np.cos(a), np.sin(a)])
                    for r in probe_radii for a in (0.0, 1.0, 2.5)]
    probes, drift_ok = check_switch_drift(spec, probe_states, probe_modes=(0, 1))
    model = switching_process_model(spec)
    x0 = np.array(config.get("x0", [3.0, 0.0]) + [0.0])
    report = simulate_ensemble(model, x0, config["horizon"], config["trajectories"],
                               config["seed"], r_values=[1.0])
    moments_out = os.path.join(outdir, "moments.csv")
    report.to_csv(moments_out)

    # one sample trajectory, columns time, mode, state components
    rows = []
    rng = RngStream(config["seed"], 57005)
    x, y = np.asarray(config.get("x0", [3.0, 0.0]), dtype=float), 0
    from .switching import step_switching
    for n in range(min(config["horizon"], 500) + 1):
        rows.append((n, y, *[float(v) for v in x]))
        x, y = step_switching(spec, n, x, y, rng)
    traj_out = os.path.join(outdir, "trajectory.csv")
    _write_csv(traj_out, ["time", "mode", "x0", "x1"], rows)

    criteria = [
        ("switch_drift_condition", drift_ok),
        ("second_moment_no_growth", no_growth_trend(report.means[1.0])),
    ]
    return criteria, [moments_out, traj_out]


def run_ergodicity(config, outdir):
    model = config["model"]
    seed = config["seed"]
    criteria = []
    if model == "euler-maruyama-ou":
        delta = config.get("delta", 0.1)
        spec = demos.ou_euler_maruyama_spec(delta=delta)
        step = demos.ou_step_factory(delta=delta)
        target = 1.0 / (2.0 - delta)
    elif model == "cubic-drift":
        spec = demos.cubic_drift_spec()
        step = demos.cubic_drift_step_factory()
        target = None
    else:
        raise ConfigInvalid("model", f"unknown ergodicity model {model!r}")

    chain = discretize_multiplicative(spec)
    pi = stationary_distribution(chain)
    grid_var = chain_moment(chain, pi, power=2.0, center=True)

    n_grid = config.get("n_grid", [1, 2, 5, 10, 20, 50, 100, 200])
    profile = convergence_profile(chain, x0_index=len(pi) // 2,
                                  r=config.get("r", 1.0), n_grid=n_grid)
    profile_out = os.path.join(outdir, "profile.csv")
    profile.to_csv(profile_out)
    stationary_out = os.path.join(outdir, "stationary.csv")
    _write_csv(stationary_out, ["state", "pi"],
               [(float(chain.states[i, 0]), float(pi[i])) for i in range(len(pi))])

    # Monte Carlo oracle on the undiscretized chain
    burn_in = config.get("burn_in", 2000)
    samples = config.get("mc_samples", 100000)
    rng = RngStream(seed, 1)
    x = np.zeros(1)
    draws = np.empty(samples)
    for n in range(burn_in):
        x = step(n, x, rng)
    for i in range(samples):
        x = step(burn_in + i, x, rng)
        draws[i] = x[0]
    mc_var = float(np.var(draws))

    criteria.append(("profile_decays", profile.tv[-1] < profile.tv[0]))
    if target is not None:
        criteria.append(("grid_variance_within_5pct", abs(grid_var - target) <= 0.05 * target))
        criteria.append(("mc_variance_within_5pct", abs(mc_var - target) <= 0.05 * target))
    else:
        criteria.append(("grid_vs_mc_variance_within_10pct",
                         abs(grid_var - mc_var) <= 0.10 * max(grid_var, mc_var)))
    summary_out = os.path.join(outdir, "variance.csv")
    _write_csv(summary_out, ["grid_variance", "mc_variance"], [(grid_var, mc_var)])
    return criteria, [profile_out, stationary_out, summary_out]


def run_control(config, outdir):
    if config["model"] != "control-rotation":
        raise ConfigInvalid("model", f"unknown control model {config['model']!r}")
    u_max = config.get("u_max", 0.5)
    noise_var = config.get("noise_var", 0.1)
    plant = demos.rotation_plant_demo(u_max=u_max, noise_var=noise_var)
    policy = build_policy(plant)
    x0 = config.get("x0", [3.0, 0.0])
    closed = simulate_controlled(plant, policy, x0, config["horizon"],
                                 config["trajectories"], config["seed"])
    open_loop = simulate_uncontrolled(plant, x0, config["horizon"],
                                      config["trajectories"], config["seed"])
    closed_out = os.path.join(outdir, "closed_loop.csv")
    open_out = os.path.join(outdir, "open_loop.csv")
    closed.to_csv(closed_out)
    open_loop.to_csv(open_out)

    rng = RngStream(config["seed"], 999)
    anchors = [20.0 * rng.generator.standard_normal(plant.dim) for _ in range(200)]
    caps_ok = all(
        float(np.linalg.norm(control_input(policy, n, anchor))) <= u_max + 1e-12
        for anchor in anchors for n in range(2 * plant.k)
    )
    inside = sat(np.asarray(x0, dtype=float), policy.u_hat_max)
    lifted = np.linalg.matrix_power(np.asarray(plant.a, float), plant.k) @ inside \
        + policy.r_k @ (-policy.gain @ sat(inside, policy.u_hat_max))
    deadbeat_ok = float(np.max(np.abs(lifted))) <= 1e-9

    times = np.arange(config["horizon"] + 1)
    # the ensemble-mean noise scale grows linearly in n, so weight the fit down
    slope = float(np.polyfit(times, open_loop.means[2.0], 1, w=1.0 / (1.0 + times))[0])
    trace = plant.dim * noise_var
    criteria = [
        ("control_norm_within_authority", caps_ok),
        ("noise_free_deadbeat", deadbeat_ok),
        ("closed_loop_no_growth", no_growth_trend(closed.means[2.0])),
        ("open_loop_linear_growth", abs(slope - trace) <= 0.10 * trace),
    ]
    return criteria, [closed_out, open_out]


def run_exponent_table(config, outdir):
    rows = []
    for p in config.get("p_values", [3.0, 4.0, 6.0]):
        count = config.get("s_count", 25)
        top = p / 2 - 1
        for s in np.linspace(0.0, top, count, endpoint=False):
            value, branch = sigma(SigmaQuery(s=float(s), p=float(p)))
            rows.append(("sigma", float(s), float(p), float(value), branch))
    for p in config.get("p_values", [3.0, 4.0, 6.0]):
        for theta in config.get("theta_values", [1.0, 1.5, 2.0, 3.0, 10.0, math.inf]):
            value, branch = sigma_bar(SigmaBarQuery(theta=float(theta), p=float(p)))
            rows.append(("sigma_bar", float(theta), float(p), float(value), branch))
    out = os.path.join(outdir, "exponent_table.csv")
    _write_csv(out, ["function", "s_or_theta", "p", "value", "branch"], rows)

    rng = RngStream(config["seed"], 0)
    ok = True
    for _ in range(config.get("link_grid", 1000)):
        p = 2.0 + 4.0 * rng.generator.random() + 1e-6
        s = (p / 2 - 1) * rng.generator.random() * 0.999 + 1e-9
        a, b = consistency_link(s, p)
        ok = ok and abs(a - b) <= 1e-12
    return [("consistency_link_grid", ok)], [out]


RUNNERS = {
    "ensemble": run_ensemble,
    "verify-assumption": run_verify_assumption,
    "switching": run_switching,
    "ergodicity": run_ergodicity,
    "control": run_control,
    "exponent-table": run_exponent_table,
}


def _config_hash(path):
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


def write_manifest(path, config_hash, wall_time, outputs, criteria, error=None):
    with open(path, "w") as f:
        f.write(f"config_hash: {config_hash}\n")
        f.write(f"toolkit_version: {__version__}\n")
        f.write(f"wall_time_s: {wall_time:.3f}\n")
        for out in outputs:
            f.write(f"output: {out}\n")
        for name, ok in criteria:
            f.write(f"criterion {name}: {'pass' if ok else 'FAIL'}\n")
        if error is not None:
            f.write(f"error: {error}\n")


def run(config_path, output_dir=None, workers=None):
    """Execute one experiment config; returns the process exit code."""
    started = time.monotonic()
    criteria, outputs, error = [], [], None
    try:
        config = load_config(config_path)
        outdir = output_dir or config.get("output_dir", ".")
        os.makedirs(outdir, exist_ok=True)
        criteria, outputs = RUNNERS[config["kind"]](config, outdir)
        code = 0 if all(ok for _, ok in criteria) else 2
    except (DriftlabError, OSError, tomllib.TOMLDecodeError, ValueError) as exc:
        error = f"{type(exc).__name__}: {exc}"
        outdir = output_dir or "."
        os.makedirs(outdir, exist_ok=True)
        code = 1
    write_manifest(os.path.join(outdir, "manifest.txt"), _config_hash(config_path)
                   if os.path.exists(config_path) else "missing",
                   time.monotonic() - started, outputs, criteria, error)
    return code


def demo_config_path(name):
    resource = importlib.resources.files("driftlab") / "configs" / f"{name}.toml"
    return str(resource)


def list_demos():
    """Catalogue of shipped configs: (name, description, path)."""
    return [(name, DEMO_DESCRIPTIONS[name], demo_config_path(name))
            for name in sorted(DEMO_DESCRIPTIONS)]


def main(argv=None):
    parser = argparse.ArgumentParser(prog="driftlab")
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="execute an experiment config")
    run_parser.add_argument("config")
    run_parser.add_argument("--output-dir", default=None)
    run_parser.add_argument("--workers", type=int,
                            default=int(os.environ.get("DRIFTLAB_WORKERS", 0)) or None)
    sub.add_parser("demos", help="list shipped demo configs")
    sub.add_parser("version", help="print the toolkit version")
    args = parser.parse_args(argv)

    if args.command == "version":
        print(__version__)
        return 0
    if args.command == "demos":
        for name, description, path in list_demos():
            print(f"{name}: {description}")
            print(f"    {path}")
        return 0
    return run(args.config, output_dir=args.output_dir, workers=args.workers)


if __name__ == "__main__":
    sys.exit(main())
