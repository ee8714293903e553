"""Simulator and condition checker for coupled switching (hybrid) systems.

Dynamics: a mode Y_{n+1} is drawn from a state-dependent kernel over a
finite enumerated mode space, then the continuous state moves by
X_{n+1} = L_n(X_n, Y_{n+1}) + F_n(X_n, Y_{n+1}) + G_n(X_n, Y_{n+1}, xi_{n+1}).
Because the mode space is finite, kernel averages (the drift inner product
and the averaged growth constants) are exact sums, not Monte Carlo.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Callable

from .errors import KernelNotStochastic, NotBoundaryCase
from .linalg import as_vector
from .process import ProcessModel

_KERNEL_TOL = 1e-12


@dataclass(frozen=True)
class SwitchingSystemSpec:
    """Kernel, maps L/F/G, noise sampler, and declared exponents/constants.

    Exponent conventions: ||F|| <= m_F(y)(1+||x||)^f0 with centered version
    exponent f1, ||L|| <= m_L1(y)||x|| + m_L2(y) with centered exponent l1,
    ||G|| <= m_G(y)(1+||x||)^g0 Psi(z), and kernel-averaged drift
    <F, L> <= -m0 ||x||^{1+gamma} outside ||x|| <= b.
    """

    dim: int
    n_modes: int
    kernel: Callable         # (n, x, y) -> probability vector over modes
    map_l: Callable          # (n, x, y) -> state
    map_f: Callable          # (n, x, y) -> state
    map_g: Callable          # (n, x, y, z) -> state
    noise_sampler: Callable  # (n, rng) -> noise vector
    gamma: float
    f0: float
    f1: float
    l1: float
    g0: float
    m0: float
    b: float
    centered_g: bool = False
    psi: Callable = field(default=lambda z: float(np.linalg.norm(z)))
    m_bar_f2: float = None   # only needed at the boundary f0 = (1+gamma)/2

    def __post_init__(self):
        if self.centered_g:
            if not self.g0 < 0.5:
                raise ValueError(f"g0 = {self.g0} must be below 1/2 for centered G")
        else:
            # equality g0 = gamma < 1/2 is the boundary case, admissible
            # subject to boundary_case_check
            at_boundary = self.g0 == self.gamma < 0.5
            if not (self.g0 < min(self.gamma, 0.5) or at_boundary):
                raise ValueError(f"g0 = {self.g0} must be below min(gamma, 1/2)")
        if not max(self.l1, self.f1) < 0.5:
            raise ValueError("l1 and f1 must be below 1/2")
        boundary = (1 + self.gamma) / 2
        if self.f0 > boundary:
            raise ValueError(f"f0 = {self.f0} must not exceed (1+gamma)/2 = {boundary}")
        if self.f0 == boundary and not (self.m_bar_f2 is not None and self.m_bar_f2 <= 2 * self.m0):
            raise ValueError("f0 at the boundary requires declared m_bar_f2 <= 2 m0")

    def kernel_row(self, n, x, y):
        row = np.asarray(self.kernel(n, x, y), dtype=float)
        if row.shape != (self.n_modes,) or np.any(row < 0) or abs(row.sum() - 1.0) > _KERNEL_TOL:
            raise KernelNotStochastic(f"kernel row at (n={n}, y={y}) is not a distribution")
        return row


def step_switching(spec, n, x, y, rng):
    """One transition: sample the next mode, then move the state.

    A singleton mode space consumes no randomness for the mode draw, so a
    one-mode system is draw-for-draw identical to the equivalent Markov
    model.
    """
    x = as_vector(x, spec.dim)
    if not 0 <= y < spec.n_modes:
        raise ValueError(f"mode {y} outside range 0..{spec.n_modes - 1}")
    if spec.n_modes == 1:
        y_next = 0
        spec.kernel_row(n, x, y)
    else:
        row = spec.kernel_row(n, x, y)
        y_next = int(np.searchsorted(np.cumsum(row), rng.generator.random(), side="right"))
        y_next = min(y_next, spec.n_modes - 1)
    z = spec.noise_sampler(n, rng)
    x_next = (
        np.asarray(spec.map_l(n, x, y_next), dtype=float)
        + np.asarray(spec.map_f(n, x, y_next), dtype=float)
        + np.asarray(spec.map_g(n, x, y_next, z), dtype=float)
    )
    return x_next, y_next


def switching_process_model(spec, v_function=None):
    """ProcessModel over the joint state [x..., mode index].

    V defaults to ||x||^2 of the continuous part; the small set is the ball
    ||x|| <= b from the drift condition.
    """
    if v_function is None:
        v_function = lambda x: float(np.dot(x, x))

    def step(n, state, rng):
        x_next, y_next = step_switching(spec, n, state[:-1], int(state[-1]), rng)
        return np.append(x_next, float(y_next))

    def trajectory_v(state0, horizon, rng):
        # draw-for-draw identical to iterating step, with the per-step
        # validation hoisted to the first transition
        x = np.array(state0[:-1], dtype=float)
        y = int(state0[-1])
        out = np.empty(horizon + 1)
        out[0] = v_function(x)
        gen = rng.generator
        n_modes, kernel = spec.n_modes, spec.kernel
        map_l, map_f, map_g, sampler = spec.map_l, spec.map_f, spec.map_g, spec.noise_sampler
        for n in range(horizon):
            if n == 0:
                spec.kernel_row(n, x, y)
            if n_modes == 1:
                y = 0
            else:
                u = gen.random()
                row = kernel(n, x, y)
                acc = 0.0
                y_next = n_modes - 1
                for j in range(n_modes):
                    acc += row[j]
                    if u < acc:
                        y_next = j
                        break
                y = y_next
            z = sampler(n, rng)
            x = map_l(n, x, y) + map_f(n, x, y) + map_g(n, x, y, z)
            out[n + 1] = v_function(x)
        return out

    return ProcessModel(
        dim=spec.dim + 1,
        step=step,
        lyapunov_v=lambda state: v_function(state[:-1]),
        region_d=lambda state: float(np.linalg.norm(state[:-1])) <= spec.b,
        trajectory_v=trajectory_v,
    )


@dataclass(frozen=True)
class SwitchDriftProbe:
    time: int
    state: np.ndarray
    mode: int
    value: float     # exact kernel-averaged <F, L>
    bound: float     # -m0 ||x||^{1+gamma}
    ok: bool


def check_switch_drift(spec, probe_states, probe_modes, times=(0,)):
    """Exact kernel-averaged drift inner product versus -m0 ||x||^{1+gamma}.

    Finite mode space makes the average an exact sum; probes must lie
    outside the ball ||x|| <= b.  Returns (probes, all_ok).
    """
    probes = []
    all_ok = True
    for n in times:
        for x in probe_states:
            x = as_vector(x, spec.dim)
            norm = float(np.linalg.norm(x))
            if norm <= spec.b:
                raise ValueError(f"probe {x} lies inside the ball ||x|| <= {spec.b}")
            for y in probe_modes:
                row = spec.kernel_row(n, x, y)
                value = sum(
                    row[yp] * float(np.dot(spec.map_f(n, x, yp), spec.map_l(n, x, yp)))
                    for yp in range(spec.n_modes)
                )
                bound = -spec.m0 * norm ** (1 + spec.gamma)
                ok = value <= bound + 1e-9 * max(1.0, abs(bound))
                all_ok = all_ok and ok
                probes.append(SwitchDriftProbe(n, x, y, float(value), bound, ok))
    return probes, all_ok


@dataclass(frozen=True)
class GrowthConstantReport:
    """Grid-max lower bounds for the kernel-averaged growth constants.

    Values are maxima of exact kernel averages over the probe grid - lower
    bounds for the true suprema, never certificates.
    """

    constants: dict      # (family, p) -> value, family in F, Fbar, G, L1, L2, Lbar
    m_star: dict         # p -> empirical estimate of sup_n E[Psi(xi_n)^p]
    l12_ok: bool         # averaged m_{L,1} at p = 2 stays <= 1

    def constant(self, family, p):
        return self.constants[(family, p)]


def estimate_growth_constants(spec, p_list, probe_states, times=(0,), rng=None,
                              noise_draws=64):
    """Per-family averaged growth constants maximized over a probe grid.

    The per-mode constants are implied pointwise from the declared
    exponents (e.g. m_F(y) = ||F(n,x,y)|| / (1+||x||)^f0) and then averaged
    exactly under the kernel; the noise factor of G is probed with sampled
    draws.
    """
    if not probe_states:
        raise ValueError("probe grid must be nonempty")
    if rng is None:
        from .linalg import RngStream
        rng = RngStream(0, 0)
    zero = np.zeros(spec.dim)
    z_draws = [spec.noise_sampler(0, rng) for _ in range(noise_draws)]
    psi_vals = np.array([spec.psi(z) for z in z_draws])

    families = ("F", "Fbar", "G", "L1", "L2", "Lbar")
    best = {(fam, p): 0.0 for fam in families for p in p_list}
    for n in times:
        for x in probe_states:
            x = as_vector(x, spec.dim)
            norm = float(np.linalg.norm(x))
            for cond_mode in range(spec.n_modes):
                row = spec.kernel_row(n, x, cond_mode)
                f_vals = [np.asarray(spec.map_f(n, x, y), dtype=float) for y in range(spec.n_modes)]
                l_vals = [np.asarray(spec.map_l(n, x, y), dtype=float) for y in range(spec.n_modes)]
                f_avg = sum(row[y] * f_vals[y] for y in range(spec.n_modes))
                l_avg = sum(row[y] * l_vals[y] for y in range(spec.n_modes))
                per_mode = {fam: np.zeros(spec.n_modes) for fam in families}
                for y in range(spec.n_modes):
                    per_mode["F"][y] = np.linalg.norm(f_vals[y]) / (1 + norm) ** spec.f0
                    per_mode["Fbar"][y] = (
                        np.linalg.norm(f_vals[y] - f_avg) / (1 + norm) ** spec.f1
                    )
                    per_mode["Lbar"][y] = (
                        np.linalg.norm(l_vals[y] - l_avg) / (1 + norm) ** spec.l1
                    )
                    l2 = float(np.linalg.norm(spec.map_l(n, zero, y)))
                    per_mode["L2"][y] = l2
                    if norm > 0:
                        per_mode["L1"][y] = max(0.0, (np.linalg.norm(l_vals[y]) - l2) / norm)
                    ratios = [
                        np.linalg.norm(spec.map_g(n, x, y, z)) / ((1 + norm) ** spec.g0 * pv)
                        for z, pv in zip(z_draws, psi_vals) if pv > 0
                    ]
                    per_mode["G"][y] = max(ratios) if ratios else 0.0
                for fam in families:
                    for p in p_list:
                        best[(fam, p)] = max(best[(fam, p)], float(row @ per_mode[fam] ** p))

    m_star = {p: float(np.mean(psi_vals ** p)) for p in p_list}
    return GrowthConstantReport(constants=best, m_star=m_star,
                                l12_ok=best.get(("L1", 2), 0.0) <= 1.0 + 1e-9)


def boundary_case_check(spec, m_bar_g2, m_star_sq, m_bar_f2=None):
    """Sharpened admissibility test at the boundary exponent g0 = gamma < 1/2.

    With non-centered G the strict inequality g0 < gamma can be relaxed to
    equality provided (m_bar_G2 m*^2)^{1/2} < m0, with an extra m_bar_F2/2
    term when f0 also sits at its boundary (1+gamma)/2.
    """
    if spec.centered_g:
        raise NotBoundaryCase("boundary case applies to non-centered G only")
    if spec.g0 != spec.gamma:
        raise NotBoundaryCase(f"g0 = {spec.g0} differs from gamma = {spec.gamma}")
    if spec.gamma >= 0.5:
        raise NotBoundaryCase("boundary case requires gamma < 1/2")
    noise_term = float(np.sqrt(m_bar_g2 * m_star_sq))
    if spec.f0 < (1 + spec.gamma) / 2:
        return noise_term < spec.m0
    if m_bar_f2 is None:
        raise ValueError("f0 at its boundary requires m_bar_f2")
    return noise_term + m_bar_f2 / 2 < spec.m0
