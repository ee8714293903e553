"""Bounded-input stabilization of X_{n+1} = A X_n + B u_n + xi_{n+1}.

The plant has an orthogonal A and is reachable in k steps, so the stacked
reachability matrix R_k = [B AB ... A^{k-1}B] has a right inverse.  The
k-periodic policy reads the state only at times floor(n/k) k, saturates it
to a ball whose radius keeps every physical control inside the authority
limit, and applies the deadbeat correction -R_k^- A^k sat(anchor) spread
over the next k steps.
"""

import numpy as np
from dataclasses import dataclass

from .errors import NotOrthogonal, NotReachable
from .linalg import as_vector, numerical_rank, operator_norm, right_pseudoinverse
from .process import ProcessModel, simulate_ensemble

_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class ControlPlant:
    """(A, B, k, U_max) with a mean-zero noise sampler."""

    a: np.ndarray
    b: np.ndarray
    k: int
    u_max: float
    noise_sampler: callable   # (n, rng) -> state-dimension vector

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        d = a.shape[0]
        if np.max(np.abs(a.T @ a - np.eye(d))) > _ORTHO_TOL:
            raise NotOrthogonal("A is not orthogonal within tolerance")
        if self.k < 1 or self.u_max <= 0:
            raise ValueError("need k >= 1 and U_max > 0")

    @property
    def dim(self):
        return np.atleast_2d(np.asarray(self.a)).shape[0]

    @property
    def n_inputs(self):
        return np.atleast_2d(np.asarray(self.b)).shape[1]


def reachability_matrix(a, b, k):
    """R_k = [B AB ... A^{k-1}B], shape d x (k m)."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    blocks, power = [], np.eye(a.shape[0])
    for _ in range(k):
        blocks.append(power @ b)
        power = a @ power
    return np.hstack(blocks)


@dataclass(frozen=True)
class PolicyArtifacts:
    """Everything derived from the plant that the controller needs.

    The lifted control vector stacks the k physical controls in reverse:
    (u_{(n+1)k-1}, ..., u_{nk+1}, u_{nk}), so the control applied at
    physical offset l reads block k - l (1-indexed) of the lifted vector.
    """

    r_k: np.ndarray
    r_k_inv: np.ndarray      # right inverse, R_k R_k^- = I
    gain: np.ndarray         # R_k^- A^k
    u_hat_max: float         # saturation radius: ||gain|| * u_hat_max <= U_max
    k: int
    n_inputs: int
    u_max: float


def build_policy(plant):
    """Derive R_k, its right inverse, the lifted gain and saturation radius."""
    a = np.atleast_2d(np.asarray(plant.a, dtype=float))
    d = a.shape[0]
    r_k = reachability_matrix(plant.a, plant.b, plant.k)
    if numerical_rank(r_k) < d:
        raise NotReachable(f"rank(R_k) = {numerical_rank(r_k)} < d = {d}")
    r_k_inv = right_pseudoinverse(r_k)
    gain = r_k_inv @ np.linalg.matrix_power(a, plant.k)
    u_hat_max = plant.u_max / operator_norm(gain)
    return PolicyArtifacts(
        r_k=r_k,
        r_k_inv=r_k_inv,
        gain=gain,
        u_hat_max=u_hat_max,
        k=plant.k,
        n_inputs=plant.n_inputs,
        u_max=plant.u_max,
    )


def sat(y, cap):
    """Radial projection onto the closed ball of radius cap."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    y = np.asarray(y, dtype=float)
    norm = float(np.linalg.norm(y))
    if norm <= cap:
        return y
    return cap * y / norm


def lifted_control(policy, anchor_state):
    """Stacked k-block control -gain . sat(anchor), reversed physical order."""
    return -policy.gain @ sat(anchor_state, policy.u_hat_max)


def control_input(policy, n, anchor_state):
    """Physical control u_n from the anchor state observed at time floor(n/k) k.

    Selects block k - (n mod k) of the lifted control (the printed layout is
    reversed), guaranteeing ||u_n|| <= U_max by construction.
    """
    u_hat = lifted_control(policy, anchor_state)
    offset = n % policy.k
    block = policy.k - offset            # 1-indexed from the top of u_hat
    m = policy.n_inputs
    start = (block - 1) * m
    return u_hat[start:start + m]


def controlled_process_model(plant, policy, v_function=None):
    """Closed-loop ProcessModel over the state [x..., anchor...].

    The anchor copy of the state refreshes every k steps; intermediate
    states are deliberately ignored by the controller.
    """
    a = np.atleast_2d(np.asarray(plant.a, dtype=float))
    b = np.atleast_2d(np.asarray(plant.b, dtype=float))
    d = a.shape[0]
    if v_function is None:
        v_function = lambda x: float(np.dot(x, x))

    def step(n, state, rng):
        x, anchor = state[:d], state[d:]
        if n % plant.k == 0:
            anchor = x
        u = control_input(policy, n, anchor)
        x_next = a @ x + b @ u + plant.noise_sampler(n, rng)
        return np.concatenate([x_next, anchor])

    def trajectory_v(state0, horizon, rng):
        # same draws as iterating step; the lifted control is computed once
        # per anchor refresh instead of once per physical step
        x = np.array(state0[:d], dtype=float)
        out = np.empty(horizon + 1)
        out[0] = v_function(x)
        k, m, gain, cap = plant.k, policy.n_inputs, policy.gain, policy.u_hat_max
        sampler = plant.noise_sampler
        u_hat = -gain @ sat(state0[d:], cap)
        for n in range(horizon):
            offset = n % k
            if offset == 0:
                u_hat = -gain @ sat(x, cap)
            start = (k - offset - 1) * m
            u = u_hat[start:start + m]
            x = a @ x + b @ u + sampler(n, rng)
            out[n + 1] = v_function(x)
        return out

    return ProcessModel(
        dim=2 * d,
        step=step,
        lyapunov_v=lambda state: v_function(state[:d]),
        region_d=lambda state: float(np.linalg.norm(state[:d])) <= policy.u_hat_max,
        trajectory_v=trajectory_v,
    )


def simulate_controlled(plant, policy, x0, horizon, trajectories, base_seed,
                        r_values=(2.0,)):
    """Closed-loop ensemble moments of ||X_n||^r under the k-periodic policy."""
    x0 = as_vector(x0, plant.dim)
    model = controlled_process_model(plant, policy, v_function=lambda x: float(np.linalg.norm(x)))
    return simulate_ensemble(model, np.concatenate([x0, x0]), horizon, trajectories,
                             base_seed, r_values=r_values)


def simulate_uncontrolled(plant, x0, horizon, trajectories, base_seed, r_values=(2.0,)):
    """Open-loop (u = 0) reference run; for orthogonal A the second moment grows linearly."""
    a = np.atleast_2d(np.asarray(plant.a, dtype=float))
    x0 = as_vector(x0, plant.dim)

    def step(n, x, rng):
        return a @ x + plant.noise_sampler(n, rng)

    def trajectory_v(y0, horizon, rng):
        y = np.array(y0, dtype=float)
        out = np.empty(horizon + 1)
        out[0] = np.linalg.norm(y)
        sampler = plant.noise_sampler
        for n in range(horizon):
            y = a @ y + sampler(n, rng)
            out[n + 1] = np.linalg.norm(y)
        return out

    model = ProcessModel(dim=plant.dim, step=step,
                         lyapunov_v=lambda x: float(np.linalg.norm(x)),
                         trajectory_v=trajectory_v)
    return simulate_ensemble(model, x0, horizon, trajectories, base_seed, r_values=r_values)


def moment_bound_constants(plant, policy, r, c0, m_star_r):
    """Off-anchor moment constants c_l = 3^{r-1}(||A||^r c_{l-1} + ||gain||^r U_max^r + m*^r).

    c0 bounds sup_n E||X_{nk}||^r at the anchor times; the recursion carries
    the bound across the k - 1 intermediate offsets.
    """
    if c0 <= 0 or m_star_r < 0:
        raise ValueError("need c0 > 0 and m_star_r >= 0")
    a_norm = operator_norm(plant.a)
    gain_norm = operator_norm(policy.gain)
    out = [float(c0)]
    for _ in range(1, plant.k):
        out.append(3 ** (r - 1) * (a_norm ** r * out[-1]
                                   + gain_norm ** r * plant.u_max ** r
                                   + m_star_r))
    return out
