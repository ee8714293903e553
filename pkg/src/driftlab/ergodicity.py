"""Finite-chain ergodicity oracle, signed-measure norms, and grid discretizers.

Ergodicity claims about continuum Markov models are checked exactly on
finite surrogates: enumerated chains with a row-stochastic matrix and
per-state values of the target function V.  Multiplicative models
X' = L(x) + F(x) + G(x) xi with a noise density are discretized onto a
truncated grid by midpoint quadrature of the transition density.
"""

import numpy as np
from dataclasses import dataclass
from math import gcd

from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import (
    DimensionMismatch,
    ExcessiveTruncation,
    Periodic,
    Reducible,
    SingularDiffusion,
)

_ROWSUM_TOL = 1e-12


@dataclass(frozen=True)
class FiniteChain:
    """Enumerated states, row-stochastic transition matrix, per-state V."""

    states: np.ndarray       # (n, d) state coordinates
    matrix: np.ndarray       # (n, n) row-stochastic
    v_values: np.ndarray     # (n,) nonnegative

    def __post_init__(self):
        p = self.matrix
        if np.any(p < 0) or np.any(np.abs(p.sum(axis=1) - 1.0) > _ROWSUM_TOL):
            raise ValueError("transition matrix is not row-stochastic")
        if np.any(self.v_values < 0):
            raise ValueError("V values must be nonnegative")

    def to_csv(self, states_path, matrix_path):
        np.savetxt(states_path, np.column_stack([self.states, self.v_values]),
                   delimiter=",", header="state...,V", comments="")
        np.savetxt(matrix_path, self.matrix, delimiter=",")

    @classmethod
    def from_csv(cls, states_path, matrix_path):
        table = np.loadtxt(states_path, delimiter=",", skiprows=1, ndmin=2)
        matrix = np.loadtxt(matrix_path, delimiter=",", ndmin=2)
        return cls(states=table[:, :-1], matrix=matrix, v_values=table[:, -1])


@dataclass(frozen=True)
class SignedMeasure:
    """Finite-support signed measure: distinct support indices with weights."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(set(self.support.tolist())) != len(self.support):
            raise ValueError("support indices must be distinct")


def tv_norm(weights):
    """Total-variation norm: sum of |weights| (= 2 sup_A |nu(A)|)."""
    return float(np.sum(np.abs(np.asarray(weights, dtype=float))))


def g_norm(weights, g):
    """sup over |f| <= g of |sum f_i nu_i|, exactly sum g_i |nu_i|.

    The maximizer is f_i = g_i sign(nu_i), so on finite spaces the norm
    equals |nu|(g) and the general sandwich |nu|(g)/2 <= ||nu||_g <= |nu|(g)
    holds with its upper bound attained.
    """
    weights = np.asarray(weights, dtype=float)
    g = np.asarray(g, dtype=float)
    if weights.shape != g.shape:
        raise DimensionMismatch("weights and g must have equal length")
    if np.any(g < 0):
        raise ValueError("g must be nonnegative")
    return float(np.sum(g * np.abs(weights)))


def _support_graph(matrix):
    return csr_matrix(matrix > 0)


def _check_irreducible(matrix):
    n_comp, _ = connected_components(_support_graph(matrix), connection="strong")
    if n_comp != 1:
        raise Reducible(f"positive-entry graph has {n_comp} strongly connected components")


def _check_aperiodic(matrix):
    # period = gcd over edges (u, v) of level[u] + 1 - level[v] on a BFS tree
    graph = _support_graph(matrix)
    order, _ = breadth_first_order(graph, 0, return_predecessors=True)
    level = np.full(matrix.shape[0], -1)
    level[0] = 0
    for u in order:
        for v in graph.indices[graph.indptr[u]:graph.indptr[u + 1]]:
            if level[v] < 0:
                level[v] = level[u] + 1
    period = 0
    rows, cols = np.nonzero(matrix > 0)
    for u, v in zip(rows, cols):
        period = gcd(period, level[u] + 1 - level[v])
    if abs(period) != 1:
        raise Periodic(f"chain has period {abs(period)}")


def stationary_distribution(chain):
    """Solve pi P = pi, sum pi = 1 by a direct linear solve.

    Requires irreducibility (strong connectivity of the support graph);
    the residual ||pi P - pi||_inf is driven below 1e-12.
    """
    p = chain.matrix
    _check_irreducible(p)
    n = p.shape[0]
    a = np.vstack([p.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    pi = np.maximum(pi, 0.0)
    pi /= pi.sum()
    # one power-iteration polish pass keeps the residual at solver precision
    for _ in range(5):
        if np.max(np.abs(pi @ p - pi)) <= 1e-13:
            break
        pi = pi @ p
        pi /= pi.sum()
    return pi


@dataclass(frozen=True)
class ConvergenceProfile:
    """Distances from the n-step law to the stationary law, per n."""

    n_grid: tuple
    tv: np.ndarray
    weighted: np.ndarray   # g-norm with g = V^r + 1
    r: float

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("n,tv,weighted\n")
            for n, t, w in zip(self.n_grid, self.tv, self.weighted):
                f.write(f"{n},{repr(float(t))},{repr(float(w))}\n")


def convergence_profile(chain, x0_index, r, n_grid):
    """TV and (V^r + 1)-weighted distances of P^n(x0, .) from pi.

    The chain must be irreducible and aperiodic; distributions are
    propagated by repeated vector-matrix products, so distances are exact
    up to floating point.
    """
    _check_irreducible(chain.matrix)
    _check_aperiodic(chain.matrix)
    pi = stationary_distribution(chain)
    g = chain.v_values ** r + 1.0
    n_grid = tuple(sorted(int(n) for n in n_grid))
    dist = np.zeros(chain.matrix.shape[0])
    dist[x0_index] = 1.0
    tv, weighted = [], []
    current = 0
    for n in n_grid:
        for _ in range(n - current):
            dist = dist @ chain.matrix
        current = n
        diff = dist - pi
        tv.append(tv_norm(diff))
        weighted.append(g_norm(diff, g))
    return ConvergenceProfile(n_grid=n_grid, tv=np.array(tv), weighted=np.array(weighted), r=r)


@dataclass(frozen=True)
class DiscretizationSpec:
    """Truncated-grid surrogate of X' = L(x) + F(x) + G(x) xi.

    ``density`` is the noise density of xi on R^{d'}; L, F map states to
    states and G maps a state to a d x d' matrix.  Mass falling beyond the
    truncation radius is clamped to the boundary cells.
    """

    radius: float
    points_per_axis: int
    drift_l: callable
    drift_f: callable
    diffusion_g: callable
    density: callable
    dim: int = 1

    def __post_init__(self):
        if self.points_per_axis < 3 or self.radius <= 0:
            raise ValueError("need at least 3 points per axis and a positive radius")


def discretize_multiplicative(spec, v_function=None, max_renormalization=1.05):
    """Finite chain whose row i is the law of L(x_i)+F(x_i)+G(x_i) xi on the grid.

    Cell masses come from midpoint quadrature of the transition density
    q(x, y) = det(G G^T)^{-1/2} rho(G_R^-(y - L(x) - F(x))); mass the grid
    fails to capture is assigned to the nearest boundary cell and each row
    is renormalized, with the renormalization factor capped at
    ``max_renormalization``.
    """
    from .linalg import right_pseudoinverse

    if v_function is None:
        v_function = lambda x: float(np.linalg.norm(x))
    d = spec.dim
    axis = np.linspace(-spec.radius, spec.radius, spec.points_per_axis)
    cell = axis[1] - axis[0]
    if d == 1:
        states = axis.reshape(-1, 1)
    else:
        mesh = np.meshgrid(*([axis] * d), indexing="ij")
        states = np.column_stack([m.ravel() for m in mesh])
    volume = cell ** d
    n = states.shape[0]

    matrix = np.empty((n, n))
    for i in range(n):
        x = states[i]
        gmat = np.atleast_2d(np.asarray(spec.diffusion_g(x), dtype=float))
        gram = gmat @ gmat.T
        det = np.linalg.det(gram)
        if det <= 0:
            raise SingularDiffusion(f"G G^T singular at grid point {x}")
        g_right = right_pseudoinverse(gmat)
        center = np.asarray(spec.drift_l(x), dtype=float) + np.asarray(spec.drift_f(x), dtype=float)
        resid = (states - center) @ g_right.T
        dens = np.array([spec.density(z) for z in resid]) / np.sqrt(det)
        row = dens * volume
        captured = row.sum()
        if captured <= 0 or 1.0 / captured > max_renormalization:
            raise ExcessiveTruncation(
                f"row {i} captures only {captured:.4f} of its mass; enlarge the radius"
            )
        if captured < 1.0:
            # clamp the tail mass to boundary cells, split by boundary density
            boundary = np.any(np.abs(states) >= spec.radius - 0.5 * cell, axis=1)
            weights = row * boundary
            if weights.sum() > 0:
                row += (1.0 - captured) * weights / weights.sum()
            else:
                target = np.clip(center, -spec.radius, spec.radius)
                j = int(np.argmin(np.sum((states - target) ** 2, axis=1)))
                row[j] += 1.0 - captured
        matrix[i] = row / row.sum()

    v_values = np.array([v_function(x) for x in states])
    return FiniteChain(states=states, matrix=matrix, v_values=v_values)


def chain_moment(chain, pi, power=2.0, center=False):
    """Moment of the state coordinate (first axis) under a distribution pi."""
    x = chain.states[:, 0]
    if center:
        x = x - float(pi @ x)
    return float(pi @ (x ** power))
