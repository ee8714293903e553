"""Small dense linear algebra and the deterministic random-stream contract.

States are plain 1-d numpy arrays, matrices 2-d arrays. Everything here is
desk scale (d of order 10), so robustness beats asymptotics.
"""

import numpy as np

from .errors import DimensionMismatch, RankDeficient

RANK_RTOL = 1e-12
GRAM_COND_LIMIT = 1e12


class RngStream:
    """Reproducible random stream keyed by (seed, stream_id).

    Equal (seed, stream_id) pairs yield bitwise-identical draw sequences;
    distinct stream ids give independent-quality streams. Single-owner by
    convention: never share one instance across workers, derive per-worker
    streams with distinct ids instead.
    """

    def __init__(self, seed, stream_id=0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.generator = np.random.Generator(
            np.random.Philox(key=self.seed, counter=0).jumped(self.stream_id)
        )

    def spawn(self, stream_id):
        """Fresh stream with the same seed and a different id."""
        return RngStream(self.seed, stream_id)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def as_vector(x, dim=None):
    """Validate and return ``x`` as a finite 1-d float array."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected dim {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise DimensionMismatch("vector has non-finite entries")
    return v


def numerical_rank(m):
    """Count of singular values above RANK_RTOL times the largest; 0 for the zero matrix."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > RANK_RTOL * sv[0]))


def right_pseudoinverse(m):
    """Right inverse M^T (M M^T)^{-1} of a full-row-rank matrix.

    Solves the (symmetric) normal equations directly; falls back to the SVD
    pseudoinverse when the Gram matrix is too ill-conditioned for that to be
    trustworthy.  Raises RankDeficient when the numerical rank is below the
    row count.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    rows, cols = m.shape
    if rows > cols or numerical_rank(m) < rows:
        raise RankDeficient(f"matrix {rows}x{cols} does not have full row rank")
    gram = m @ m.T
    if np.linalg.cond(gram) > GRAM_COND_LIMIT:
        return np.linalg.pinv(m)
    return np.linalg.solve(gram, m).T


def operator_norm(m):
    """Largest singular value."""
    return float(np.linalg.norm(np.atleast_2d(np.asarray(m, dtype=float)), 2))


def sample_gaussian(rng, dim, mean=None, cov_diag=None):
    """Diagonal-covariance Gaussian draw; degenerates to ``mean`` when cov_diag is 0."""
    mean = np.zeros(dim) if mean is None else as_vector(mean, dim)
    cov_diag = np.ones(dim) if cov_diag is None else as_vector(cov_diag, dim)
    if np.any(cov_diag < 0):
        raise DimensionMismatch("cov_diag entries must be nonnegative")
    return mean + np.sqrt(cov_diag) * rng.generator.standard_normal(dim)


def sample_uniform_box(rng, dim, low, high):
    """Uniform draw on the axis-aligned box [low, high]."""
    low = as_vector(low, dim)
    high = as_vector(high, dim)
    return rng.generator.uniform(low, high)


def sample_shifted_exponential(rng, dim, rate=1.0, shift=0.0):
    """shift + Exponential(rate) per coordinate; support [shift, inf)."""
    return shift + rng.generator.exponential(1.0 / rate, size=dim)
