"""Moment-exponent functions for the uniform-bound theorems.

``sigma(s, p)`` gives the supremum of moment orders r with
sup_n E[V(X_n)^r] < infinity under the state-dependent jump bound with
growth exponent s; ``sigma_bar(theta, p)`` is the analogue when the
centered p-th jump moment is controlled in L^theta norm.  Both are exact
closed forms with a branch label, plus the boundary link between them.
"""

import math
from dataclasses import dataclass

from .errors import OutOfDomain

MAIN = "main"
PLATEAU = "plateau"


@dataclass(frozen=True)
class SigmaQuery:
    """Pair (s, p): jump-bound growth exponent s and moment order p."""

    s: float
    p: float

    def __post_init__(self):
        if self.p <= 2:
            raise OutOfDomain(f"p must exceed 2, got {self.p}")
        if not 0 <= self.s < self.p / 2 - 1:
            raise OutOfDomain(f"s must lie in [0, p/2-1) = [0, {self.p / 2 - 1}), got {self.s}")


@dataclass(frozen=True)
class SigmaBarQuery:
    """Pair (theta, p): L^theta norm index (theta = inf allowed) and moment order p."""

    theta: float
    p: float

    def __post_init__(self):
        if self.p <= 2:
            raise OutOfDomain(f"p must exceed 2, got {self.p}")
        if self.theta < 1:
            raise OutOfDomain(f"theta must be >= 1, got {self.theta}")


def sigma(q):
    """Exponent value and branch label for a SigmaQuery.

    Returns (value, label).  The plateau branch p-2 applies only for
    2 < p < 4 with s in [(p-2)^2/2p, 1-2/p); everywhere else the main
    formula p(1 - s/(p-2)) - 1 holds.  p = 4 belongs to the unrestricted
    branch.
    """
    s, p = q.s, q.p
    if 2 < p < 4 and (p - 2) ** 2 / (2 * p) <= s < 1 - 2 / p:
        return p - 2, PLATEAU
    return p * (1 - s / (p - 2)) - 1, MAIN


def sigma_bar(q):
    """Exponent value and branch label for a SigmaBarQuery.

    The plateau branch p-2 applies only for 2 < p < 4 with
    theta in (p/2, p/(p-2)]; otherwise the value is p(1 - 1/(2 theta)) - 1,
    reading 1/(2 theta) as 0 at theta = inf.  p = 4 is classified with the
    unrestricted branch, mirroring the s-parametrised function.
    """
    theta, p = q.theta, q.p
    if 2 < p < 4 and p / 2 < theta <= p / (p - 2):
        return p - 2, PLATEAU
    half_inv = 0.0 if math.isinf(theta) else 1 / (2 * theta)
    return p * (1 - half_inv) - 1, MAIN


def consistency_link(s, p):
    """Evaluate sigma(s,p) and sigma_bar at the matched index theta = (p-2)/(2s).

    The two formulas agree at this theta; the pair is returned so a test
    suite can assert the equality from independent evaluations.
    """
    if s <= 0:
        raise OutOfDomain("link requires s > 0 (s = 0 corresponds to theta = inf)")
    theta = (p - 2) / (2 * s)
    value_s, _ = sigma(SigmaQuery(s=s, p=p))
    value_theta, _ = sigma_bar(SigmaBarQuery(theta=theta, p=p))
    return value_s, value_theta
