import numpy as np
import pytest

from driftlab.errors import OutOfDomain
from driftlab.exponents import (
    MAIN,
    PLATEAU,
    SigmaBarQuery,
    SigmaQuery,
    consistency_link,
    sigma,
    sigma_bar,
)

TABULATED_SIGMA = [
    (0.0, 4.0, 3.0, MAIN),
    (1.0, 6.0, 3.5, MAIN),
    (0.2, 3.0, 1.0, PLATEAU),
    (0.1, 3.0, 1.7, MAIN),
]

TABULATED_SIGMA_BAR = [
    (float("inf"), 3.0, 2.0, MAIN),
    (1.0, 5.0, 1.5, MAIN),
    (2.0, 3.0, 1.0, PLATEAU),
]


@pytest.mark.parametrize("s,p,value,branch", TABULATED_SIGMA)
def test_sigma_tabulated(s, p, value, branch):
    got, label = sigma(SigmaQuery(s=s, p=p))
    assert got == pytest.approx(value, abs=1e-15)
    assert label == branch


@pytest.mark.parametrize("theta,p,value,branch", TABULATED_SIGMA_BAR)
def test_sigma_bar_tabulated(theta, p, value, branch):
    got, label = sigma_bar(SigmaBarQuery(theta=theta, p=p))
    assert got == pytest.approx(value, abs=1e-15)
    assert label == branch


def test_sigma_domain_rejections():
    with pytest.raises(OutOfDomain):
        SigmaQuery(s=0.0, p=2.0)
    with pytest.raises(OutOfDomain):
        SigmaQuery(s=-0.1, p=4.0)
    with pytest.raises(OutOfDomain):
        SigmaQuery(s=1.0, p=4.0)  # s must stay below p/2 - 1 = 1
    with pytest.raises(OutOfDomain):
        SigmaBarQuery(theta=0.5, p=4.0)
    with pytest.raises(OutOfDomain):
        SigmaBarQuery(theta=2.0, p=1.5)


def test_p4_uses_unrestricted_branch():
    # p = 4 never enters the plateau, for either parametrization
    for s in np.linspace(0.0, 0.999, 50):
        _, label = sigma(SigmaQuery(s=float(s), p=4.0))
        assert label == MAIN
    for theta in (1.0, 2.0, 2.0001, 3.0, 100.0):
        _, label = sigma_bar(SigmaBarQuery(theta=theta, p=4.0))
        assert label == MAIN


def test_sigma_lower_bound_random_grid():
    # sigma(s, p) >= p/2 - 1 over 10^4 random valid pairs
    rng = np.random.default_rng(20250825)
    for _ in range(10000):
        p = 2.0 + 6.0 * rng.random() + 1e-9
        s = (p / 2 - 1) * rng.random() * 0.9999
        value, _ = sigma(SigmaQuery(s=float(s), p=float(p)))
        assert value >= p / 2 - 1 - 1e-12


def test_sigma_monotone_in_s():
    for p in (2.5, 3.0, 3.7, 4.0, 5.0, 8.0):
        grid = np.linspace(0.0, p / 2 - 1, 200, endpoint=False)
        vals = [sigma(SigmaQuery(s=float(s), p=p))[0] for s in grid]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_sigma_continuous_at_upper_branch_boundary():
    # at s = 1 - 2/p the main formula equals the plateau value p - 2
    for p in (2.5, 3.0, 3.5, 3.9):
        s = 1 - 2 / p
        assert p * (1 - s / (p - 2)) - 1 == pytest.approx(p - 2, abs=1e-12)


def test_sigma_bar_monotone_in_theta_on_main_branch():
    for p in (5.0, 8.0):
        grid = np.linspace(1.0, 50.0, 200)
        vals = [sigma_bar(SigmaBarQuery(theta=float(t), p=p))[0] for t in grid]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("s,p", [(0.2, 3.0), (0.1, 3.0), (1.0, 6.0)])
def test_consistency_link_tabulated(s, p):
    a, b = consistency_link(s, p)
    assert a == pytest.approx(b, abs=1e-12)


def test_consistency_link_rejects_s_zero():
    with pytest.raises(OutOfDomain):
        consistency_link(0.0, 4.0)
