"""Shipped demonstration models, one per capability of the toolkit."""

import numpy as np

from .control import ControlPlant
from .ergodicity import DiscretizationSpec
from .process import additive_reference, counterexample_reference
from .switching import SwitchingSystemSpec

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def std_normal_density(z):
    z = np.atleast_1d(z)
    return float(np.prod(_INV_SQRT_2PI * np.exp(-0.5 * z * z)))


def additive_demo(noise_mean=1.0):
    """Halving chain driven by nonnegative exponential noise of the given mean."""
    return additive_reference(
        noise_sampler=lambda rng, size: rng.generator.exponential(noise_mean, size),
        noise_mean=noise_mean,
    )


def counterexample_demo():
    return counterexample_reference()


def _rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def rot_switch_demo(m0=0.5, gamma=0.5, g0=0.3, sigma=(0.4, 0.8)):
    """Two-mode planar system: per-mode rotations, radial pull, multiplicative noise.

    The mode alternates deterministically (one-hot kernel rows), so the
    mode-centered parts of L and F vanish identically and the declared
    centered exponents are exactly 0.  The pull -m0 x / max(1, ||x||^{1-gamma})
    is carried through the mode rotation, giving the kernel-averaged drift
    inner product -m0 ||x||^{1+gamma} exactly outside the unit ball.
    """
    rotations = (_rotation(0.7), _rotation(-1.1))
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])

    def kernel(n, x, y):
        return flip[y]

    def map_l(n, x, y):
        return rotations[y] @ x

    def map_f(n, x, y):
        norm = np.linalg.norm(x)
        return -m0 * (rotations[y] @ x) / max(1.0, norm ** (1 - gamma))

    def map_g(n, x, y, z):
        return sigma[y] * (1 + np.linalg.norm(x)) ** g0 * z

    return SwitchingSystemSpec(
        dim=2,
        n_modes=2,
        kernel=kernel,
        map_l=map_l,
        map_f=map_f,
        map_g=map_g,
        noise_sampler=lambda n, rng: rng.generator.standard_normal(2),
        gamma=gamma,
        f0=gamma,          # ||F|| <= m0 (1+||x||)^gamma
        f1=0.0,
        l1=0.0,
        g0=g0,
        m0=m0,
        b=1.0,
        centered_g=True,
    )


def ou_euler_maruyama_spec(delta=0.1, radius=7.0, points=281):
    """Euler time-stepping of the unit Ornstein-Uhlenbeck diffusion.

    X' = (1 - delta) X + sqrt(delta) xi with standard Gaussian xi; the
    exact stationary variance of this AR(1) chain is delta / (1 - (1-delta)^2)
    = 1 / (2 - delta).
    """
    return DiscretizationSpec(
        radius=radius,
        points_per_axis=points,
        drift_l=lambda x: x,
        drift_f=lambda x: -delta * x,
        diffusion_g=lambda x: np.sqrt(delta) * np.eye(1),
        density=std_normal_density,
        dim=1,
    )


def ou_step_factory(delta=0.1):
    def step(n, x, rng):
        return (1 - delta) * x + np.sqrt(delta) * rng.generator.standard_normal(1)
    return step


def cubic_drift_spec(c=0.5, g0=0.3, radius=8.0, points=321):
    """Multiplicative 1-d chain X' = X - c X^3/(1+X^2) + (1+|X|)^{g0} xi."""
    return DiscretizationSpec(
        radius=radius,
        points_per_axis=points,
        drift_l=lambda x: x,
        drift_f=lambda x: -c * x ** 3 / (1 + x ** 2),
        diffusion_g=lambda x: (1 + np.abs(x)) ** g0 * np.eye(1),
        density=std_normal_density,
        dim=1,
    )


def cubic_drift_step_factory(c=0.5, g0=0.3):
    def step(n, x, rng):
        pull = x - c * x ** 3 / (1 + x ** 2)
        return pull + (1 + np.abs(x)) ** g0 * rng.generator.standard_normal(1)
    return step


def rotation_plant_demo(u_max=0.5, noise_var=0.1):
    """Quarter-turn planar plant, single input, reachable in k = 2 steps."""
    sd = np.sqrt(noise_var)
    return ControlPlant(
        a=np.array([[0.0, 1.0], [-1.0, 0.0]]),
        b=np.array([[1.0], [0.0]]),
        k=2,
        u_max=u_max,
        noise_sampler=lambda n, rng: sd * rng.generator.standard_normal(2),
    )
