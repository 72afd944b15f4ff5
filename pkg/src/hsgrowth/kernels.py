"""Closed-form kernels for the upper half-space.

Sign convention: the fundamental solution E is negative, so the Green
function G = E(x-y) - E(x-y*) is <= 0 on H x H and vanishes for boundary y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import reflect

__all__ = [
    "SingularityError",
    "KernelConstants",
    "surface_area",
    "fundamental_solution",
    "green",
    "poisson_kernel",
    "green_abs_bound",
    "kernel_far_bound",
]


class SingularityError(ValueError):
    """Evaluation point collides with a kernel singularity."""


@lru_cache(maxsize=None)
def _gamma_half_integer(k: int) -> float:
    # Gamma(k/2) for integer k >= 1, by the recurrence from Gamma(1/2) and
    # Gamma(1); exact products of sqrt(pi) and rationals.
    if k == 1:
        return math.sqrt(math.pi)
    if k == 2:
        return 1.0
    return (k / 2.0 - 1.0) * _gamma_half_integer(k - 2)


def surface_area(n: int) -> float:
    """Surface area of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 2:
        raise ValueError(f"surface_area requires n >= 2, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / _gamma_half_integer(n)


@dataclass(frozen=True)
class KernelConstants:
    n: int
    omega: float
    r_const: float

    @classmethod
    def for_dim(cls, n: int) -> "KernelConstants":
        if n < 3:
            raise ValueError(f"kernel constants require n >= 3, got {n}")
        omega = surface_area(n)
        return cls(n=n, omega=omega, r_const=1.0 / ((n - 2) * omega))


def _guard_singularity(dist, x, y):
    scale = 1e-14 * (1.0 + np.linalg.norm(x) + np.linalg.norm(y))
    if dist < scale:
        raise SingularityError(
            f"evaluation within {scale:.3e} of the kernel singularity"
        )


def fundamental_solution(x) -> float:
    """E(x) = -r_n |x|^{2-n}; strictly negative away from the origin."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    r = float(np.linalg.norm(x))
    _guard_singularity(r, x, np.zeros_like(x))
    c = KernelConstants.for_dim(n)
    return -c.r_const * r ** (2 - n)


def green(x, y) -> float:
    """Half-space Green function E(x-y) - E(x-y*); <= 0 for x, y in H."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1]
    c = KernelConstants.for_dim(n)
    d = float(np.linalg.norm(x - y))
    _guard_singularity(d, x, y)
    d_star = float(np.linalg.norm(x - reflect(y)))
    return -c.r_const * (d ** (2 - n) - d_star ** (2 - n))


def poisson_kernel(x, yprime) -> float:
    """P(x, y') = 2 x_n / (omega_n |x - (y',0)|^n); strictly positive."""
    x = np.asarray(x, dtype=float)
    yprime = np.asarray(yprime, dtype=float)
    n = x.shape[-1]
    if not x[-1] > 0.0:
        raise ValueError("poisson_kernel requires x_n > 0")
    c = KernelConstants.for_dim(n)
    diff = x[:-1] - yprime
    dist = math.hypot(float(np.linalg.norm(diff)), float(x[-1]))
    return 2.0 * float(x[-1]) / (c.omega * dist**n)


def green_abs_bound(x, y) -> float:
    """Upper bound 2 x_n y_n / (omega_n |x-y|^n) for |G(x, y)|."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1]
    c = KernelConstants.for_dim(n)
    d = float(np.linalg.norm(x - y))
    _guard_singularity(d, x, y)
    return 2.0 * float(x[-1]) * float(y[-1]) / (c.omega * d**n)


def kernel_far_bound(x, y) -> float:
    """Branch bound for 1/|x-y|^n: 2^n/|x|^n if |y| <= |x|/2, else 2^n/|y|^n."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1]
    d = float(np.linalg.norm(x - y))
    _guard_singularity(d, x, y)
    ax = float(np.linalg.norm(x))
    ay = float(np.linalg.norm(y))
    if ay <= ax / 2.0:
        return 2.0**n / ax**n
    return 2.0**n / ay**n
