"""Validated parameter sets, half-space geometry, and annular region maps.

Points in the half-space H = {x in R^n : x_n > 0} are plain numpy arrays of
length n; boundary points are arrays of length n-1 identified with (y', 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Mode",
    "RegionId",
    "ParamSet",
    "ParamError",
    "validate_params",
    "reflect",
    "classify_boundary_region",
    "classify_halfspace_region",
    "check_halfspace_point",
]

_TOL = 1e-12


class Mode(Enum):
    THEOREM1 = "theorem-1"
    THEOREM2 = "theorem-2"


class RegionId(Enum):
    R1 = 1
    R2 = 2
    R3 = 3
    R4 = 4


class ParamError(ValueError):
    """Raised when a parameter tuple violates the admissible ranges."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class ParamSet:
    """Admissible tuple (n, p, q, gamma, alpha) with derived exponents.

    q is math.inf when p == 1; every consumer of 1/q uses `one_over_q`,
    which is 0 in that case.  beta = p*n - alpha is the covering exponent;
    beta == 0 is the degenerate corner (alpha = n, p = 1) where the
    exceptional cover reduces to finitely many balls.
    """

    n: int
    p: float
    gamma: float
    alpha: float
    mode: Mode

    @property
    def q(self) -> float:
        return math.inf if self.p == 1.0 else self.p / (self.p - 1.0)

    @property
    def one_over_q(self) -> float:
        return 1.0 - 1.0 / self.p

    @property
    def beta(self) -> float:
        return self.p * self.n - self.alpha

    @property
    def finite_sum_corner(self) -> bool:
        return abs(self.beta) <= _TOL

    @property
    def log_boundary(self) -> bool:
        """True at the exact lower gamma boundary for p > 1 (log-variant)."""
        return self.p > 1.0 and abs(
            self.gamma + (self.n - 1) * (self.p - 1)
        ) <= _TOL

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "mode": self.mode.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParamSet":
        return validate_params(
            int(d["n"]),
            float(d["p"]),
            float(d["gamma"]),
            float(d["alpha"]),
            Mode(d["mode"]),
        )


def validate_params(n, p, gamma, alpha, mode) -> ParamSet:
    """Check every admissibility inequality and return the ParamSet.

    Raises ParamError listing each violated inequality.  The lower gamma
    boundary gamma = -(n-1)(p-1) for p > 1 is accepted (it is the
    log-variant case) while the upper boundary (n-1)+p stays strict.
    """
    if isinstance(mode, str):
        mode = Mode(mode)
    violations = []
    if n < 3:
        violations.append(f"n = {n} < 3")
    if p < 1.0:
        violations.append(f"p = {p} < 1")
    if p == 1.0:
        if not (0.0 < gamma <= n):
            violations.append(f"gamma = {gamma} outside (0, n] for p = 1")
    elif p > 1.0:
        lo = -(n - 1) * (p - 1)
        hi = (n - 1) + p
        if gamma < lo - _TOL:
            violations.append(f"gamma = {gamma} < -(n-1)(p-1) = {lo}")
        if gamma >= hi:
            violations.append(f"gamma = {gamma} >= (n-1)+p = {hi}")
    if mode is Mode.THEOREM1:
        if not (0.0 < alpha <= n):
            violations.append(f"alpha = {alpha} outside (0, n] for theorem-1")
    else:
        if not (0.0 < alpha < 2.0):
            violations.append(f"alpha = {alpha} outside (0, 2) for theorem-2")
    if p >= 1.0 and p * n - alpha < -_TOL:
        violations.append(f"beta = p*n - alpha = {p * n - alpha} < 0")
    if violations:
        raise ParamError(violations)
    return ParamSet(n=int(n), p=float(p), gamma=float(gamma),
                    alpha=float(alpha), mode=mode)


def check_halfspace_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] < 3:
        raise ValueError(f"expected a point in R^n, n >= 3, got shape {x.shape}")
    if not x[-1] > 0.0:
        raise ValueError(f"point has x_n = {x[-1]} <= 0, not in the half-space")
    return x


def reflect(y) -> np.ndarray:
    """Reflection across the boundary plane: negate the last coordinate."""
    y = np.asarray(y, dtype=float)
    out = y.copy()
    out[..., -1] = -out[..., -1]
    return out


def _classify(abs_x: float, abs_y: float) -> RegionId:
    if abs_x < 2.0:
        raise ValueError(f"region split requires |x| >= 2, got |x| = {abs_x}")
    if abs_y <= 1.0:
        return RegionId.R4
    if abs_y <= abs_x / 2.0:
        return RegionId.R1
    if abs_y <= 2.0 * abs_x:
        return RegionId.R2
    return RegionId.R3


def classify_boundary_region(x, yprime) -> RegionId:
    """Annular region of the boundary point y' relative to |x|."""
    x = np.asarray(x, dtype=float)
    yprime = np.asarray(yprime, dtype=float)
    return _classify(float(np.linalg.norm(x)), float(np.linalg.norm(yprime)))


def classify_halfspace_region(x, y) -> RegionId:
    """Annular region of the half-space point y relative to |x|."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _classify(float(np.linalg.norm(x)), float(np.linalg.norm(y)))
