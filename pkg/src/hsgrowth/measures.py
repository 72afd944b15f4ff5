"""Discrete positive measures, Green potentials, and the composite u = v + h.

Measures are finite atom lists, so ball masses and potentials are exact
sums; no quadrature error enters the covering machinery.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import core
from .kernels import KernelConstants, SingularityError, green_abs_bound
from .params import ParamSet

__all__ = [
    "DiscreteMeasure",
    "measure_condition_check",
    "weighted_measure",
    "green_potential",
    "subharmonic_value",
]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite list of (location, positive mass) atoms in R^n.

    domain is "half-space" (all last coordinates > 0) or "boundary"
    (all last coordinates == 0).
    """

    locations: np.ndarray  # (m, n)
    masses: np.ndarray  # (m,)
    domain: str = "half-space"

    def __post_init__(self):
        loc = np.atleast_2d(np.asarray(self.locations, dtype=float))
        if loc.size == 0:
            loc = loc.reshape(0, max(loc.shape[-1], 3) if loc.ndim else 3)
        mass = np.asarray(self.masses, dtype=float).reshape(-1)
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mass)
        if loc.shape[0] != mass.shape[0]:
            raise ValueError("locations and masses length mismatch")
        if np.any(mass <= 0.0):
            raise ValueError("all atom masses must be > 0")
        if self.domain == "half-space":
            if loc.shape[0] and not np.all(loc[:, -1] > 0.0):
                raise ValueError("half-space atoms need last coordinate > 0")
        elif self.domain == "boundary":
            if loc.shape[0] and not np.all(loc[:, -1] == 0.0):
                raise ValueError("boundary atoms need last coordinate == 0")
        else:
            raise ValueError(f"unknown domain tag {self.domain!r}")

    @classmethod
    def empty(cls, n: int, domain: str = "half-space") -> "DiscreteMeasure":
        return cls(np.zeros((0, n)), np.zeros(0), domain)

    @classmethod
    def from_csv(cls, path, domain: str = "half-space") -> "DiscreteMeasure":
        """Load atoms from CSV with header coord_1,...,coord_n,mass."""
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        header = rows[0]
        if header[-1] != "mass":
            raise ValueError("measure CSV must end with a 'mass' column")
        data = np.array([[float(v) for v in row] for row in rows[1:]])
        return cls(data[:, :-1], data[:, -1], domain)

    @property
    def n(self) -> int:
        return self.locations.shape[1]

    @property
    def size(self) -> int:
        return self.locations.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def ball_mass(self, center, radius: float) -> float:
        """Mass of the closed ball of given radius around center."""
        if self.size == 0:
            return 0.0
        center = np.asarray(center, dtype=float)
        dist = np.linalg.norm(self.locations - center, axis=1)
        return float(self.masses[dist <= radius].sum())

    def restrict_radius(self, r_min: float) -> "DiscreteMeasure":
        """Sub-measure of atoms with |y| >= r_min."""
        if self.size == 0:
            return self
        keep = np.linalg.norm(self.locations, axis=1) >= r_min
        return DiscreteMeasure(self.locations[keep], self.masses[keep],
                               self.domain)

    def scaled(self, factor: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.locations, self.masses * factor,
                               self.domain)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        if self.domain != other.domain or self.n != other.n:
            raise ValueError("cannot add measures with mismatched domains")
        return DiscreteMeasure(
            np.vstack([self.locations, other.locations]),
            np.concatenate([self.masses, other.masses]),
            self.domain,
        )


def _require_halfspace(mu: DiscreteMeasure):
    if mu.domain != "half-space":
        raise ValueError("operation requires a half-space tagged measure")


def measure_condition_check(mu: DiscreteMeasure, params: ParamSet):
    """The two finiteness integrals gating the subharmonic theorem.

    I1 = sum mass * y_n^p (1+|y|)^(-gamma);  I2 = sum mass * (1+|y|)^(1-n).
    """
    _require_halfspace(mu)
    if mu.size == 0:
        return 0.0, 0.0
    absy = np.linalg.norm(mu.locations, axis=1)
    yn = mu.locations[:, -1]
    i1 = float(np.sum(mu.masses * yn**params.p * (1.0 + absy) ** -params.gamma))
    i2 = float(np.sum(mu.masses * (1.0 + absy) ** -(params.n - 1)))
    return i1, i2


def weighted_measure(mu: DiscreteMeasure, params: ParamSet) -> DiscreteMeasure:
    """Reweight each atom by y_n^p (1+|y|)^(-gamma), locations unchanged."""
    _require_halfspace(mu)
    if mu.size == 0:
        return mu
    absy = np.linalg.norm(mu.locations, axis=1)
    yn = mu.locations[:, -1]
    w = yn**params.p * (1.0 + absy) ** -params.gamma
    return DiscreteMeasure(mu.locations, mu.masses * w, mu.domain)


def green_potential(mu: DiscreteMeasure, x) -> float:
    """h(x) = sum mass * G(x, atom); <= 0 under the sign convention here."""
    _require_halfspace(mu)
    x = np.asarray(x, dtype=float)
    if mu.size == 0:
        return 0.0
    dist = np.linalg.norm(mu.locations - x, axis=1)
    guard = 1e-14 * (1.0 + np.linalg.norm(x)
                     + np.linalg.norm(mu.locations, axis=1))
    if np.any(dist < guard):
        raise SingularityError("evaluation point coincides with an atom")
    c = KernelConstants.for_dim(mu.n)
    out = core.green_potential_batch(x[None, :], mu.locations, mu.masses,
                                     c.r_const)
    return float(out[0])


def green_potential_bound(mu: DiscreteMeasure, x) -> float:
    """Superposed (2.11) bound: sum mass * 2 x_n y_n / (omega |x-y|^n)."""
    _require_halfspace(mu)
    return float(sum(m * green_abs_bound(x, loc)
                     for loc, m in zip(mu.locations, mu.masses)))


def subharmonic_value(f, mu: DiscreteMeasure, x, cfg) -> float:
    """u(x) = P[f](x) + h(x) for boundary data f and measure mu."""
    from .boundary import poisson_integral

    v = poisson_integral(f, x, cfg) if f is not None else 0.0
    h = green_potential(mu, x) if mu is not None and mu.size else 0.0
    return v + h
