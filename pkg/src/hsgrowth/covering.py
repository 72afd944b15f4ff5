"""Fractional maximal functions of discrete measures, superlevel sets,
the 5r greedy Vitali cover with certified budget, and the banded
exceptional-union pipeline.

All ball masses are exact finite sums, so every budget inequality is
checked in plain floating arithmetic with no quadrature error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .measures import DiscreteMeasure
from .params import ParamSet

__all__ = [
    "BallCover",
    "ExceptionalSet",
    "maximal_function",
    "superlevel_membership",
    "witness_radius",
    "vitali_cover",
    "exceptional_union",
    "point_excluded",
    "grid_sampler",
    "random_sampler",
]

_EXPANSION = 5.0


def maximal_function(nu: DiscreteMeasure, x, beta: float) -> float:
    """sup over r > 0 of nu(B(x, r)) / r^beta, exactly, for a discrete nu.

    With open balls the supremum is attained in the limit r -> d^+ at atom
    distances d, so it equals the max over distinct distances of the
    cumulative mass at distance <= d divided by d^beta.  Returns +inf when
    an atom sits at x and beta > 0; total mass when beta == 0.
    """
    if beta < 0.0:
        raise ValueError("beta must be >= 0")
    x = np.asarray(x, dtype=float)
    if nu.size == 0:
        return 0.0
    out = core.maximal_batch(x[None, :], nu.locations, nu.masses, beta)
    return float(out[0])


def superlevel_membership(nu: DiscreteMeasure, x, beta: float,
                          lam: float) -> bool:
    """x in E(lambda): |x| >= 2 and M(d nu)(x) > lambda / |x|^beta."""
    if lam <= 0.0:
        raise ValueError("lambda must be > 0")
    x = np.asarray(x, dtype=float)
    ax = float(np.linalg.norm(x))
    if ax < 2.0:
        return False
    return maximal_function(nu, x, beta) > lam / ax**beta


def _distance_ladder(nu: DiscreteMeasure, x):
    dist = np.linalg.norm(nu.locations - np.asarray(x, dtype=float), axis=1)
    order = np.argsort(dist, kind="stable")
    d = dist[order]
    cum = np.cumsum(nu.masses[order])
    return d, cum


def witness_radius(nu: DiscreteMeasure, x, beta: float, lam: float) -> float:
    """Smallest atom-ladder distance d with nu(B-bar(x, d)) > lam (d/|x|)^beta.

    Precondition: x is a member of E(lambda).  When lam >= 5^beta * total
    mass, the returned radius is guaranteed <= |x| / 5.
    """
    x = np.asarray(x, dtype=float)
    if not superlevel_membership(nu, x, beta, lam):
        raise ValueError("witness_radius called on a non-member of E(lambda)")
    ax = float(np.linalg.norm(x))
    d, cum = _distance_ladder(nu, x)
    ok = (d > 0.0) & (cum > lam * (d / ax) ** beta)
    idx = np.argmax(ok)
    if ok[idx]:
        r = float(d[idx])
    elif d[0] == 0.0 and beta > 0.0:
        # atom sitting at x: mass m0 > lam (r/|x|)^beta for every radius
        # below |x| (m0/lam)^(1/beta); take half of it
        m0 = float(cum[0])
        r = 0.5 * ax * (m0 / lam) ** (1.0 / beta)
    else:
        raise ValueError("no positive witness radius exists at x")
    if lam >= _EXPANSION**beta * nu.total_mass and not r <= ax / _EXPANSION:
        raise AssertionError("witness radius exceeds the |x|/5 guarantee")
    return r


@dataclass(frozen=True)
class BallCover:
    """Expanded Vitali cover with its certified budget.

    `radii` are the post-expansion (5x) radii; the pre-expansion balls
    radii/5 centered at the same points are pairwise disjoint.
    """

    centers: np.ndarray  # (m, n)
    radii: np.ndarray  # (m,)
    beta: float
    lam: float
    total_mass: float

    def __post_init__(self):
        object.__setattr__(self, "centers",
                           np.atleast_2d(np.asarray(self.centers, float)))
        object.__setattr__(self, "radii",
                           np.asarray(self.radii, float).reshape(-1))

    @property
    def size(self) -> int:
        return self.radii.shape[0]

    @property
    def budget(self) -> float:
        """Sum over balls of (radius / |center|)^beta."""
        if self.size == 0:
            return 0.0
        norms = np.linalg.norm(self.centers, axis=1)
        return float(np.sum((self.radii / norms) ** self.beta))

    @property
    def certified_bound(self) -> float:
        """3 * 5^beta * mu(R^n) / lambda, the Vitali budget certificate."""
        if self.lam == 0.0:
            return 0.0
        return 3.0 * _EXPANSION**self.beta * self.total_mass / self.lam

    def contains(self, x) -> bool:
        """Open-ball containment of x in the expanded union."""
        if self.size == 0:
            return False
        x = np.asarray(x, dtype=float)
        dist = np.linalg.norm(self.centers - x, axis=1)
        return bool(np.any(dist < self.radii))

    def to_json_obj(self) -> dict:
        return {
            "beta": self.beta,
            "lambda": self.lam,
            "total_mass": self.total_mass,
            "budget": self.budget,
            "certified_bound": self.certified_bound,
            "balls": [
                {"center": [float(c) for c in ctr], "radius": float(r)}
                for ctr, r in zip(self.centers, self.radii)
            ],
        }

    @classmethod
    def from_json_obj(cls, obj, n=None) -> "BallCover":
        balls = obj["balls"]
        if balls:
            centers = np.array([b["center"] for b in balls])
            radii = np.array([b["radius"] for b in balls])
        else:
            centers = np.zeros((0, n or 3))
            radii = np.zeros(0)
        return cls(centers, radii, obj["beta"], obj["lambda"],
                   obj["total_mass"])


def vitali_cover(nu: DiscreteMeasure, beta: float, lam: float,
                 candidates) -> BallCover:
    """Greedy 5r Vitali cover of the candidate members of E(lambda).

    Witness balls are processed globally by decreasing radius; a ball is
    kept iff it is disjoint from every kept ball, so the pre-expansion
    family is pairwise disjoint, every discarded member lies in a kept
    ball's 5x dilate, and each ball stays within one dyadic annulus
    overlap band (radius <= 2^{k-1} at 2^k <= |x| < 2^{k+1}).  The budget
    never exceeds 3 * 5^beta * mu(R^n) / lambda.
    """
    total = nu.total_mass
    if lam < _EXPANSION**beta * total:
        raise ValueError(
            f"lambda = {lam} below the Vitali gate 5^beta * mass = "
            f"{_EXPANSION**beta * total}"
        )
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    if candidates.size == 0:
        return BallCover(np.zeros((0, nu.n)), np.zeros(0), beta, lam, total)
    norms = np.linalg.norm(candidates, axis=1)
    if np.any(norms < 2.0):
        raise ValueError("candidates must satisfy |x| >= 2")

    if nu.size:
        mvals = core.maximal_batch(candidates, nu.locations, nu.masses, beta)
    else:
        mvals = np.zeros(len(candidates))
    members = candidates[mvals > lam / norms**beta]

    kept_centers = []
    kept_radii = []
    if len(members):
        ks = np.floor(np.log2(np.linalg.norm(members, axis=1))).astype(int)
        radii = np.array([
            witness_radius(nu, x, beta, lam) for x in members
        ])
        # global greedy, largest radius first; lexicographic centers break
        # ties, so the output is independent of the candidate order
        order = sorted(
            range(len(members)),
            key=lambda i: (-radii[i], tuple(members[i])),
        )
        for i in order:
            x, r = members[i], radii[i]
            blocked = any(
                np.linalg.norm(x - c) <= r + rr
                for c, rr in zip(kept_centers, kept_radii)
            )
            if not blocked:
                if not r <= 2.0 ** (ks[i] - 1):
                    raise AssertionError(
                        "selected ball leaves the annulus overlap band"
                    )
                kept_centers.append(x)
                kept_radii.append(r)
        kept_radii = [_EXPANSION * r for r in kept_radii]

    if kept_centers:
        cover = BallCover(np.array(kept_centers), np.array(kept_radii),
                          beta, lam, total)
    else:
        cover = BallCover(np.zeros((0, nu.n)), np.zeros(0), beta, lam, total)
    if cover.budget > cover.certified_bound * (1.0 + 1e-12):
        raise AssertionError("cover budget exceeds the certified bound")
    for x in members:
        # every tested member must sit inside some expanded ball
        if not _in_expanded(cover, x):
            raise AssertionError("candidate member escaped the cover")
    return cover


def _in_expanded(cover: BallCover, x) -> bool:
    # closed containment; greedy guarantees strict for blocked members and
    # center containment for kept ones
    if cover.size == 0:
        return False
    dist = np.linalg.norm(cover.centers - np.asarray(x, float), axis=1)
    return bool(np.any(dist <= cover.radii))


@dataclass(frozen=True)
class Band:
    index: int
    epsilon: float
    r_lo: float
    r_hi: float
    lam: float
    tail_mass: float
    cover: BallCover


@dataclass(frozen=True)
class ExceptionalSet:
    """Union of per-band covers with dyadic epsilon schedule.

    epsilon_j = 2^-(j+2); per-band budgets are each <= 2^-j so the total
    never exceeds sum 2^-j = 1.
    """

    bands: tuple

    @property
    def total_budget(self) -> float:
        return float(sum(b.cover.budget for b in self.bands))

    def excluded(self, x) -> bool:
        return any(b.cover.contains(x) for b in self.bands)

    def to_json_obj(self) -> dict:
        return {
            "total_budget": self.total_budget,
            "bands": [
                {
                    "j": b.index,
                    "epsilon": b.epsilon,
                    "r_lo": b.r_lo,
                    "r_hi": b.r_hi,
                    "lambda": b.lam,
                    "tail_mass": b.tail_mass,
                    "budget": b.cover.budget,
                    "cover": b.cover.to_json_obj(),
                }
                for b in self.bands
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, **kw)

    @classmethod
    def from_json_obj(cls, obj) -> "ExceptionalSet":
        bands = tuple(
            Band(
                index=b["j"],
                epsilon=b["epsilon"],
                r_lo=b["r_lo"],
                r_hi=b["r_hi"],
                lam=b["lambda"],
                tail_mass=b["tail_mass"],
                cover=BallCover.from_json_obj(b["cover"]),
            )
            for b in obj["bands"]
        )
        return cls(bands=bands)


def point_excluded(exc: ExceptionalSet, x) -> bool:
    """True iff x lies in some stored (open) ball of the exceptional set."""
    return exc.excluded(x)


def exceptional_union(source: DiscreteMeasure, params: ParamSet,
                      band_count: int, sampler) -> ExceptionalSet:
    """Banded exceptional cover for an already-weighted source measure.

    Band j uses epsilon_j = 2^-(j+2), the smallest dyadic threshold R_j
    (strictly increasing) whose tail mass {|y| >= R_j} is below
    epsilon_j^p / 5^beta, the tail-restricted measure, and
    lambda_j = 3 * 5^beta * 2^j * tail_mass; candidates come from
    sampler(j, R_{j-1}, R_j) inside the band annulus.  Each band budget is
    <= 2^-j and the total is <= 1.
    """
    if band_count < 1:
        raise ValueError("band_count must be >= 1")
    beta = params.beta
    p = params.p
    bands = []
    r_prev = 2.0
    for j in range(1, band_count + 1):
        eps = 2.0 ** -(j + 2)
        target = eps**p / _EXPANSION**beta
        r_j = max(2.0, 2.0 * r_prev)
        while source.restrict_radius(r_j).total_mass >= target:
            r_j *= 2.0
        tail = source.restrict_radius(r_j)
        lam = 3.0 * _EXPANSION**beta * 2.0**j * tail.total_mass
        if tail.size == 0 or lam == 0.0 or beta == 0.0:
            # empty tail, or the finite-sum corner beta == 0 where the
            # superlevel set is empty for lambda above the total mass
            cover = BallCover(np.zeros((0, source.n)), np.zeros(0), beta,
                              lam, tail.total_mass)
        else:
            candidates = np.atleast_2d(
                np.asarray(sampler(j, r_prev, r_j), dtype=float))
            cover = vitali_cover(tail, beta, lam, candidates)
        if cover.budget > 2.0**-j * (1.0 + 1e-12):
            raise AssertionError(f"band {j} budget exceeds 2^-{j}")
        bands.append(Band(index=j, epsilon=eps, r_lo=r_prev, r_hi=r_j,
                          lam=lam, tail_mass=tail.total_mass, cover=cover))
        r_prev = r_j
    exc = ExceptionalSet(bands=tuple(bands))
    if exc.total_budget > 1.0 + 1e-12:
        raise AssertionError("total exceptional budget exceeds 1")
    return exc


def grid_sampler(per_band: int, n: int):
    """Deterministic spherical-shell candidate grid inside each band."""

    def sampler(j, r_lo, r_hi):
        shells = max(2, int(round(per_band ** (1.0 / 2))))
        per_shell = max(1, per_band // shells)
        radii = np.geomspace(max(r_lo, 2.0), r_hi * (1.0 - 1e-9), shells)
        pts = []
        for i, r in enumerate(radii):
            # deterministic low-discrepancy directions via golden angles
            idx = np.arange(per_shell) + 0.5
            phi = (1.0 + math.sqrt(5.0)) / 2.0
            zs = 1.0 - 2.0 * idx / per_shell
            if n == 3:
                ang = 2.0 * math.pi * idx * phi
                dirs = np.stack([
                    np.sqrt(1 - zs**2) * np.cos(ang),
                    np.sqrt(1 - zs**2) * np.sin(ang),
                    zs,
                ], axis=1)
            else:
                ang1 = 2.0 * math.pi * idx * phi
                ang2 = 2.0 * math.pi * idx * phi**2
                s = np.sqrt(1 - zs**2)
                dirs = np.stack([
                    s * np.cos(ang1) * np.cos(ang2),
                    s * np.cos(ang1) * np.sin(ang2),
                    s * np.sin(ang1),
                    zs,
                ], axis=1)
                dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            pts.append(r * dirs)
        return np.vstack(pts)

    return sampler


def random_sampler(count: int, n: int, seed: int):
    """Seeded uniform-direction candidate sampler inside each band."""

    def sampler(j, r_lo, r_hi):
        rng = np.random.default_rng(seed + 1000 * j)
        dirs = rng.normal(size=(count, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = np.exp(rng.uniform(np.log(max(r_lo, 2.0)),
                                   np.log(max(r_hi, 2.0 + 1e-9)),
                                   size=count))
        radii = np.clip(radii, 2.0, np.nextafter(r_hi, 0.0))
        return dirs * radii[:, None]

    return sampler
