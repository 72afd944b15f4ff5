"""Growth-exponent algebra, ray sampling outside the exceptional set, and
the finite-scale trend proxy for the o(.) asymptotics.

The limit statement is untestable; the harness computes the ratio
|u(x)| / target(x) along nontangential rays and witnesses decay through a
trend statistic (last ratio over the max of the first three) plus a
non-increasing tail window.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .boundary import weighted_lp_norm
from .measures import DiscreteMeasure
from .params import ParamSet

__all__ = [
    "GrowthTarget",
    "GrowthSeries",
    "ObstructedRayError",
    "growth_target",
    "log_boundary_check",
    "theorem_a_mode",
    "sample_ray",
    "growth_ratio_series",
    "discretize_boundary_weight",
]


class ObstructedRayError(RuntimeError):
    """Too many ray samples fall inside the exceptional set."""


def log_boundary_check(params: ParamSet) -> bool:
    """True iff gamma sits exactly on the lower boundary -(n-1)(p-1), p>1."""
    return params.log_boundary


@dataclass(frozen=True)
class GrowthTarget:
    """Composite growth target x_n^a |x|^b, optionally times (log|x|)^(1/q)."""

    params: ParamSet

    @property
    def xn_exponent(self) -> float:
        p = self.params
        return 1.0 - p.alpha / p.p

    @property
    def abs_exponent(self) -> float:
        p = self.params
        return (p.gamma / p.p + (p.n - 1) * p.one_over_q - p.n
                + p.alpha / p.p)

    @property
    def log_factor(self) -> bool:
        return self.params.log_boundary

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        xn = float(x[-1])
        ax = float(np.linalg.norm(x))
        if xn <= 0.0:
            raise ValueError("growth target requires x_n > 0")
        val = xn**self.xn_exponent * ax**self.abs_exponent
        if self.log_factor:
            if ax <= 1.0:
                raise ValueError("log-variant target requires |x| > 1")
            val *= math.log(ax) ** self.params.one_over_q
        return val


def growth_target(params: ParamSet, x) -> float:
    return GrowthTarget(params)(x)


def theorem_a_mode(params: ParamSet) -> GrowthTarget:
    """The Siegel-Talvila corner p=1, gamma=n, alpha=n: target x_n^{1-n}|x|^n."""
    if not (params.p == 1.0 and params.gamma == params.n
            and params.alpha == params.n):
        raise ValueError("theorem-A mode requires p=1, gamma=n, alpha=n")
    target = GrowthTarget(params)
    assert target.xn_exponent == 1 - params.n
    assert target.abs_exponent == params.n
    return target


def sample_ray(direction, t_values, exc=None, min_clear_fraction=0.9,
               aperture_deg=5.0):
    """Points x(t) = t * direction with exceptional-set exclusion flags.

    The direction must be nontangential: unit vector with last component
    >= sin(aperture).  Raises ObstructedRayError when fewer than
    min_clear_fraction of the samples are outside the exceptional set.
    """
    direction = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    direction = direction / norm
    sin_min = math.sin(math.radians(aperture_deg))
    if direction[-1] < sin_min - 1e-12:
        raise ValueError(
            f"direction is tangential: last component {direction[-1]:.4f} "
            f"< sin({aperture_deg} deg)"
        )
    t_values = np.asarray(t_values, dtype=float)
    if np.any(t_values <= 0.0) or np.any(np.diff(t_values) <= 0.0):
        raise ValueError("t_values must be positive and strictly increasing")
    samples = []
    excluded_count = 0
    for t in t_values:
        x = t * direction
        flag = bool(exc is not None and exc.excluded(x))
        excluded_count += flag
        samples.append((x, flag))
    if len(samples) - excluded_count < min_clear_fraction * len(samples):
        raise ObstructedRayError(
            f"{excluded_count}/{len(samples)} samples inside the "
            "exceptional set"
        )
    return samples


@dataclass(frozen=True)
class GrowthSeries:
    t: np.ndarray
    points: np.ndarray
    values: np.ndarray
    targets: np.ndarray
    ratios: np.ndarray
    excluded: np.ndarray

    def write_csv(self, path):
        n = self.points.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t"] + [f"x_{i + 1}" for i in range(n)]
                            + ["value", "target", "ratio", "excluded"])
            for i in range(len(self.t)):
                row = [f"{self.t[i]:.9g}"]
                row += [f"{c:.9g}" for c in self.points[i]]
                row += [f"{self.values[i]:.9g}", f"{self.targets[i]:.9g}",
                        f"{self.ratios[i]:.9g}", int(self.excluded[i])]
                writer.writerow(row)


def growth_ratio_series(evaluator, params: ParamSet, samples,
                        threshold=0.1):
    """Ratio series |evaluator(x)| / target(x) plus the trend verdict.

    Returns (series, trend, witnessed): trend is the last usable ratio
    over the max of the first three; witnessed requires trend <= threshold
    and a non-increasing tail over the last four usable ratios.
    """
    target = GrowthTarget(params)
    t_list, pts, vals, tgts, ratios, flags = [], [], [], [], [], []
    for x, excl in samples:
        x = np.asarray(x, dtype=float)
        t_list.append(float(np.linalg.norm(x)))
        pts.append(x)
        flags.append(excl)
        tg = target(x)
        tgts.append(tg)
        if excl:
            vals.append(math.nan)
            ratios.append(math.nan)
        else:
            v = float(evaluator(x))
            vals.append(v)
            ratios.append(abs(v) / tg)
    usable = [r for r, e in zip(ratios, flags) if not e]
    if len(usable) < 5:
        raise ValueError("need at least 5 usable (non-excluded) samples")
    trend = usable[-1] / max(usable[:3]) if max(usable[:3]) > 0.0 else 0.0
    tail = usable[-4:]
    non_increasing = all(b <= a * (1.0 + 1e-12)
                         for a, b in zip(tail[:-1], tail[1:]))
    witnessed = trend <= threshold and non_increasing
    series = GrowthSeries(
        t=np.array(t_list),
        points=np.array(pts),
        values=np.array(vals),
        targets=np.array(tgts),
        ratios=np.array(ratios),
        excluded=np.array(flags, dtype=bool),
    )
    return series, trend, witnessed


def discretize_boundary_weight(f, params: ParamSet, shells_per_octave=2,
                               r_max=None, directions=4):
    """Discretize dm(y') = |f|^p (1+|y'|)^(-gamma) dy' into boundary atoms.

    Shell masses come from the weighted-norm quadrature on dyadic annuli;
    each shell's mass is split across a fixed set of directions at the
    shell's geometric mid-radius.  Feeds the exceptional-union pipeline.
    """
    n = params.n
    if r_max is None:
        r_max = (f.support_radius if math.isfinite(f.support_radius)
                 else 2.0**12)
    edges = [0.0]
    r = 0.5
    while r < r_max:
        for i in range(shells_per_octave):
            e = r * 2.0 ** ((i + 1) / shells_per_octave)
            if e < r_max:
                edges.append(e)
        r *= 2.0
    edges.append(r_max)
    edges = sorted(set(edges))

    locs, masses = [], []
    prev_val = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = weighted_lp_norm(f, params, hi)
        mass = val - prev_val
        prev_val = val
        if mass <= 0.0:
            continue
        mid = math.sqrt(max(lo, 1e-6) * hi)
        for k in range(directions):
            ang = 2.0 * math.pi * k / directions
            y = np.zeros(n)
            y[0] = mid * math.cos(ang)
            y[1] = mid * math.sin(ang)
            locs.append(y)
            masses.append(mass / directions)
    if not locs:
        return DiscreteMeasure.empty(n, domain="boundary")
    return DiscreteMeasure(np.array(locs), np.array(masses),
                           domain="boundary")
