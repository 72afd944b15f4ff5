"""Quadrature over R^{n-1}: weighted L^p condition, Poisson integrals,
the four-region split, and analytic tail thresholds.

Strategy: in polar coordinates centered at x' the Poisson kernel depends
only on the polar radius r, so the angular factor is the mean of f over
the sphere |y' - x'| = r.  That mean is computed exactly-smooth piecewise
by splitting the angular variable at the radii where f's support, a bump
edge, or a region window crosses the sphere.  For compactly supported f
far from x, an origin-centered path with all distances scaled by |x|
stays stable at arbitrarily large |x|.  Numeric integration supports
n in {3, 4}; closed-form kernel operations have no such restriction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import KernelConstants, surface_area
from .params import ParamSet

__all__ = [
    "BoundaryData",
    "QuadConfig",
    "AdmissibilityError",
    "ConvergenceError",
    "weighted_lp_norm",
    "poisson_integral",
    "poisson_integral_split",
    "tail_threshold",
]

_INF = math.inf


class AdmissibilityError(ValueError):
    """Boundary data fails the weighted integrability gate."""


class ConvergenceError(RuntimeError):
    """Quadrature could not certify the requested tolerance.

    Carries the achieved value and error estimate.
    """

    def __init__(self, value, estimate, tol):
        self.value = value
        self.estimate = estimate
        self.tol = tol
        super().__init__(
            f"quadrature error estimate {estimate:.3e} exceeds tolerance "
            f"{tol:.3e} (value {value:.9g})"
        )


@dataclass(frozen=True)
class QuadConfig:
    """Panel/node budget for the radial-angular quadrature."""

    nodes_per_panel: int = 12
    angular_nodes: int = 32
    trunc_multiplier: float = 64.0
    tol: float = 1e-6

    def __post_init__(self):
        if self.nodes_per_panel < 2 or self.angular_nodes < 2:
            raise ValueError("node counts must be >= 2")
        if not (0.0 < self.tol <= 1e-2):
            raise ValueError("tolerance must lie in (0, 1e-2]")
        if self.trunc_multiplier < 2.0:
            raise ValueError("truncation multiplier must be >= 2")


@dataclass(frozen=True)
class BoundaryData:
    """Boundary function f on R^{n-1}.

    Kinds:
      radial-power   f(y') = (1 + |y'|)^s
      gaussian       f(y') = amplitude * exp(-|y'|^2 / width^2)
      compact-bump   f(y') = amplitude on |y'| <= radius, else 0
      tabulated      multilinear interpolation on a regular grid, zero
                     outside the declared support radius
    """

    kind: str
    n: int
    s: float = 0.0
    amplitude: float = 1.0
    width: float = 1.0
    radius: float = 1.0
    axes: tuple = ()
    values: np.ndarray | None = None
    support_radius: float = _INF

    # -- constructors ------------------------------------------------------
    @classmethod
    def radial_power(cls, n, s):
        return cls(kind="radial-power", n=n, s=float(s))

    @classmethod
    def constant(cls, n, value=1.0):
        # (1+r)^0 scaled; exact constant boundary data
        return cls(kind="radial-power", n=n, s=0.0, amplitude=float(value))

    @classmethod
    def gaussian(cls, n, amplitude=1.0, width=1.0):
        if width <= 0:
            raise ValueError("gaussian width must be > 0")
        return cls(kind="gaussian", n=n, amplitude=float(amplitude),
                   width=float(width))

    @classmethod
    def compact_bump(cls, n, radius=1.0, amplitude=1.0):
        if radius <= 0:
            raise ValueError("bump radius must be > 0")
        return cls(kind="compact-bump", n=n, radius=float(radius),
                   amplitude=float(amplitude), support_radius=float(radius))

    @classmethod
    def tabulated(cls, n, axes, values, support_radius):
        values = np.asarray(values, dtype=float)
        axes = tuple(np.asarray(a, dtype=float) for a in axes)
        if len(axes) != n - 1:
            raise ValueError(f"tabulated data needs {n - 1} axes")
        if not math.isfinite(support_radius):
            raise ValueError("tabulated data requires a finite support radius")
        return cls(kind="tabulated", n=n, axes=axes, values=values,
                   support_radius=float(support_radius))

    @classmethod
    def from_csv(cls, path, n, support_radius):
        """Load a tabulated grid: header coord_1,...,coord_{n-1},value."""
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        data = np.array([[float(v) for v in row] for row in rows[1:]])
        coords, vals = data[:, :-1], data[:, -1]
        axes = [np.unique(coords[:, j]) for j in range(n - 1)]
        shape = tuple(len(a) for a in axes)
        if np.prod(shape) != len(vals):
            raise ValueError("CSV rows do not form a full regular grid")
        idx = [np.searchsorted(axes[j], coords[:, j]) for j in range(n - 1)]
        grid = np.empty(shape)
        grid[tuple(idx)] = vals
        return cls.tabulated(n, axes, grid, support_radius)

    # -- evaluation --------------------------------------------------------
    @property
    def is_radial(self) -> bool:
        return self.kind != "tabulated"

    def profile(self, r):
        """Radial profile f(|y'|) for the radial kinds; vectorized."""
        r = np.asarray(r, dtype=float)
        if self.kind == "radial-power":
            return self.amplitude * (1.0 + r) ** self.s
        if self.kind == "gaussian":
            return self.amplitude * np.exp(-((r / self.width) ** 2))
        if self.kind == "compact-bump":
            return np.where(r <= self.radius, self.amplitude, 0.0)
        raise ValueError("tabulated data has no radial profile")

    def _interpolator(self):
        from scipy.interpolate import RegularGridInterpolator

        return RegularGridInterpolator(
            self.axes, self.values, method="linear",
            bounds_error=False, fill_value=0.0,
        )

    def __call__(self, points):
        """Evaluate f at points of shape (k, n-1)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.is_radial:
            return self.profile(np.linalg.norm(points, axis=1))
        vals = self._interpolator()(points)
        vals = np.where(
            np.linalg.norm(points, axis=1) <= self.support_radius, vals, 0.0
        )
        return vals

    @property
    def feature_radii(self):
        """Radii where f changes character (support and bump edges)."""
        out = []
        if self.kind == "compact-bump":
            out.append(self.radius)
        if self.kind == "tabulated":
            out.append(self.support_radius)
        return out

    @property
    def sup_amplitude(self) -> float:
        if self.kind == "tabulated":
            return float(np.max(np.abs(self.values)))
        return abs(self.amplitude)

    def admissible(self, params: ParamSet) -> bool:
        """Finiteness of the weighted L^p integral (1+|y'|)^(-gamma)|f|^p."""
        if self.kind == "radial-power":
            return params.p * self.s - params.gamma + (self.n - 2) < -1.0
        return True

    def poisson_integrable(self) -> bool:
        """Finiteness of the Poisson integral itself (kernel decay r^-n)."""
        if self.kind == "radial-power":
            return self.s < 1.0
        return True

    def decay_sup(self, t: float) -> float:
        """Upper bound on sup of |f| over |y'| >= t (t >= 0)."""
        if self.kind == "radial-power":
            if self.s <= 0.0:
                return abs(self.amplitude) * (1.0 + t) ** self.s
            return _INF
        if self.kind == "gaussian":
            return abs(self.amplitude) * math.exp(-((t / self.width) ** 2))
        return 0.0 if t >= self.support_radius else self.sup_amplitude


# ---------------------------------------------------------------------------
# Gauss-Legendre helpers


@lru_cache(maxsize=64)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_nodes(a, b, order):
    x, w = _leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _integrate_1d(func, breaks, order):
    """Sum of Gauss-Legendre panel integrals of a vectorized func."""
    total = 0.0
    abs_total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        nodes, weights = _panel_nodes(a, b, order)
        vals = func(nodes)
        total += float(np.dot(weights, vals))
        abs_total += float(np.dot(weights, np.abs(vals)))
    return total, abs_total


def _merge_breaks(lo, hi, extra):
    pts = [lo, hi]
    for e in extra:
        if lo < e < hi:
            pts.append(e)
    return np.array(sorted(set(pts)))


# ---------------------------------------------------------------------------
# Angular means over the sphere |y' - x'| = r


def _window_indicator(s, window):
    lo, hi = window
    return (s > lo) & (s <= hi)


def _angular_mean_radial(f, d, r, window, ang_order):
    """Mean over directions u of f(x' + r u) * 1_window(|x' + r u|).

    |x' + r u| = sqrt(d^2 + r^2 + 2 d r c) with c the cosine of the angle
    between u and x'.  Angular breakpoints are placed where that radius
    crosses a feature or window edge, so every sub-panel is smooth.
    """
    if r == 0.0 or d == 0.0:
        s = d + r
        return float(f.profile(s)) if _window_indicator(
            np.asarray(s), window).item() else 0.0
    crossing = list(f.feature_radii)
    for edge in window:
        if 0.0 < edge < _INF:
            crossing.append(edge)
    c_breaks = []
    for rho in crossing:
        c = (rho * rho - d * d - r * r) / (2.0 * d * r)
        if -1.0 < c < 1.0:
            c_breaks.append(c)

    def s_of_c(c):
        return np.sqrt(np.maximum(d * d + r * r + 2.0 * d * r * c, 0.0))

    if f.n == 3:
        # mean over the circle: (1/pi) * integral over theta in [0, pi]
        th_breaks = _merge_breaks(0.0, math.pi,
                                  [math.acos(c) for c in c_breaks])

        def h(theta):
            s = s_of_c(np.cos(theta))
            return f.profile(s) * _window_indicator(s, window)

        val, _ = _integrate_1d(h, th_breaks, ang_order)
        return val / math.pi
    # n == 4: mean over S^2 is (1/2) * integral over c in [-1, 1]
    c_grid = _merge_breaks(-1.0, 1.0, c_breaks)

    def h(c):
        s = s_of_c(c)
        return f.profile(s) * _window_indicator(s, window)

    val, _ = _integrate_1d(h, c_grid, ang_order)
    return 0.5 * val


def _sphere_directions(n, ang_order):
    """Direction/weight sets on S^{n-2} with weights summing to the mean."""
    if n == 3:
        theta = 2.0 * math.pi * (np.arange(ang_order) + 0.5) / ang_order
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        w = np.full(ang_order, 1.0 / ang_order)
        return dirs, w
    # n == 4: Gauss-Legendre in the polar cosine x midpoint azimuth
    c, wc = _leggauss(ang_order)
    phi = 2.0 * math.pi * (np.arange(ang_order) + 0.5) / ang_order
    sin_t = np.sqrt(1.0 - c**2)
    dirs = np.concatenate([
        np.stack([
            np.outer(sin_t, np.cos(phi)).ravel(),
            np.outer(sin_t, np.sin(phi)).ravel(),
            np.repeat(c, ang_order),
        ], axis=1)
    ])
    w = np.outer(wc * 0.5, np.full(ang_order, 1.0 / ang_order)).ravel()
    return dirs, w


def _angular_mean_tabulated(f, xprime, r, window, ang_order):
    dirs, w = _sphere_directions(f.n, ang_order)
    pts = xprime[None, :] + r * dirs
    vals = f(pts) * _window_indicator(np.linalg.norm(pts, axis=1), window)
    return float(np.dot(w, vals))


# ---------------------------------------------------------------------------
# Weighted L^p norm (condition 1.7) and its analytic tails


def _power_tail_closed(coef, e, R, S=_INF):
    """coef * integral_R^S (1+r)^e dr in closed form (upper-bound helper)."""
    if S <= R:
        return 0.0
    if math.isinf(S):
        if e >= -1.0:
            return _INF
        return coef * (1.0 + R) ** (e + 1.0) / (-(e + 1.0))
    if abs(e + 1.0) < 1e-14:
        return coef * math.log((1.0 + S) / (1.0 + R))
    return coef * ((1.0 + S) ** (e + 1.0) - (1.0 + R) ** (e + 1.0)) / (e + 1.0)


def _lp_tail_bound(f, params, R):
    """Analytic upper bound on the weighted mass of {|y'| >= R}."""
    n, p, gamma = params.n, params.p, params.gamma
    sigma = surface_area(n - 1)
    if f.kind == "radial-power":
        e = p * f.s - gamma + (n - 2)
        return _power_tail_closed(sigma * abs(f.amplitude) ** p, e, R)
    if f.kind == "gaussian":
        c = p / f.width**2
        m = (n - 2) + max(0.0, -gamma)
        pref = sigma * abs(f.amplitude) ** p * 2.0 ** max(0.0, -gamma)
        gauss = 0.5 * math.gamma((m + 1.0) / 2.0) * (2.0 / c) ** ((m + 1.0) / 2.0)
        return pref * math.exp(-c * R * R / 2.0) * gauss
    # compact support: closed-form power bound out to the support edge
    S = f.support_radius
    if R >= S:
        return 0.0
    e = -gamma + (n - 2)
    return _power_tail_closed(sigma * f.sup_amplitude**p, e, R, S)


def weighted_lp_norm(f, params, R_max, cfg=None):
    """Approximate the weighted mass of {|y'| <= R_max} plus a tail bound.

    Returns (value, tail_bound) where value approximates
    int_{|y'|<=R_max} |f|^p (1+|y'|)^(-gamma) dy' and tail_bound is an
    analytic upper bound on the remainder beyond R_max.
    """
    if not f.admissible(params):
        raise AdmissibilityError(
            "boundary data fails the weighted L^p condition for these "
            "parameters"
        )
    if R_max <= 0.0:
        raise ValueError("R_max must be > 0")
    cfg = cfg or QuadConfig()
    n, p, gamma = params.n, params.p, params.gamma
    sigma = surface_area(n - 1)

    R_eff = min(R_max, f.support_radius)
    if R_eff <= 0.0:
        return 0.0, _lp_tail_bound(f, params, R_max)

    # dyadic radial panels plus feature edges
    extra = list(f.feature_radii)
    t = 1.0
    while t < R_eff:
        extra.append(t)
        t *= 2.0
    breaks = _merge_breaks(0.0, R_eff, extra)

    if f.is_radial:
        def integrand(r):
            return (sigma * r ** (n - 2) * (1.0 + r) ** (-gamma)
                    * np.abs(f.profile(r)) ** p)
    else:
        def integrand(r):
            means = np.array([
                _angular_mean_abs_p_tab(f, rr, p, cfg.angular_nodes)
                for rr in r
            ])
            return sigma * r ** (n - 2) * (1.0 + r) ** (-gamma) * means

    val, _ = _integrate_1d(integrand, breaks, cfg.nodes_per_panel)
    return val, _lp_tail_bound(f, params, R_max)


def _angular_mean_abs_p_tab(f, r, p, ang_order):
    dirs, w = _sphere_directions(f.n, ang_order)
    vals = np.abs(f(r * dirs)) ** p
    return float(np.dot(w, vals))


def tail_threshold(f, params, eps, cfg=None):
    """Smallest dyadic R >= 2 with analytic tail bound <= eps^p / 5^beta."""
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    if not f.admissible(params):
        raise AdmissibilityError("inadmissible boundary data")
    target = eps**params.p / 5.0**params.beta
    R = 2.0
    for _ in range(600):
        if _lp_tail_bound(f, params, R) <= target:
            return R
        R *= 2.0
    # unreachable for admissible kinds, whose tails decay to zero
    raise ConvergenceError(R, _lp_tail_bound(f, params, R), target)


# ---------------------------------------------------------------------------
# Poisson integral


def _check_dim(f, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n,):
        raise ValueError(f"point dimension {x.shape} != n = {f.n}")
    if not x[-1] > 0.0:
        raise ValueError("evaluation point must have x_n > 0")
    if f.n not in (3, 4):
        raise ValueError("numeric Poisson integration supports n in {3, 4}")
    return x


def _poisson_tail_bound(f, x_n, d, sigma_over_omega, R):
    """Analytic bound on the truncated far field |y' - x'| > R."""
    coef = 2.0 * x_n * sigma_over_omega
    if f.kind == "radial-power":
        s = f.s
        if R <= d + 1.0:
            return _INF
        if s <= 0.0:
            shrink = (1.0 - d / R) ** s  # (1+r-d)^s <= (r(1-d/R))^s, s<=0
        else:
            shrink = (1.0 + (1.0 + d) / R) ** s
        return (coef * abs(f.amplitude) * shrink * R ** (s - 1.0)
                / (1.0 - s))
    if f.kind == "gaussian":
        if R <= d:
            return _INF
        w = f.width
        return (coef * abs(f.amplitude) / R**2
                * (w * math.sqrt(math.pi) / 2.0)
                * math.erfc((R - d) / w))
    # compact support: zero once the truncation covers it
    return 0.0 if R >= d + f.support_radius else _INF


def _near_field_value(f, x, cfg, window, order, ang_order):
    """x'-centered radial quadrature out to an adaptive truncation."""
    x_n = float(x[-1])
    xprime = x[:-1]
    d = float(np.linalg.norm(xprime))
    n = f.n
    const = KernelConstants.for_dim(n)
    sigma = surface_area(n - 1)
    so = sigma / const.omega

    def mean_at(r):
        if f.is_radial:
            return _angular_mean_radial(f, d, r, window, ang_order)
        return _angular_mean_tabulated(f, xprime, r, window, ang_order)

    def integrand(r):
        kern = 2.0 * x_n / ((r * r + x_n * x_n) ** (n / 2.0))
        means = np.array([mean_at(rr) for rr in r])
        return so * kern * r ** (n - 2) * means

    features = []
    for rho in f.feature_radii + [w for w in window if 0.0 < w < _INF]:
        for t in (abs(d - rho), d + rho):
            # the angular mean has a sqrt-type kink at tangency radii;
            # geometric panel refinement restores fast convergence
            features.append(t)
            for frac in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8, 1e-10):
                dt = frac * (1.0 + t)
                features.extend([t - dt, t + dt])

    def breaks_to(R):
        pts = [x_n / 4.0, x_n / 2.0, x_n, 2.0 * x_n]
        t = 2.0 * x_n
        while t < R:
            t *= 2.0
            pts.append(t)
        return _merge_breaks(0.0, R, pts + features)

    hi_cap = window[1] + d if math.isfinite(window[1]) else _INF
    support_cap = (d + f.support_radius
                   if math.isfinite(f.support_radius) else _INF)
    R = cfg.trunc_multiplier * max(np.linalg.norm(x), d + 1.0, 1.0)
    R = min(R, hi_cap, support_cap)
    R = max(R, 4.0 * x_n, 1.0)

    val, abs_val = _integrate_1d(integrand, breaks_to(R), order)
    scale = max(abs_val, abs(val))

    # extend the truncation until the analytic tail fits the budget
    for _ in range(80):
        tail = _poisson_tail_bound(f, x_n, d, so, R)
        if math.isfinite(window[1]) and R >= hi_cap:
            tail = 0.0
        if math.isfinite(f.support_radius) and R >= support_cap:
            tail = 0.0
        if tail <= 0.3 * cfg.tol * max(scale, 1e-300):
            break
        chunk, chunk_abs = _integrate_1d(
            integrand, _merge_breaks(R, 2.0 * R, features), order)
        val += chunk
        abs_val += chunk_abs
        scale = max(abs_val, abs(val))
        R *= 2.0
    return val, scale, tail


def _far_field_value(f, x, cfg, window, order, ang_order):
    """Origin-centered scaled quadrature for compact f far from x."""
    x_n = float(x[-1])
    xprime = x[:-1]
    d = float(np.linalg.norm(xprime))
    n = f.n
    const = KernelConstants.for_dim(n)
    tau = max(float(np.linalg.norm(x)), 1.0)
    xi = x_n / tau
    delta = d / tau

    lo = max(0.0, window[0])
    hi = min(window[1], f.support_radius)
    if hi <= lo:
        return 0.0, 0.0

    pref = (2.0 * xi / const.omega) * tau ** (1 - n)

    if f.is_radial:
        def kernel_mean(s):
            sh = s / tau
            if n == 3:
                def h(theta):
                    dd = (xi * xi + delta * delta + sh * sh
                          - 2.0 * delta * sh * np.cos(theta))
                    return dd ** (-n / 2.0)
                iv, _ = _integrate_1d(h, np.array([0.0, math.pi]), ang_order)
                return 2.0 * iv  # full circle
            def h(c):
                dd = (xi * xi + delta * delta + sh * sh
                      - 2.0 * delta * sh * c)
                return dd ** (-n / 2.0)
            iv, _ = _integrate_1d(h, np.array([-1.0, 1.0]), ang_order)
            return 2.0 * math.pi * iv

        def integrand(s):
            return np.array([
                pref * kernel_mean(ss) * ss ** (n - 2) * float(f.profile(ss))
                for ss in s
            ])
    else:
        dirs, w = _sphere_directions(n, ang_order)
        # weights are means; rescale to the surface measure of S^{n-2}
        w_surface = w * surface_area(n - 1)

        def integrand(s):
            out = np.empty_like(s)
            for i, ss in enumerate(s):
                pts = ss * dirs
                diff = xprime[None, :] / tau - pts / tau
                dd = xi * xi + np.einsum("kj,kj->k", diff, diff)
                vals = f(pts)
                out[i] = pref * ss ** (n - 2) * float(
                    np.dot(w_surface, vals * dd ** (-n / 2.0)))
            return out

    breaks = _merge_breaks(lo, hi, f.feature_radii)
    val, abs_val = _integrate_1d(integrand, breaks, order)
    return val, max(abs_val, abs(val))


def poisson_integral(f, x, cfg=None, window=None):
    """u(x) = integral of P(x, y') f(y') over R^{n-1} (optionally windowed
    to lo < |y'| <= hi), with a certified error budget.

    Raises ConvergenceError when the node-doubling estimate plus the
    analytic truncation tail exceeds cfg.tol relative to the integral's
    magnitude.
    """
    cfg = cfg or QuadConfig()
    x = _check_dim(f, x)
    if not f.poisson_integrable():
        raise AdmissibilityError(
            "Poisson integral diverges for this boundary data"
        )
    window = window or (0.0, _INF)
    d = float(np.linalg.norm(x[:-1]))

    far = (math.isfinite(f.support_radius)
           and d > 2.0 * (f.support_radius + 1.0))
    if far:
        v1, _ = _far_field_value(f, x, cfg, window,
                                 cfg.nodes_per_panel, cfg.angular_nodes)
        v2, scale = _far_field_value(f, x, cfg, window,
                                     2 * cfg.nodes_per_panel,
                                     2 * cfg.angular_nodes)
        err = abs(v2 - v1)
        tail = 0.0
    else:
        v1, _, _ = _near_field_value(
            f, x, cfg, window, cfg.nodes_per_panel, cfg.angular_nodes)
        v2, scale, tail = _near_field_value(
            f, x, cfg, window, 2 * cfg.nodes_per_panel,
            2 * cfg.angular_nodes)
        err = abs(v2 - v1)
    budget = cfg.tol * max(scale, 1e-300)
    if err + tail > budget:
        raise ConvergenceError(v2, err + tail, budget)
    return v2


def poisson_integral_split(f, x, cfg=None):
    """Region split (v1, v2, v3, v4) over the four annuli of |y'|."""
    cfg = cfg or QuadConfig()
    x = _check_dim(f, x)
    ax = float(np.linalg.norm(x))
    if ax < 2.0:
        raise ValueError("region split requires |x| >= 2")
    v1 = poisson_integral(f, x, cfg, window=(1.0, ax / 2.0))
    v2 = poisson_integral(f, x, cfg, window=(ax / 2.0, 2.0 * ax))
    v3 = poisson_integral(f, x, cfg, window=(2.0 * ax, _INF))
    v4 = poisson_integral(f, x, cfg, window=(0.0, 1.0))
    return v1, v2, v3, v4
