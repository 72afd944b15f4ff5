"""Boundary data, weighted norms, and the Poisson-integral quadrature.

Oracles:
  [DERIVED] axis values for the disk indicator, by reducing the Poisson
    integral to a 1-d radial integral with closed antiderivative:
      n = 3:  v((0,0,h))   = 1 - h / sqrt(1 + h^2)
      n = 4:  v((0,0,0,h)) = (2/pi) (arctan(rho/h) - h rho/(rho^2 + h^2))
  [DERIVED] weighted norms with closed antiderivatives:
      bump, (p, gamma) = (1, 3), n = 3:  2 pi int_0^1 r (1+r)^-3 dr = pi/4
      power s = -2, (p, gamma) = (2, 1): 2 pi int_0^inf r (1+r)^-5 dr = pi/6
  [TRIVIAL] P[c] = c, split additivity, window restriction.
"""

import csv
import math

import numpy as np
import pytest

from hsgrowth.boundary import (AdmissibilityError, BoundaryData, ConvergenceError,
                               QuadConfig, poisson_integral,
                               poisson_integral_split, tail_threshold,
                               weighted_lp_norm)
from hsgrowth.params import validate_params


def disk_axis_value_n3(h, rho=1.0):
    return 1.0 - h / math.hypot(rho, h)


def disk_axis_value_n4(h, rho=1.0):
    return (2.0 / math.pi) * (math.atan2(rho, h)
                              - h * rho / (rho**2 + h**2))


class TestBoundaryData:
    def test_profiles(self):
        f = BoundaryData.radial_power(3, -1.0)
        assert f.profile(1.0) == pytest.approx(0.5)
        g = BoundaryData.gaussian(3, 2.0, 3.0)
        assert g.profile(3.0) == pytest.approx(2.0 * math.exp(-1.0))
        b = BoundaryData.compact_bump(3, radius=2.0, amplitude=0.5)
        assert b.profile(1.9) == 0.5 and b.profile(2.1) == 0.0

    def test_constant(self):
        c = BoundaryData.constant(3, 4.0)
        assert np.allclose(c(np.array([[0.0, 0.0], [7.0, -3.0]])), 4.0)

    def test_feature_radii(self):
        assert BoundaryData.compact_bump(3, 1.5).feature_radii == [1.5]
        assert BoundaryData.gaussian(3).feature_radii == []

    def test_admissibility(self):
        p_t1 = validate_params(3, 1.0, 3.0, 3.0, "theorem-1")
        assert BoundaryData.compact_bump(3).admissible(p_t1)
        # p*s - gamma + (n-2) < -1 fails for s = 0, gamma = 1
        p_g1 = validate_params(3, 1.0, 1.0, 1.0, "theorem-1")
        assert not BoundaryData.radial_power(3, 0.0).admissible(p_g1)
        assert BoundaryData.radial_power(3, -2.0).admissible(p_g1)

    def test_poisson_integrability(self):
        assert not BoundaryData.radial_power(3, 1.5).poisson_integrable()
        assert BoundaryData.radial_power(3, 0.5).poisson_integrable()

    def test_decay_sup(self):
        g = BoundaryData.gaussian(3, 2.0, 1.0)
        assert g.decay_sup(2.0) == pytest.approx(2.0 * math.exp(-4.0))
        b = BoundaryData.compact_bump(3, 1.0, 3.0)
        assert b.decay_sup(0.5) == 3.0 and b.decay_sup(1.0) == 0.0

    def test_tabulated_from_csv(self, tmp_path):
        xs = np.linspace(-2, 2, 9)
        path = tmp_path / "grid.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["coord_1", "coord_2", "value"])
            for a in xs:
                for b in xs:
                    w.writerow([a, b, math.exp(-(a * a + b * b))])
        f = BoundaryData.from_csv(path, 3, support_radius=2.0)
        pts = np.array([[0.0, 0.0], [1.0, 0.5], [3.0, 0.0]])
        vals = f(pts)
        assert vals[0] == pytest.approx(1.0)
        assert vals[1] == pytest.approx(math.exp(-1.25), rel=0.05)
        assert vals[2] == 0.0  # outside the support radius

    def test_quadconfig_validation(self):
        with pytest.raises(ValueError):
            QuadConfig(nodes_per_panel=1)
        with pytest.raises(ValueError):
            QuadConfig(tol=0.0)
        with pytest.raises(ValueError):
            QuadConfig(tol=0.5)
        with pytest.raises(ValueError):
            QuadConfig(trunc_multiplier=1.0)


class TestWeightedNorm:
    def test_bump_closed_form(self, params_t1):
        f = BoundaryData.compact_bump(3)
        val, tail = weighted_lp_norm(f, params_t1, 4.0)
        assert val == pytest.approx(math.pi / 4.0, rel=1e-9)
        assert tail == 0.0

    def test_power_closed_form(self):
        params = validate_params(3, 2.0, 1.0, 1.0, "theorem-1")
        f = BoundaryData.radial_power(3, -2.0)
        val, tail = weighted_lp_norm(f, params, 2.0**14)
        assert val <= math.pi / 6.0 * (1 + 1e-9)
        assert val + tail >= math.pi / 6.0 * (1 - 1e-9)
        assert val == pytest.approx(math.pi / 6.0, rel=1e-6)

    def test_inadmissible_raises(self):
        params = validate_params(3, 1.0, 1.0, 1.0, "theorem-1")
        with pytest.raises(AdmissibilityError):
            weighted_lp_norm(BoundaryData.radial_power(3, 0.0), params, 8.0)

    def test_tail_threshold(self):
        params = validate_params(3, 2.0, 1.0, 1.0, "theorem-1")
        f = BoundaryData.radial_power(3, -2.0)
        eps = 2.0**-3
        R = tail_threshold(f, params, eps)
        assert R >= 2.0 and math.log2(R) == int(math.log2(R))
        _, tail = weighted_lp_norm(f, params, R)
        assert tail <= eps**params.p / 5.0**params.beta

    def test_tail_threshold_compact(self, params_t1):
        f = BoundaryData.compact_bump(3)
        assert tail_threshold(f, params_t1, 0.25) == 2.0


class TestPoissonIntegral:
    def test_disk_axis_n3(self):
        f = BoundaryData.compact_bump(3)
        cfg = QuadConfig(tol=1e-8)
        for h in (0.25, 1.0, 4.0):
            v = poisson_integral(f, np.array([0.0, 0.0, h]), cfg)
            assert v == pytest.approx(disk_axis_value_n3(h), rel=1e-7)

    def test_disk_axis_n4(self):
        f = BoundaryData.compact_bump(4, radius=1.5)
        cfg = QuadConfig(tol=1e-7)
        for h in (0.5, 2.0):
            v = poisson_integral(f, np.array([0.0, 0.0, 0.0, h]), cfg)
            assert v == pytest.approx(disk_axis_value_n4(h, 1.5), rel=1e-6)

    def test_offaxis_disk_between_extremes(self):
        # 0 < v < amplitude strictly for the indicator
        f = BoundaryData.compact_bump(3)
        v = poisson_integral(f, np.array([0.7, -0.2, 0.5]))
        assert 0.0 < v < 1.0

    def test_constant_reproduced(self):
        one = BoundaryData.constant(3, 2.5)
        cfg = QuadConfig(tol=1e-6)
        for x in ([0.0, 0.0, 1.0], [3.0, -2.0, 0.4], [50.0, 0.0, 7.0]):
            v = poisson_integral(one, np.array(x), cfg)
            assert v == pytest.approx(2.5, rel=1e-4)

    def test_constant_n4(self):
        one = BoundaryData.constant(4)
        v = poisson_integral(one, np.array([1.0, 2.0, -1.0, 0.8]),
                             QuadConfig(tol=1e-5))
        assert v == pytest.approx(1.0, rel=1e-4)

    def test_monopole_far_field(self):
        # for compact data, v(x) -> P(x, 0) * integral(f) as |x| grows
        from hsgrowth.kernels import poisson_kernel

        f = BoundaryData.compact_bump(3)
        x = np.array([60.0, 30.0, 40.0])
        v = poisson_integral(f, x, QuadConfig(tol=1e-8))
        mono = poisson_kernel(x, np.zeros(2)) * math.pi
        assert v == pytest.approx(mono, rel=2e-3)

    def test_far_field_huge_point(self):
        from hsgrowth.kernels import poisson_kernel

        f = BoundaryData.compact_bump(3)
        x = np.array([0.0, 2.0**80, 2.0**80])
        v = poisson_integral(f, x, QuadConfig(tol=1e-6))
        mono = poisson_kernel(x, np.zeros(2)) * math.pi
        assert v == pytest.approx(mono, rel=1e-4)
        assert v > 0.0

    def test_split_additivity(self):
        f = BoundaryData.gaussian(3, 1.0, 2.0)
        cfg = QuadConfig(tol=1e-7)
        x = np.array([1.5, -0.5, 2.0])
        whole = poisson_integral(f, x, cfg)
        parts = poisson_integral_split(f, x, cfg)
        assert sum(parts) == pytest.approx(whole, abs=1e-6, rel=1e-6)

    def test_split_compact_far(self):
        # bump with support 1 seen from |x| = 16: only the |y'| <= 1 part
        f = BoundaryData.compact_bump(3)
        x = np.array([0.0, 12.0, 10.0])
        v1, v2, v3, v4 = poisson_integral_split(f, x)
        assert v1 == v2 == v3 == 0.0
        assert v4 == pytest.approx(poisson_integral(f, x), rel=1e-6)

    def test_split_requires_large_x(self):
        with pytest.raises(ValueError):
            poisson_integral_split(BoundaryData.compact_bump(3),
                                   np.array([0.0, 0.0, 1.0]))

    def test_window_outside_support_is_zero(self):
        f = BoundaryData.compact_bump(3)
        v = poisson_integral(f, np.array([0.0, 0.0, 1.0]),
                             window=(2.0, math.inf))
        assert v == 0.0

    def test_tabulated_matches_radial(self, tmp_path):
        xs = np.linspace(-6, 6, 121)
        grid = np.exp(-(xs[:, None] ** 2 + xs[None, :] ** 2) / 4.0)
        f_tab = BoundaryData.tabulated(3, (xs, xs), grid, support_radius=6.0)
        f_rad = BoundaryData.gaussian(3, 1.0, 2.0)
        x = np.array([0.5, 0.5, 1.0])
        v_tab = poisson_integral(f_tab, x, QuadConfig(tol=1e-4))
        v_rad = poisson_integral(f_rad, x, QuadConfig(tol=1e-6))
        assert v_tab == pytest.approx(v_rad, rel=2e-2)

    def test_divergent_data_rejected(self):
        f = BoundaryData.radial_power(3, 1.5)
        with pytest.raises(AdmissibilityError):
            poisson_integral(f, np.array([0.0, 0.0, 1.0]))

    def test_convergence_error_carries_state(self):
        f = BoundaryData.gaussian(3, 1.0, 2.0)
        cfg = QuadConfig(nodes_per_panel=2, angular_nodes=2, tol=1e-12)
        with pytest.raises(ConvergenceError) as exc:
            poisson_integral(f, np.array([0.3, 0.1, 1.0]), cfg)
        err = exc.value
        assert err.estimate > 0.0
        assert math.isfinite(err.value)

    def test_interior_point_required(self):
        f = BoundaryData.gaussian(3)
        with pytest.raises(ValueError):
            poisson_integral(f, np.array([0.0, 0.0, -1.0]))
