"""Flat dotted key = value experiment configs.

Example:

    params.n = 3
    params.p = 1
    params.gamma = 3
    params.alpha = 3
    params.mode = theorem-1
    boundary.kind = compact-bump
    boundary.radius = 1.0
    boundary.amplitude = 1.0
    ray.directions = 0,0,1; 0.3,0.3,0.906
    ray.t_exponents = 1:12
    covering.band_count = 4
    covering.sampler = random
    covering.candidates_per_band = 128
    covering.seed = 7
    output.dir = out
"""

from __future__ import annotations

import math
import os

import numpy as np

from .boundary import BoundaryData, QuadConfig
from .covering import grid_sampler, random_sampler
from .measures import DiscreteMeasure
from .params import ParamSet, validate_params

__all__ = ["ConfigError", "parse_config", "ExperimentConfig"]


class ConfigError(ValueError):
    pass


def parse_config(path) -> dict:
    """Parse `section.key = value` lines into nested dicts."""
    sections: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if "." not in key:
                raise ConfigError(f"{path}:{lineno}: key needs a section dot")
            section, name = key.split(".", 1)
            sections.setdefault(section, {})[name] = value
    return sections


def _floats(text, sep=","):
    return [float(v) for v in text.split(sep) if v.strip()]


class ExperimentConfig:
    """Validated experiment wiring built from a parsed config file."""

    def __init__(self, sections: dict, base_dir="."):
        self.sections = sections
        self.base_dir = base_dir
        try:
            self.params = self._build_params()
            self.boundary = self._build_boundary()
            self.measure = self._build_measure()
            self.quad = self._build_quad()
            self.rays = self._build_rays()
            self.covering = self._build_covering()
            self.output_dir = self._build_output()
        except ConfigError:
            raise
        except (KeyError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls(parse_config(path), base_dir=os.path.dirname(path) or ".")

    def _build_params(self) -> ParamSet:
        sec = self.sections.get("params")
        if not sec:
            raise ConfigError("missing [params.*] block")
        return validate_params(
            int(sec["n"]), float(sec["p"]), float(sec["gamma"]),
            float(sec["alpha"]), sec.get("mode", "theorem-1"),
        )

    def _build_boundary(self):
        sec = self.sections.get("boundary")
        if not sec:
            return None
        n = self.params.n
        kind = sec["kind"]
        if kind == "compact-bump":
            return BoundaryData.compact_bump(
                n, radius=float(sec.get("radius", 1.0)),
                amplitude=float(sec.get("amplitude", 1.0)))
        if kind == "gaussian":
            return BoundaryData.gaussian(
                n, amplitude=float(sec.get("amplitude", 1.0)),
                width=float(sec.get("width", 1.0)))
        if kind == "radial-power":
            return BoundaryData.radial_power(n, float(sec["s"]))
        if kind == "tabulated":
            path = os.path.join(self.base_dir, sec["path"])
            if not os.path.exists(path):
                raise ConfigError(f"boundary CSV not found: {path}")
            return BoundaryData.from_csv(path, n,
                                         float(sec["support_radius"]))
        raise ConfigError(f"unknown boundary kind {kind!r}")

    def _build_measure(self):
        sec = self.sections.get("measure")
        if not sec or "path" not in sec:
            return None
        path = os.path.join(self.base_dir, sec["path"])
        if not os.path.exists(path):
            raise ConfigError(f"measure CSV not found: {path}")
        return DiscreteMeasure.from_csv(path,
                                        domain=sec.get("domain", "half-space"))

    def _build_quad(self) -> QuadConfig:
        sec = self.sections.get("quad", {})
        return QuadConfig(
            nodes_per_panel=int(sec.get("nodes_per_panel", 12)),
            angular_nodes=int(sec.get("angular_nodes", 32)),
            trunc_multiplier=float(sec.get("trunc_multiplier", 64.0)),
            tol=float(sec.get("tol", 1e-4)),
        )

    def _build_rays(self) -> dict:
        sec = self.sections.get("ray", {})
        dir_text = sec.get("directions", "0,0,1" if self.params.n == 3
                           else "0,0,0,1")
        directions = [np.array(_floats(d)) for d in dir_text.split(";")
                      if d.strip()]
        for d in directions:
            if d.shape != (self.params.n,):
                raise ConfigError("ray direction has the wrong dimension")
        expo = sec.get("t_exponents", "1:12")
        lo, hi = (int(v) for v in expo.split(":"))
        t_values = 2.0 ** np.arange(lo, hi + 1)
        return {
            "directions": directions,
            "t_values": t_values,
            "aperture_deg": float(sec.get("aperture_deg", 5.0)),
            "trend_threshold": float(sec.get("trend_threshold", 0.1)),
            "min_clear_fraction": float(sec.get("min_clear_fraction", 0.9)),
        }

    def _build_covering(self) -> dict:
        sec = self.sections.get("covering", {})
        kind = sec.get("sampler", "grid")
        count = int(sec.get("candidates_per_band", 64))
        if kind == "random":
            if "seed" not in sec:
                raise ConfigError("random sampler requires covering.seed")
            sampler = random_sampler(count, self.params.n,
                                     int(sec["seed"]))
        elif kind == "grid":
            sampler = grid_sampler(count, self.params.n)
        else:
            raise ConfigError(f"unknown sampler {kind!r}")
        return {
            "band_count": int(sec.get("band_count", 4)),
            "sampler": sampler,
            "shells_per_octave": int(sec.get("shells_per_octave", 2)),
        }

    def _build_output(self) -> str:
        sec = self.sections.get("output", {})
        default = os.environ.get("HSGROWTH_OUTDIR", ".")
        return sec.get("dir", default)
