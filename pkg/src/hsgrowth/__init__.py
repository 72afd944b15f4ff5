"""Numerical potential theory in the upper half-space of R^n (n >= 3).

Kernels and Poisson/Green integrals, discrete-measure Green potentials,
fractional maximal functions with certified Vitali ball covers, and an
empirical harness for the asymptotic growth estimates of harmonic and
subharmonic functions outside exceptional ball unions.
"""

from .boundary import (AdmissibilityError, BoundaryData, ConvergenceError,
                       poisson_integral, poisson_integral_split,
                       tail_threshold, weighted_lp_norm, QuadConfig)
from .core import BACKEND
from .covering import (BallCover, ExceptionalSet, exceptional_union,
                       maximal_function, point_excluded,
                       superlevel_membership, vitali_cover, witness_radius)
from .growth import (GrowthSeries, GrowthTarget, discretize_boundary_weight,
                     growth_ratio_series, growth_target, log_boundary_check,
                     sample_ray, theorem_a_mode)
from .kernels import (KernelConstants, SingularityError, fundamental_solution,
                      green, green_abs_bound, kernel_far_bound,
                      poisson_kernel, surface_area)
from .measures import (DiscreteMeasure, green_potential,
                       measure_condition_check, subharmonic_value,
                       weighted_measure)
from .params import (Mode, ParamError, ParamSet, RegionId,
                     classify_boundary_region, classify_halfspace_region,
                     reflect, validate_params)

__version__ = "0.1.0"
