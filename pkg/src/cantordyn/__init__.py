"""Cantor sets of the real quadratic family x^2 + c, nested refinements of
arbitrary target Cantor sets, the piecewise-linear conjugacy between them,
and orbit/escape-time tools built on top."""

from .conjugacy import (MappingReport, MonotonePLMap, build_phi, eval_fstar,
                        eval_phi, eval_phi_inverse, segment_mapping_check)
from .errors import (CantorDynError, DomainError, NoRealFixedPoint,
                     RegimeError, SpecError)
from .fileio import (PALETTE, export_cobweb, export_escape_image,
                     load_gap_tree, load_system, save_gap_tree, save_system)
from .model_cantor import (MAX_DEPTH, IntervalAddress, IntervalSystem,
                           build_model_system, max_segment_length,
                           preimage_interval)
from .orbit_engine import (ORBIT_DRIFT_BUDGET, OrbitResult, classify_grid,
                           cobweb_trace, iterate_model, iterate_target,
                           mandelbrot_escape, mandelbrot_grid)
from .quadratic_map import (QuadraticParams, derive_params, eval_map,
                            expansion_bound, fixed_points, gap_A0)
from .target_cantor import (AffineIFS2, CantorSpec, ExplicitGapTree,
                            FatCantor, MiddleAlpha, TargetSystem,
                            build_target_system, find_gap_in_middle_third,
                            membership, middle_thirds, tighten_gap)
from .verification import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "AffineIFS2", "CantorDynError", "CantorSpec", "CheckResult",
    "DomainError", "ExplicitGapTree", "FatCantor", "IntervalAddress",
    "IntervalSystem", "MAX_DEPTH", "MappingReport", "MiddleAlpha",
    "MonotonePLMap", "NoRealFixedPoint", "ORBIT_DRIFT_BUDGET", "OrbitResult",
    "PALETTE", "QuadraticParams", "RegimeError", "SpecError", "TargetSystem",
    "build_model_system", "build_phi", "build_target_system", "classify_grid",
    "cobweb_trace", "derive_params", "eval_fstar", "eval_map", "eval_phi",
    "eval_phi_inverse", "expansion_bound", "export_cobweb",
    "export_escape_image", "find_gap_in_middle_third", "fixed_points",
    "gap_A0", "iterate_model", "iterate_target", "load_gap_tree",
    "load_system", "mandelbrot_escape", "mandelbrot_grid",
    "max_segment_length", "membership", "middle_thirds", "preimage_interval",
    "run_verification", "save_gap_tree", "save_system",
    "segment_mapping_check", "tighten_gap",
]
