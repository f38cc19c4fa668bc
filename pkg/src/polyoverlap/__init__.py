"""Approximate maximum-overlap translation of simple polygons."""

from .approx import ApproxConfig, approx_polygon, bounding_rectangle, preprocess, scaling_similarity
from .arrangement import Arrangement
from .decompose import Decomposition, count_notches, decompose
from .errors import (DegenerateConfigurationError, InfeasibleError, NoSuchSliceError, OverlapError,
                     PreconditionError, ValidationError)
from .geometry import (ConvexPolygon, Point, SimplePolygon, convex_intersection, minkowski_sum,
                       overlap_area, width_and_diameter)
from .lp import solve_lp
from .matcher import (MatchConfig, MatchResult, PairSum, QueryStructure, build_query_structure,
                      match_polygons, query_overlap)
from .oracle import OracleReport, exact_overlap_general, grid_max_overlap
from .overlap import face_quadratic
from .pairapprox import approx_convex_pair
from .quadratic import Quadratic2, maximize_quadratic_over_convex
from .slices import compute_slice

__all__ = [
    "ApproxConfig", "Arrangement", "ConvexPolygon", "Decomposition", "DegenerateConfigurationError",
    "InfeasibleError", "MatchConfig", "MatchResult", "NoSuchSliceError", "OracleReport",
    "OverlapError", "PairSum", "Point", "PreconditionError", "Quadratic2", "QueryStructure",
    "SimplePolygon", "ValidationError", "approx_convex_pair", "approx_polygon", "bounding_rectangle",
    "build_query_structure", "compute_slice", "convex_intersection", "count_notches", "decompose",
    "exact_overlap_general", "face_quadratic", "grid_max_overlap", "match_polygons",
    "maximize_quadratic_over_convex", "minkowski_sum", "overlap_area", "preprocess",
    "query_overlap", "scaling_similarity", "solve_lp", "width_and_diameter",
]
