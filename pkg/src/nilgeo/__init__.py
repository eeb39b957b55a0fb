"""Geodesics, distances and geodesic-triangle angle sums in Nil geometry."""

from ._accel import HAVE_NUMBA
from .bvp import (DEFAULT_CONFIG, ShootingSolution, SolverConfig, SolverFailure,
                  distance, initial_direction, shoot)
from .core import (ORIGIN, MetricTensor, NilPoint, NilTranslation, TangentVector,
                   angle_between, compose, invert, metric_at, pushforward,
                   quadratic_map, reflect_y_axis, rotate_about_z, translation_to)
from .flow import (GeodesicArc, GeodesicDirection, christoffel_at, geodesic_point,
                   geodesic_tangent, integrate_geodesic, sample_geodesic,
                   unit_tangent_at_origin)
from .triangles import (Triangle, TriangleReport, classify_examples, family_scan,
                        fibre_like_triangle, find_pi_sum, hyperbolic_like_triangle,
                        triangle_report)

__version__ = "0.1.0"
