"""Divider sets of plane curves: centres of supremum contact disks.

The Divider of a curve collects, for every curve point and side, the centre
of the largest disk tangent there that touches the curve at no other point.
Alongside it the package computes contact curvature, the curvature of
locally convex type and its positive region, evolutes, and a discrete
Divider on bitmaps.
"""

from .curves import ParametricCurve, Point2, circle, ellipse, from_points, hypotrochoid, parabola, parse_preset, segment
from .divider import (
    ContactDisk,
    DividerKind,
    DividerPoint,
    DividerTrace,
    Side,
    contact_radius,
    divider_trace,
    divider_validate,
    hausdorff_distance,
    inward_side,
    newton_polish,
    parse_sides,
    seed_point,
)
from .errors import (
    CertificationError,
    CurveSpecError,
    DividerError,
    EmptyForegroundError,
    NoBoundaryError,
    NoConvergenceError,
    OutOfDomainError,
    SingularParameterizationError,
    ZeroCurvatureError,
)
from .evolute import ContactOrder, CuspKind, EvoluteCusp, evolute_point, find_cusps, osculating_contact_order
from .geometry import (
    Foot,
    FootKind,
    MetricKind,
    all_feet,
    curvature_derivative,
    foot_refine,
    metric_distance,
    signed_curvature,
)
from .lattice import Bitmap, DistanceField, discrete_divider, distance_transform
from .lclt import LcltResult, disconnection_radius_oracle, lclt_curvature, lclt_field, pi_set_raster

__version__ = "0.1.0"
