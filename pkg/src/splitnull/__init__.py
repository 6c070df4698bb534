"""Hybrid projection methods for split common null point problems in l^p.

The package models two finite-dimensional spaces with l^p norms, a linear
map between them, and a maximal monotone operator on each side.  The
solver produces a sequence of generalized projections onto shrinking
half-space intersections whose limit solves both inclusions at once.
"""

from .errors import (
    DimensionMismatchError,
    DivergedError,
    EmptySetError,
    InvalidParameterError,
    NoConvergenceError,
    NotSingleValuedError,
    ProblemFileError,
    SplitNullError,
)
from .geometry import (
    SpaceGeometry,
    duality_map,
    inverse_duality_map,
    lp_norm,
    lyapunov,
)
from .operators import (
    IndicatorSubdifferential,
    MonotoneOperator,
    PsdLinear,
    Scaling,
    check_resolvent_inequality,
    generalized_resolvent,
)
from .problemfile import load_problem, parse_problem, problem_to_doc, save_problem
from .sets import (
    Ball,
    Box,
    ConvexSet,
    FullSpace,
    Halfspace,
    HalfspaceIntersection,
    IntersectionWith,
    euclidean_projection,
    generalized_projection,
    project_halfspace_intersection,
)
from .solver import (
    ErrorSchedule,
    IterateState,
    ParameterSchedules,
    ProblemInstance,
    RunResult,
    Schedule,
    StoppingRule,
    fejer_cut,
    history_cut,
    make_sfp_instance,
    operator_norm_bound,
    run,
    split_residual_cut,
    step,
    validate_instance,
)
from .trace import TRACE_HEADER, trace_row, write_trace
from .wmaps import (
    AffineContraction,
    Identity,
    NonexpansiveMap,
    SetProjection,
    WFamily,
    identity_family,
)

__version__ = "0.1.0"

__all__ = [
    "AffineContraction",
    "Ball",
    "Box",
    "ConvexSet",
    "DimensionMismatchError",
    "DivergedError",
    "EmptySetError",
    "ErrorSchedule",
    "FullSpace",
    "Halfspace",
    "HalfspaceIntersection",
    "Identity",
    "IndicatorSubdifferential",
    "IntersectionWith",
    "InvalidParameterError",
    "IterateState",
    "MonotoneOperator",
    "NoConvergenceError",
    "NonexpansiveMap",
    "NotSingleValuedError",
    "ParameterSchedules",
    "ProblemFileError",
    "ProblemInstance",
    "PsdLinear",
    "RunResult",
    "Scaling",
    "Schedule",
    "SetProjection",
    "SpaceGeometry",
    "SplitNullError",
    "StoppingRule",
    "TRACE_HEADER",
    "WFamily",
    "check_resolvent_inequality",
    "duality_map",
    "euclidean_projection",
    "fejer_cut",
    "generalized_projection",
    "generalized_resolvent",
    "history_cut",
    "identity_family",
    "inverse_duality_map",
    "load_problem",
    "lp_norm",
    "lyapunov",
    "make_sfp_instance",
    "operator_norm_bound",
    "parse_problem",
    "problem_to_doc",
    "project_halfspace_intersection",
    "run",
    "save_problem",
    "split_residual_cut",
    "step",
    "trace_row",
    "validate_instance",
    "write_trace",
]
