"""JSON problem documents: schema validation, parsing, and serialization.

A problem file mirrors ProblemInstance plus a stopping rule.  Documents
are validated against a strict schema before any object is built: unknown
fields are rejected everywhere, and every number must be finite (the JSON
extensions NaN/Infinity are refused at parse time, and overflowing
literals are caught by a recursive walk).
"""

from __future__ import annotations

import json
import math

import jsonschema
import numpy as np

from .errors import ProblemFileError, SplitNullError
from .geometry import SpaceGeometry
from .operators import IndicatorSubdifferential, MonotoneOperator, PsdLinear, Scaling
from .sets import (
    Ball,
    Box,
    ConvexSet,
    FullSpace,
    Halfspace,
    HalfspaceIntersection,
    IntersectionWith,
)
from .solver import (
    ErrorSchedule,
    ParameterSchedules,
    ProblemInstance,
    Schedule,
    StoppingRule,
)
from .wmaps import AffineContraction, Identity, NonexpansiveMap, SetProjection, WFamily

_VECTOR = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_MATRIX = {"type": "array", "items": _VECTOR, "minItems": 1}

_SET = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "full"}, "dim": {"type": "integer", "minimum": 1}},
            "required": ["kind", "dim"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "box"}, "lo": _VECTOR, "hi": _VECTOR},
            "required": ["kind", "lo", "hi"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"const": "ball"},
                "center": _VECTOR,
                "radius": {"type": "number"},
            },
            "required": ["kind", "center", "radius"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"const": "halfspaces"},
                "cuts": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "properties": {"a": _VECTOR, "b": {"type": "number"}},
                        "required": ["a", "b"],
                        "additionalProperties": False,
                    },
                },
            },
            "required": ["kind", "cuts"],
            "additionalProperties": False,
        },
    ]
}
# a base set intersected with cuts; the self reference goes through $defs
# because jsonschema cannot walk a cyclic Python dict
_SET["oneOf"].append(
    {
        "type": "object",
        "properties": {
            "kind": {"const": "intersection"},
            "base": {"$ref": "#/$defs/set"},
            "cuts": _SET["oneOf"][3]["properties"]["cuts"],
        },
        "required": ["kind", "base", "cuts"],
        "additionalProperties": False,
    }
)

_OPERATOR = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "scaling"}, "a": {"type": "number"}},
            "required": ["kind", "a"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "psd_linear"}, "B": _MATRIX},
            "required": ["kind", "B"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "indicator"}, "set": _SET},
            "required": ["kind", "set"],
            "additionalProperties": False,
        },
    ]
}

_MAP = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "identity"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "set_projection"}, "set": _SET},
            "required": ["kind", "set"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "affine"}, "Q": _MATRIX, "b": _VECTOR},
            "required": ["kind", "Q", "b"],
            "additionalProperties": False,
        },
    ]
}

_FAMILY = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "kind": {"const": "identity"},
                "depth": {"type": "integer", "minimum": 1},
                "lambda": {"type": "number"},
            },
            "required": ["kind", "depth"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "maps": {"type": "array", "items": _MAP, "minItems": 1},
                "lambda": {
                    "oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}}]
                },
                "bound": {"type": "number"},
            },
            "required": ["maps"],
            "additionalProperties": False,
        },
    ]
}

_SCHEDULE = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "constant"}, "value": {"type": "number"}},
            "required": ["kind", "value"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"enum": ["inverse", "one_minus_inverse"]},
                "scale": {"type": "number"},
                "offset": {"type": "number"},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "explicit"}, "values": _VECTOR},
            "required": ["kind", "values"],
            "additionalProperties": False,
        },
    ]
}

_ERROR_SCHEDULE = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "zero"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"const": "decay"},
                "direction": _VECTOR,
                "scale": {"type": "number"},
                "offset": {"type": "number"},
            },
            "required": ["kind", "direction"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "explicit"}, "vectors": _MATRIX},
            "required": ["kind", "vectors"],
            "additionalProperties": False,
        },
    ]
}

SCHEMA = {
    "$defs": {"set": _SET},
    "type": "object",
    "properties": {
        "space": {
            "type": "object",
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "p": {"type": "number", "exclusiveMinimum": 1},
            },
            "required": ["dim"],
            "additionalProperties": False,
        },
        "target_space": {
            "type": "object",
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "p": {"type": "number", "exclusiveMinimum": 1},
            },
            "required": ["dim"],
            "additionalProperties": False,
        },
        "A": _MATRIX,
        "source_op": _OPERATOR,
        "target_op": _OPERATOR,
        "constraint": _SET,
        "inner_map": _MAP,
        "family": _FAMILY,
        "schedules": {
            "type": "object",
            "properties": {
                "alpha": _SCHEDULE,
                "sigma": _SCHEDULE,
                "lambda": _SCHEDULE,
                "mu": _SCHEDULE,
                "error": _ERROR_SCHEDULE,
                "floor": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "gamma": {"type": "number", "exclusiveMinimum": 0},
        "smoothness_const": {"type": "number", "exclusiveMinimum": 0},
        "start": _VECTOR,
        "stop": {
            "type": "object",
            "properties": {
                "tol": {"type": "number"},
                "max_iters": {"type": "integer", "minimum": 1},
                "guard": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "required": ["space", "target_space", "A", "source_op", "target_op",
                 "constraint", "gamma", "start"],
    "additionalProperties": False,
}


def _reject_constant(token):
    raise ProblemFileError(f"non-finite JSON constant {token!r} is not allowed")


def _assert_finite(node, path="$"):
    if isinstance(node, bool):
        return
    if isinstance(node, (int, float)):
        if not math.isfinite(node):
            raise ProblemFileError(f"non-finite number at {path}")
        return
    if isinstance(node, dict):
        for k, v in node.items():
            _assert_finite(v, f"{path}.{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _assert_finite(v, f"{path}[{i}]")


def validate_document(doc: dict) -> None:
    """Schema-check a parsed problem document; raises ProblemFileError."""
    _assert_finite(doc)
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ProblemFileError(f"problem document rejected: {exc.message}") from exc


# ---------------------------------------------------------------------------
# document -> objects

def _parse_set(doc) -> ConvexSet:
    kind = doc["kind"]
    if kind == "full":
        return FullSpace(doc["dim"])
    if kind == "box":
        return Box(doc["lo"], doc["hi"])
    if kind == "ball":
        return Ball(doc["center"], doc["radius"])
    if kind == "halfspaces":
        return HalfspaceIntersection([Halfspace(np.asarray(c["a"], float), c["b"]) for c in doc["cuts"]])
    if kind == "intersection":
        return IntersectionWith(
            _parse_set(doc["base"]),
            [Halfspace(np.asarray(c["a"], float), c["b"]) for c in doc["cuts"]],
        )
    raise ProblemFileError(f"unknown set kind {kind!r}")


def _parse_operator(doc, dim: int) -> MonotoneOperator:
    kind = doc["kind"]
    if kind == "scaling":
        return Scaling(doc["a"], dim)
    if kind == "psd_linear":
        return PsdLinear(np.asarray(doc["B"], float))
    if kind == "indicator":
        return IndicatorSubdifferential(_parse_set(doc["set"]))
    raise ProblemFileError(f"unknown operator kind {kind!r}")


def _parse_map(doc) -> NonexpansiveMap:
    kind = doc["kind"]
    if kind == "identity":
        return Identity()
    if kind == "set_projection":
        return SetProjection(_parse_set(doc["set"]))
    if kind == "affine":
        return AffineContraction(np.asarray(doc["Q"], float), np.asarray(doc["b"], float))
    raise ProblemFileError(f"unknown map kind {kind!r}")


def _parse_family(doc) -> WFamily:
    if doc.get("kind") == "identity":
        return WFamily([Identity()] * doc["depth"], doc.get("lambda", 0.5))
    maps = [_parse_map(m) for m in doc["maps"]]
    return WFamily(maps, doc.get("lambda", 0.5), doc.get("bound"))


def _parse_schedule(doc) -> Schedule:
    kind = doc["kind"]
    if kind == "constant":
        return Schedule.constant(doc["value"])
    if kind == "inverse":
        return Schedule.inverse(doc.get("scale", 1.0), doc.get("offset", 0.0))
    if kind == "one_minus_inverse":
        return Schedule.one_minus_inverse(doc.get("scale", 1.0), doc.get("offset", 0.0))
    if kind == "explicit":
        return Schedule.explicit(doc["values"])
    raise ProblemFileError(f"unknown schedule kind {kind!r}")


def _parse_error_schedule(doc) -> ErrorSchedule:
    kind = doc["kind"]
    if kind == "zero":
        return ErrorSchedule.zero()
    if kind == "decay":
        return ErrorSchedule.decay(doc["direction"], doc.get("scale", 1.0), doc.get("offset", 0.0))
    if kind == "explicit":
        return ErrorSchedule.explicit(doc["vectors"])
    raise ProblemFileError(f"unknown error schedule kind {kind!r}")


def _parse_schedules(doc) -> ParameterSchedules:
    defaults = ParameterSchedules()
    return ParameterSchedules(
        alpha=_parse_schedule(doc["alpha"]) if "alpha" in doc else defaults.alpha,
        sigma=_parse_schedule(doc["sigma"]) if "sigma" in doc else defaults.sigma,
        lam=_parse_schedule(doc["lambda"]) if "lambda" in doc else defaults.lam,
        mu=_parse_schedule(doc["mu"]) if "mu" in doc else defaults.mu,
        error=_parse_error_schedule(doc["error"]) if "error" in doc else defaults.error,
        floor=doc.get("floor", defaults.floor),
    )


def _operator_dim(M) -> int | None:
    if isinstance(M, Scaling):
        return M.dim
    if isinstance(M, PsdLinear):
        return M.B.shape[0]
    if isinstance(M, IndicatorSubdifferential):
        return M.set.dim
    return None


def _map_dim(T) -> int | None:
    if isinstance(T, SetProjection):
        return T.set.dim
    if isinstance(T, AffineContraction):
        return T.Q.shape[0]
    return None  # Identity works in any dimension


def _check_consistency(P: ProblemInstance) -> None:
    n, m = P.space.dim, P.target_space.dim
    if P.A.shape != (m, n):
        raise ProblemFileError(
            f"A has shape {P.A.shape}, expected ({m}, {n}) from the declared spaces"
        )
    if P.start.shape != (n,):
        raise ProblemFileError(f"start has {P.start.size} entries, expected {n}")
    if P.constraint.dim != n:
        raise ProblemFileError(
            f"constraint lives in dimension {P.constraint.dim}, expected {n}"
        )
    if (d := _operator_dim(P.source_op)) is not None and d != n:
        raise ProblemFileError(f"source_op dimension {d} does not match the space ({n})")
    if (d := _operator_dim(P.target_op)) is not None and d != m:
        raise ProblemFileError(f"target_op dimension {d} does not match the target space ({m})")
    for T in (P.inner_map, *P.family.maps):
        if (d := _map_dim(T)) is not None and d != n:
            raise ProblemFileError(f"a map works in dimension {d}, expected {n}")


def parse_problem(doc: dict) -> tuple[ProblemInstance, StoppingRule]:
    """Build a validated instance and stopping rule from a parsed document."""
    validate_document(doc)
    try:
        space = SpaceGeometry(doc["space"]["dim"], doc["space"].get("p", 2.0))
        target_space = SpaceGeometry(doc["target_space"]["dim"], doc["target_space"].get("p", 2.0))
        instance = ProblemInstance(
            space=space,
            target_space=target_space,
            A=np.asarray(doc["A"], float),
            source_op=_parse_operator(doc["source_op"], space.dim),
            target_op=_parse_operator(doc["target_op"], target_space.dim),
            constraint=_parse_set(doc["constraint"]),
            inner_map=_parse_map(doc.get("inner_map", {"kind": "identity"})),
            family=_parse_family(doc.get("family", {"kind": "identity", "depth": 50})),
            schedules=_parse_schedules(doc.get("schedules", {})),
            gamma=doc["gamma"],
            start=np.asarray(doc["start"], float),
            smoothness_const=doc.get("smoothness_const", 1.0),
        )
    except ProblemFileError:
        raise
    except (ValueError, SplitNullError) as exc:
        raise ProblemFileError(f"problem document rejected: {exc}") from exc
    _check_consistency(instance)
    stop_doc = doc.get("stop", {})
    stop = StoppingRule(
        tol=stop_doc.get("tol", 1e-8),
        max_iters=stop_doc.get("max_iters", 100000),
        guard=stop_doc.get("guard", 1e8),
    )
    return instance, stop


def load_problem(path) -> tuple[ProblemInstance, StoppingRule]:
    """Read and validate a problem file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProblemFileError("problem document must be a JSON object")
    return parse_problem(doc)


# ---------------------------------------------------------------------------
# objects -> document

def _set_doc(S: ConvexSet) -> dict:
    if isinstance(S, FullSpace):
        return {"kind": "full", "dim": S.dim}
    if isinstance(S, Box):
        return {"kind": "box", "lo": S.lo.tolist(), "hi": S.hi.tolist()}
    if isinstance(S, Ball):
        return {"kind": "ball", "center": S.center.tolist(), "radius": S.radius}
    if isinstance(S, HalfspaceIntersection):
        return {"kind": "halfspaces", "cuts": [{"a": c.a.tolist(), "b": c.b} for c in S.cuts]}
    if isinstance(S, IntersectionWith):
        return {
            "kind": "intersection",
            "base": _set_doc(S.base),
            "cuts": [{"a": c.a.tolist(), "b": c.b} for c in S.cuts],
        }
    raise ProblemFileError(f"cannot serialize set {type(S).__name__}")


def _operator_doc(M: MonotoneOperator) -> dict:
    if isinstance(M, Scaling):
        return {"kind": "scaling", "a": M.a}
    if isinstance(M, PsdLinear):
        return {"kind": "psd_linear", "B": M.B.tolist()}
    if isinstance(M, IndicatorSubdifferential):
        return {"kind": "indicator", "set": _set_doc(M.set)}
    raise ProblemFileError(f"cannot serialize operator {type(M).__name__}")


def _map_doc(T: NonexpansiveMap) -> dict:
    if isinstance(T, Identity):
        return {"kind": "identity"}
    if isinstance(T, SetProjection):
        return {"kind": "set_projection", "set": _set_doc(T.set)}
    if isinstance(T, AffineContraction):
        return {"kind": "affine", "Q": T.Q.tolist(), "b": T.b.tolist()}
    raise ProblemFileError(f"cannot serialize map {type(T).__name__}")


def _family_doc(F: WFamily) -> dict:
    lambdas = set(F.lambdas)
    if all(isinstance(t, Identity) for t in F.maps) and len(lambdas) == 1:
        return {"kind": "identity", "depth": F.depth, "lambda": F.lambdas[0]}
    doc = {"maps": [_map_doc(t) for t in F.maps], "bound": F.bound}
    doc["lambda"] = F.lambdas[0] if len(lambdas) == 1 else list(F.lambdas)
    return doc


def _schedule_doc(s: Schedule) -> dict:
    if s.kind == "constant":
        return {"kind": "constant", "value": s.value}
    if s.kind in ("inverse", "one_minus_inverse"):
        return {"kind": s.kind, "scale": s.scale, "offset": s.offset}
    if s.kind == "explicit":
        return {"kind": "explicit", "values": list(s.values)}
    raise ProblemFileError(f"cannot serialize schedule kind {s.kind!r}")


def _error_doc(e: ErrorSchedule) -> dict:
    if e.kind == "zero":
        return {"kind": "zero"}
    if e.kind == "decay":
        return {"kind": "decay", "direction": list(e.direction), "scale": e.scale, "offset": e.offset}
    if e.kind == "explicit":
        return {"kind": "explicit", "vectors": [list(v) for v in e.vectors]}
    raise ProblemFileError(f"cannot serialize error schedule kind {e.kind!r}")


def problem_to_doc(P: ProblemInstance, stop: StoppingRule | None = None) -> dict:
    """Serialize an instance (and optional stopping rule) to a plain document."""
    doc = {
        "space": {"dim": P.space.dim, "p": P.space.p},
        "target_space": {"dim": P.target_space.dim, "p": P.target_space.p},
        "A": P.A.tolist(),
        "source_op": _operator_doc(P.source_op),
        "target_op": _operator_doc(P.target_op),
        "constraint": _set_doc(P.constraint),
        "inner_map": _map_doc(P.inner_map),
        "family": _family_doc(P.family),
        "schedules": {
            "alpha": _schedule_doc(P.schedules.alpha),
            "sigma": _schedule_doc(P.schedules.sigma),
            "lambda": _schedule_doc(P.schedules.lam),
            "mu": _schedule_doc(P.schedules.mu),
            "error": _error_doc(P.schedules.error),
            "floor": P.schedules.floor,
        },
        "gamma": P.gamma,
        "smoothness_const": P.smoothness_const,
        "start": P.start.tolist(),
    }
    if stop is not None:
        doc["stop"] = {"tol": stop.tol, "max_iters": stop.max_iters, "guard": stop.guard}
    return doc


def save_problem(path, P: ProblemInstance, stop: StoppingRule | None = None) -> None:
    doc = problem_to_doc(P, stop)
    validate_document(doc)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
