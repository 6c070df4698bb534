"""Maximal monotone operators and their generalized resolvents.

The resolvent with parameter r > 0 sends x to the unique u with
``J(x) in J(u) + r*M(u)`` where J is the duality map.  For p = 2 the shipped
variants have closed forms; otherwise u is found by damped Newton on the
single-valued residual.  For the subdifferential of a set indicator the
resolvent is the generalized projection onto the set, independent of r.
"""

from __future__ import annotations

import numpy as np

from ._newton import damped_newton
from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    NoConvergenceError,
    NotSingleValuedError,
)
from .geometry import (
    DEFAULT_TOL,
    SpaceGeometry,
    duality_jacobian,
    duality_map,
    ensure_finite,
    lp_norm,
    lyapunov,
)
from .sets import ConvexSet, generalized_projection


class MonotoneOperator:
    """Base class; subclasses are maximal monotone on their whole space."""

    dim: int

    def value(self, x) -> np.ndarray:
        """Pointwise value, defined only for single-valued variants."""
        raise NotSingleValuedError(f"{type(self).__name__} has no pointwise values")

    def _value_jacobian(self, x) -> np.ndarray:
        raise NotSingleValuedError(f"{type(self).__name__} has no pointwise values")


class Scaling(MonotoneOperator):
    """``x -> a * x`` with a >= 0; zero set is {0} when a > 0, everything at a = 0."""

    def __init__(self, a: float, dim: int):
        a = float(a)
        if not np.isfinite(a) or a < 0.0:
            raise InvalidParameterError(f"scaling coefficient must be >= 0, got {a!r}")
        if int(dim) != dim or dim < 1:
            raise InvalidParameterError("dim must be a positive integer")
        self.a = a
        self.dim = int(dim)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatchError(f"expected a vector of length {self.dim}")
        return self.a * x

    def _value_jacobian(self, x):
        return self.a * np.eye(self.dim)

    def __repr__(self):
        return f"Scaling(a={self.a}, dim={self.dim})"


class PsdLinear(MonotoneOperator):
    """``x -> B x`` for a symmetric positive semidefinite matrix B."""

    def __init__(self, B):
        B = ensure_finite(B, "psd matrix")
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionMismatchError("B must be square")
        scale = 1.0 + float(np.max(np.abs(B))) if B.size else 1.0
        if np.max(np.abs(B - B.T)) > 1e-10 * scale:
            raise InvalidParameterError("B must be symmetric")
        if float(np.min(np.linalg.eigvalsh(B))) < -1e-10:
            raise InvalidParameterError("B must be positive semidefinite")
        self.B = B
        self.dim = B.shape[0]

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatchError(f"expected a vector of length {self.dim}")
        return self.B @ x

    def _value_jacobian(self, x):
        return self.B

    def __repr__(self):
        return f"PsdLinear(dim={self.dim})"


class IndicatorSubdifferential(MonotoneOperator):
    """Subdifferential of the indicator of a closed convex set.

    Set-valued (the normal cone), so pointwise evaluation raises; its
    resolvent is the generalized projection onto the set for every r > 0,
    and its zero set is the set itself.
    """

    def __init__(self, set_: ConvexSet):
        if not isinstance(set_, ConvexSet):
            raise InvalidParameterError("expected a ConvexSet")
        self.set = set_
        self.dim = set_.dim

    def __repr__(self):
        return f"IndicatorSubdifferential({self.set!r})"


def generalized_resolvent(M: MonotoneOperator, r: float, x, geom: SpaceGeometry,
                          tol: float = DEFAULT_TOL) -> np.ndarray:
    """Solve ``J(u) + r*M(u) = J(x)`` for u (projection onto the set for indicators).

    The dual-norm residual of the returned point is at or below ``tol``
    for the single-valued variants.  r must be positive.
    """
    r = float(r)
    if not np.isfinite(r) or r <= 0.0:
        raise InvalidParameterError(f"resolvent parameter must be positive, got {r!r}")
    x = np.asarray(x, dtype=float)
    if x.shape != (geom.dim,) or M.dim != geom.dim:
        raise DimensionMismatchError("vector, operator, and geometry dimensions must agree")

    if isinstance(M, IndicatorSubdifferential):
        return generalized_projection(x, M.set, geom, tol)

    if geom.p == 2.0:
        if isinstance(M, Scaling):
            return x / (1.0 + r * M.a)
        if isinstance(M, PsdLinear):
            return np.linalg.solve(np.eye(geom.dim) + r * M.B, x)

    jx = duality_map(x, geom)

    def residual(u):
        return duality_map(u, geom) + r * M.value(u) - jx

    def analytic(u):
        return duality_jacobian(u, geom) + r * M._value_jacobian(u)

    scale = 1.0 + float(np.linalg.norm(jx))
    u = damped_newton(residual, analytic, x, max(1e-13, 0.01 * tol) * scale)
    if lp_norm(residual(u), geom.dual()) > tol * scale:
        raise NoConvergenceError("resolvent residual above tolerance")
    return u


def check_resolvent_inequality(M: MonotoneOperator, r: float, x, y_zero,
                               geom: SpaceGeometry, slack: float = 1e-8) -> bool:
    """Whether ``phi(y, u) + phi(u, x) <= phi(y, x)`` holds at u = resolvent(x).

    ``y_zero`` should be a zero of M; the inequality is characteristic of
    generalized resolvents and is checked within an additive slack.
    """
    u = generalized_resolvent(M, r, x, geom)
    lhs = lyapunov(y_zero, u, geom) + lyapunov(u, x, geom)
    rhs = lyapunov(y_zero, x, geom)
    return bool(lhs <= rhs + slack)
