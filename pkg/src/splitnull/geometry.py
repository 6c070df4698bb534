"""Finite-dimensional l_p geometry.

Norms, normalized duality mappings, and the Lyapunov functional that the
generalized projections and resolvents minimize.  Exponents p in (1, 2]
give 2-uniformly convex, uniformly smooth spaces, which is where the
solver's convergence guarantees live; any p in (1, inf) is accepted so the
same code can be used for experiments outside that range.

Vectors are plain 1-d float ndarrays.  Whether an array is a primal point
or a dual (gradient-like) element is a documentation convention: functions
below say which they expect, there is no wrapper type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError

# Absolute tolerance used by comparison-style helpers unless overridden.
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class SpaceGeometry:
    """An l_p space of a fixed finite dimension.

    Parameters
    ----------
    dim : int
        Ambient dimension, at least 1.
    p : float
        Norm exponent, strictly between 1 and infinity.  The dual
        exponent q with 1/p + 1/q = 1 is derived.
    """

    dim: int
    p: float = 2.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidParameterError(f"dim must be a positive integer, got {self.dim!r}")
        if not (1.0 < float(self.p) < np.inf):
            raise InvalidParameterError(f"p must lie in (1, inf), got {self.p!r}")

    @property
    def q(self) -> float:
        """Dual exponent, q = p / (p - 1)."""
        return self.p / (self.p - 1.0)

    @property
    def is_hilbert(self) -> bool:
        return self.p == 2.0

    def dual(self) -> "SpaceGeometry":
        """Geometry of the dual space (same dimension, exponent q)."""
        return SpaceGeometry(self.dim, self.q)


def _conform(x, geom: SpaceGeometry) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (geom.dim,):
        raise DimensionMismatchError(
            f"expected a vector of length {geom.dim}, got shape {arr.shape}"
        )
    return arr


def lp_norm(x, geom: SpaceGeometry) -> float:
    """The l_p norm of ``x`` in the given geometry."""
    x = _conform(x, geom)
    if geom.p == 2.0:
        return float(np.linalg.norm(x))
    return float(np.sum(np.abs(x) ** geom.p) ** (1.0 / geom.p))


def duality_map(x, geom: SpaceGeometry) -> np.ndarray:
    """Normalized duality map of l_p applied to a primal vector.

    Componentwise, ``J(x) = ||x||^(2-p) * |x_i|^(p-1) * sign(x_i)``.  The
    result is the unique dual element with ``<x, Jx> = ||x||^2`` and
    ``||Jx||_q = ||x||_p``.  ``J(0) = 0`` (continuity), and for p = 2 the
    map is the identity.

    The returned array lives in the dual space; measure it with the dual
    exponent q.
    """
    x = _conform(x, geom)
    if geom.p == 2.0:
        return x.copy()
    nrm = lp_norm(x, geom)
    if nrm == 0.0:
        return np.zeros(geom.dim)
    signed = np.sign(x) * np.abs(x) ** (geom.p - 1.0)
    return nrm ** (2.0 - geom.p) * signed


def inverse_duality_map(x_star, geom: SpaceGeometry) -> np.ndarray:
    """Inverse of the duality map: send a dual element back to the primal space.

    Equals the duality map of the dual geometry, so the round trips
    ``J^-1(J(x)) = x`` and ``J(J^-1(v)) = v`` hold up to rounding.
    """
    return duality_map(x_star, geom.dual())


def lyapunov(x, y, geom: SpaceGeometry) -> float:
    """Lyapunov functional ``phi(x, y) = ||x||^2 - 2 <x, Jy> + ||y||^2``.

    Nonnegative, zero iff x == y, and equal to ``||x - y||^2`` when p = 2.
    It is the distance-like quantity minimized by the generalized
    projection and decreased by generalized resolvents.
    """
    x = _conform(x, geom)
    y = _conform(y, geom)
    jy = duality_map(y, geom)
    nx = lp_norm(x, geom)
    ny = lp_norm(y, geom)
    return nx * nx - 2.0 * float(x @ jy) + ny * ny


def duality_jacobian(y, geom: SpaceGeometry, floor: float = 1e-12) -> np.ndarray:
    """Jacobian of the duality map at ``y``: diagonal plus a rank-one term.

    Used by the damped Newton solvers.  For p < 2 the diagonal entries blow
    up at zero coordinates, so |y_i| is floored before exponentiation; at
    y = 0 the identity is returned to keep Newton steps finite.
    """
    y = _conform(y, geom)
    p = geom.p
    if p == 2.0:
        return np.eye(geom.dim)
    nrm = lp_norm(y, geom)
    if nrm == 0.0:
        return np.eye(geom.dim)
    ay = np.maximum(np.abs(y), floor)
    psi = np.sign(y) * np.abs(y) ** (p - 1.0)
    diag = (p - 1.0) * nrm ** (2.0 - p) * ay ** (p - 2.0)
    rank1 = (2.0 - p) * nrm ** (2.0 - 2.0 * p) * np.outer(psi, psi)
    return rank1 + np.diag(diag)


def ensure_finite(arr, what: str) -> np.ndarray:
    """Return ``arr`` as a float array, rejecting NaN and infinities."""
    out = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(out)):
        raise InvalidParameterError(f"{what} must contain finite values only")
    return out
