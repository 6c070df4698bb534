"""Nonexpansive maps and the nested averaged compositions built from them.

A family of maps T_1..T_N with weights l_1..l_N defines, for each n, the
map W_n through the backward recursion

    V = x
    for k = n, n-1, ..., 1:   V = l_k * T_k(V) + (1 - l_k) * x

(every level averages against the original input).  W_n is nonexpansive
and its fixed points are exactly the common fixed points of T_1..T_n.
Successive differences W_{n+1}x - W_n x shrink geometrically when the
weights stay at or below a bound b < 1, which is what makes the truncated
limit below meaningful.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .sets import ConvexSet, euclidean_projection
from .geometry import ensure_finite


class NonexpansiveMap:
    """Base class; instances are callables on vectors."""

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError


class Identity(NonexpansiveMap):
    def __call__(self, x):
        return np.array(x, dtype=float)

    def __repr__(self):
        return "Identity()"


class SetProjection(NonexpansiveMap):
    """Metric projection onto a convex set.

    Nonexpansive in the Euclidean norm, so use it with p = 2 geometries;
    the problem validator enforces that.
    """

    def __init__(self, set_: ConvexSet):
        if not isinstance(set_, ConvexSet):
            raise InvalidParameterError("expected a ConvexSet")
        self.set = set_

    def __call__(self, x):
        return euclidean_projection(np.asarray(x, dtype=float), self.set)

    def __repr__(self):
        return f"SetProjection({self.set!r})"


class AffineContraction(NonexpansiveMap):
    """``x -> Q x + b`` with spectral norm of Q at most one."""

    def __init__(self, Q, b):
        Q = ensure_finite(Q, "affine matrix")
        b = ensure_finite(b, "affine offset")
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or b.shape != (Q.shape[0],):
            raise DimensionMismatchError("Q must be square and b must match it")
        if float(np.linalg.norm(Q, 2)) > 1.0 + 1e-10:
            raise InvalidParameterError("operator norm of Q must not exceed 1")
        self.Q = Q
        self.b = b

    def __call__(self, x):
        return self.Q @ np.asarray(x, dtype=float) + self.b

    def __repr__(self):
        return f"AffineContraction(dim={self.b.size})"


class WLimit(NamedTuple):
    value: np.ndarray
    n_used: int
    truncated: bool


class WFamily:
    """A finite family (T_k, l_k) with weights in (0, b], b < 1."""

    def __init__(self, maps, lambdas=0.5, bound: float | None = None):
        maps = tuple(maps)
        if not maps:
            raise InvalidParameterError("need at least one map")
        if np.isscalar(lambdas):
            lambdas = (float(lambdas),) * len(maps)
        else:
            lambdas = tuple(float(v) for v in lambdas)
        if len(lambdas) != len(maps):
            raise InvalidParameterError("one weight per map is required")
        if bound is None:
            bound = max(lambdas)
        bound = float(bound)
        if not (0.0 < bound < 1.0):
            raise InvalidParameterError(f"weight bound must lie in (0, 1), got {bound!r}")
        for v in lambdas:
            if not (0.0 < v <= bound):
                raise InvalidParameterError(f"weights must lie in (0, {bound}], got {v!r}")
        self.maps = maps
        self.lambdas = lambdas
        self.bound = bound

    @property
    def depth(self) -> int:
        return len(self.maps)

    def apply(self, n: int, x) -> np.ndarray:
        """Evaluate W_n at x; n must lie in 1..depth."""
        if int(n) != n or not (1 <= n <= self.depth):
            raise InvalidParameterError(f"n must lie in 1..{self.depth}, got {n!r}")
        x = np.asarray(x, dtype=float)
        v = x
        for k in range(int(n), 0, -1):
            lam = self.lambdas[k - 1]
            v = lam * self.maps[k - 1](v) + (1.0 - lam) * x
        return v

    def apply_limit(self, x, eps: float = 1e-12) -> WLimit:
        """W_n x for the first n whose successor gap stays within eps.

        Scans n = 1, 2, ... and returns the value at the smallest n with
        ``||W_{n+1}x - W_n x||_2 <= eps``.  When no such n exists within
        the family depth, the full-depth value is returned with the
        truncation flag set.
        """
        x = np.asarray(x, dtype=float)
        prev = self.apply(1, x)
        for n in range(2, self.depth + 1):
            cur = self.apply(n, x)
            if float(np.linalg.norm(cur - prev)) <= eps:
                return WLimit(prev, n - 1, False)
            prev = cur
        return WLimit(prev, self.depth, True)


def identity_family(depth: int = 50, lam: float = 0.5) -> WFamily:
    """A family of identity maps, the neutral default."""
    return WFamily([Identity()] * int(depth), lam)
