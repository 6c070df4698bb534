"""Closed convex sets and their metric / generalized projections.

Two projection notions appear.  ``euclidean_projection`` is the ordinary
nearest-point map in the l2 norm, exact for every shipped variant.
``generalized_projection`` minimizes the Lyapunov functional phi(., x) of a
given geometry; for p = 2 the two coincide, for other exponents the
minimizer is found by enumerating active sets of halfspace constraints and
solving each equality-constrained subproblem with damped Newton on its KKT
system.

One-dimensional sets reduce to intervals, where every projection is a
clamp regardless of the exponent (the duality map is the identity there).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._newton import damped_newton
from .errors import (
    DimensionMismatchError,
    EmptySetError,
    InvalidParameterError,
    NoConvergenceError,
)
from .geometry import (
    DEFAULT_TOL,
    SpaceGeometry,
    duality_jacobian,
    duality_map,
    ensure_finite,
    lyapunov,
)

# Screening constants for the enumeration machinery.
_FEAS_SLACK = 1e-10   # inequality slack, scaled by 1 + |offset|
_EQ_TOL = 1e-8        # consistency residual for equality subproblems
_DUAL_TOL = 1e-9      # multiplier sign tolerance for KKT certification
_MAX_CUTS = 12        # cap on 2^m active-set enumeration


@dataclass(frozen=True)
class Halfspace:
    """The set ``{z : <a, z> <= b}``.

    A zero normal with b >= 0 denotes the full space (such cuts arise as
    degenerate byproducts of the solver and are dropped by the projection
    routines).  A zero normal with b < 0 is empty and rejected here.
    """

    a: np.ndarray
    b: float

    def __post_init__(self):
        a = ensure_finite(self.a, "halfspace normal")
        if a.ndim != 1:
            raise DimensionMismatchError("halfspace normal must be a vector")
        b = float(self.b)
        if not np.isfinite(b):
            raise InvalidParameterError("halfspace offset must be finite")
        if not np.any(a) and b < 0.0:
            raise EmptySetError("halfspace with zero normal and negative offset is empty")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.a.size

    @property
    def is_full(self) -> bool:
        return not np.any(self.a)

    def contains(self, x, tol: float = 0.0) -> bool:
        if self.is_full:
            return True
        x = np.asarray(x, dtype=float)
        return float(self.a @ x) <= self.b + tol


class ConvexSet:
    """Base class for the closed convex set variants below."""

    dim: int

    def contains(self, x, tol: float = 0.0) -> bool:
        raise NotImplementedError

    def interval(self) -> tuple[float, float]:
        """(lo, hi) description, only for one-dimensional sets."""
        raise NotImplementedError


class FullSpace(ConvexSet):
    """The whole ambient space."""

    def __init__(self, dim: int):
        if int(dim) != dim or dim < 1:
            raise InvalidParameterError(f"dim must be a positive integer, got {dim!r}")
        self.dim = int(dim)

    def contains(self, x, tol: float = 0.0) -> bool:
        return np.asarray(x).shape == (self.dim,)

    def interval(self):
        if self.dim != 1:
            raise DimensionMismatchError("interval form needs dim 1")
        return (-np.inf, np.inf)

    def __repr__(self):
        return f"FullSpace(dim={self.dim})"


class Box(ConvexSet):
    """Axis-aligned box ``{z : lo <= z <= hi}`` with finite bounds."""

    def __init__(self, lo, hi):
        lo = ensure_finite(lo, "box lower bound")
        hi = ensure_finite(hi, "box upper bound")
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DimensionMismatchError("box bounds must be vectors of equal length")
        if np.any(lo > hi):
            raise EmptySetError("box has lo > hi in some coordinate")
        self.lo = lo
        self.hi = hi
        self.dim = lo.size

    def contains(self, x, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))

    def interval(self):
        if self.dim != 1:
            raise DimensionMismatchError("interval form needs dim 1")
        return (float(self.lo[0]), float(self.hi[0]))

    def __repr__(self):
        return f"Box(lo={self.lo!r}, hi={self.hi!r})"


class Ball(ConvexSet):
    """Euclidean ball ``{z : ||z - center||_2 <= radius}``."""

    def __init__(self, center, radius: float):
        self.center = ensure_finite(center, "ball center")
        if self.center.ndim != 1:
            raise DimensionMismatchError("ball center must be a vector")
        radius = float(radius)
        if not np.isfinite(radius) or radius < 0.0:
            raise InvalidParameterError("ball radius must be finite and nonnegative")
        self.radius = radius
        self.dim = self.center.size

    def contains(self, x, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol

    def interval(self):
        if self.dim != 1:
            raise DimensionMismatchError("interval form needs dim 1")
        c = float(self.center[0])
        return (c - self.radius, c + self.radius)

    def __repr__(self):
        return f"Ball(center={self.center!r}, radius={self.radius})"


def _clean_cuts(cuts) -> tuple[Halfspace, ...]:
    kept = []
    for c in cuts:
        if not isinstance(c, Halfspace):
            raise InvalidParameterError("cuts must be Halfspace instances")
        if not c.is_full:
            kept.append(c)
    return tuple(kept)


class HalfspaceIntersection(ConvexSet):
    """Finite intersection of halfspaces; degenerate full-space cuts are dropped."""

    def __init__(self, cuts):
        cuts = tuple(cuts)
        if not cuts:
            raise InvalidParameterError("need at least one halfspace; use FullSpace otherwise")
        dim = cuts[0].dim
        if any(c.dim != dim for c in cuts):
            raise DimensionMismatchError("halfspaces must share one ambient dimension")
        self.cuts = _clean_cuts(cuts)
        self.dim = dim

    def contains(self, x, tol: float = 0.0) -> bool:
        return all(c.contains(x, tol) for c in self.cuts)

    def interval(self):
        if self.dim != 1:
            raise DimensionMismatchError("interval form needs dim 1")
        return _fold_interval((-np.inf, np.inf), self.cuts)

    def __repr__(self):
        return f"HalfspaceIntersection({len(self.cuts)} cuts, dim={self.dim})"


class IntersectionWith(ConvexSet):
    """A base set intersected with finitely many halfspace cuts."""

    def __init__(self, base: ConvexSet, cuts):
        if not isinstance(base, ConvexSet):
            raise InvalidParameterError("base must be a ConvexSet")
        cuts = tuple(cuts)
        if any(c.dim != base.dim for c in cuts):
            raise DimensionMismatchError("cuts must match the base dimension")
        self.base = base
        self.cuts = _clean_cuts(cuts)
        self.dim = base.dim

    def contains(self, x, tol: float = 0.0) -> bool:
        return self.base.contains(x, tol) and all(c.contains(x, tol) for c in self.cuts)

    def interval(self):
        if self.dim != 1:
            raise DimensionMismatchError("interval form needs dim 1")
        return _fold_interval(self.base.interval(), self.cuts)

    def __repr__(self):
        return f"IntersectionWith(base={self.base!r}, {len(self.cuts)} cuts)"


def box_cuts(box: Box) -> list[Halfspace]:
    """The 2*dim halfspaces whose intersection is the box."""
    cuts = []
    for j in range(box.dim):
        e = np.zeros(box.dim)
        e[j] = 1.0
        cuts.append(Halfspace(e, float(box.hi[j])))
        cuts.append(Halfspace(-e, -float(box.lo[j])))
    return cuts


# ---------------------------------------------------------------------------
# interval logic (dim 1)

def _fold_interval(start, cuts):
    lo, hi = start
    for c in cuts:
        if c.is_full:
            continue
        a = float(c.a[0])
        bound = c.b / a
        if a > 0:
            hi = min(hi, bound)
        else:
            lo = max(lo, bound)
    return (lo, hi)


def _interval_of(S: ConvexSet):
    return S.interval()


def _clamp_interval(x: float, lo: float, hi: float, tol: float) -> float:
    if lo > hi + tol:
        raise EmptySetError(f"interval [{lo}, {hi}] is empty")
    hi = max(hi, lo)
    return min(max(x, lo), hi)


# ---------------------------------------------------------------------------
# Euclidean (l2) machinery

def euclidean_projection(x, S: ConvexSet) -> np.ndarray:
    """Metric projection of ``x`` onto ``S`` in the Euclidean norm."""
    x = np.asarray(x, dtype=float)
    if x.shape != (S.dim,):
        raise DimensionMismatchError(f"expected a vector of length {S.dim}")
    if isinstance(S, FullSpace):
        return x.copy()
    if isinstance(S, Box):
        return np.clip(x, S.lo, S.hi)
    if isinstance(S, Ball):
        d = x - S.center
        nd = float(np.linalg.norm(d))
        if nd <= S.radius:
            return x.copy()
        return S.center + d * (S.radius / nd)
    if isinstance(S, HalfspaceIntersection):
        return _project_cuts(x, S.cuts, FullSpace(S.dim), SpaceGeometry(S.dim, 2.0), DEFAULT_TOL)
    if isinstance(S, IntersectionWith):
        return _project_cuts(x, S.cuts, S.base, SpaceGeometry(S.dim, 2.0), DEFAULT_TOL)
    raise NotImplementedError(f"no projection rule for {type(S).__name__}")


def _cut_ok(z, cut: Halfspace, slack: float) -> bool:
    return float(cut.a @ z) <= cut.b + slack * (1.0 + abs(cut.b))


def _all_cuts_ok(z, cuts, slack: float) -> bool:
    return all(_cut_ok(z, c, slack) for c in cuts)


def _ordered_subsets(m: int):
    for r in range(m + 1):
        yield from itertools.combinations(range(m), r)


def _ordered_face_patterns(box):
    """(coords, values, signs) triples ordered by how many faces are pinned."""
    if box is None:
        yield ((), (), ())
        return
    d = box.dim
    for k in range(d + 1):
        for coords in itertools.combinations(range(d), k):
            for choice in itertools.product((0, 1), repeat=k):
                vals = tuple(
                    float(box.lo[c]) if side == 0 else float(box.hi[c])
                    for c, side in zip(coords, choice)
                )
                signs = tuple(-1.0 if side == 0 else 1.0 for side in choice)
                yield (coords, vals, signs)


def _solve_equalities(x, normals, offsets, subset, fixed_idx, fixed_val, eq_tol):
    """Minimize ||z - x||_2 with the subset cuts active and coords pinned."""
    d = x.size
    z = np.empty(d)
    fixed_mask = np.zeros(d, dtype=bool)
    for c, v in zip(fixed_idx, fixed_val):
        z[c] = v
        fixed_mask[c] = True
    free = ~fixed_mask
    nfree = int(free.sum())
    sub = list(subset)
    if nfree == 0:
        if sub:
            resid = normals[sub] @ z - offsets[sub]
            if np.max(np.abs(resid)) > eq_tol:
                return None
        return z
    xf = x[free]
    if not sub:
        z[free] = xf
        return z
    N = normals[np.ix_(sub, np.flatnonzero(free))]
    rhs = offsets[sub] - normals[np.ix_(sub, np.flatnonzero(fixed_mask))] @ np.asarray(fixed_val)
    w = np.linalg.lstsq(N, rhs - N @ xf, rcond=None)[0]
    zf = xf + w
    if np.max(np.abs(N @ zf - rhs)) > eq_tol:
        return None
    z[free] = zf
    return z


def _certify_kkt(x, z, normals, subset, fixed_idx, fixed_signs, scale):
    """True when x - z is a nonnegative combination of the active normals."""
    rows = [normals[i] for i in subset]
    for c, s in zip(fixed_idx, fixed_signs):
        e = np.zeros(x.size)
        e[c] = s
        rows.append(e)
    gap = x - z
    if not rows:
        return float(gap @ gap) <= (1e-9 * scale) ** 2
    N = np.array(rows)
    mult, *_ = np.linalg.lstsq(N.T, gap, rcond=None)
    if np.max(np.abs(N.T @ mult - gap)) > 1e-8 * scale:
        return False
    return bool(np.all(mult >= -_DUAL_TOL * scale))


def _lp_feasible(cuts, box, dim: int) -> bool:
    """Linear-programming feasibility certificate for the cut system."""
    from scipy.optimize import linprog

    if cuts:
        a_ub = np.array([c.a for c in cuts])
        b_ub = np.array([c.b for c in cuts])
    else:
        a_ub = None
        b_ub = None
    if box is not None:
        bounds = [(float(box.lo[j]), float(box.hi[j])) for j in range(dim)]
    else:
        bounds = [(None, None)] * dim
    res = linprog(np.zeros(dim), A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status == 2:
        return False
    if res.status == 0:
        return True
    raise NoConvergenceError(f"feasibility probe inconclusive: {res.message}")


def _euclidean_cut_projection(x, cuts, base, tol):
    """Exact l2 projection onto base /\\ cuts by active-set enumeration.

    Candidates are screened for primal feasibility; a candidate whose
    active normals admit nonnegative multipliers is the optimum and is
    returned at once.  Otherwise the feasible candidate of least distance
    wins, ties broken by smaller active-set cardinality and then by
    lexicographic coordinate order.
    """
    if isinstance(base, Ball):
        if not cuts:
            return euclidean_projection(x, base)
        raise NotImplementedError("cut projection over a ball base is not provided")
    box = base if isinstance(base, Box) else None
    z0 = euclidean_projection(x, base)
    if _all_cuts_ok(z0, cuts, _FEAS_SLACK):
        return z0
    normals = np.array([c.a for c in cuts])
    offsets = np.array([c.b for c in cuts])
    scale = 1.0 + float(np.max(np.abs(x)))
    eq_tol = _EQ_TOL * scale
    best = None
    for subset in _ordered_subsets(len(cuts)):
        for fixed_idx, fixed_val, fixed_signs in _ordered_face_patterns(box):
            z = _solve_equalities(x, normals, offsets, subset, fixed_idx, fixed_val, eq_tol)
            if z is None:
                continue
            if not _all_cuts_ok(z, cuts, _FEAS_SLACK):
                continue
            if box is not None and not box.contains(z, _FEAS_SLACK * scale):
                continue
            if _certify_kkt(x, z, normals, subset, fixed_idx, fixed_signs, scale):
                return z
            gap = z - x
            entry = (float(gap @ gap), len(subset) + len(fixed_idx), tuple(z))
            if best is None or entry < best:
                best = entry
    if best is not None:
        return np.array(best[2])
    if _lp_feasible(cuts, box, x.size):
        raise NoConvergenceError("no feasible candidate found although the system is feasible")
    raise EmptySetError("halfspace system has empty intersection")


# ---------------------------------------------------------------------------
# Lyapunov-minimizing machinery for p != 2

def _lyapunov_cut_projection(x, cuts, base, geom, tol):
    """Minimize phi(., x) over base /\\ cuts via Newton on active-set KKT systems."""
    if isinstance(base, FullSpace):
        base_cuts = []
    elif isinstance(base, Box):
        base_cuts = box_cuts(base)
    else:
        raise NotImplementedError(
            f"generalized projection over a {type(base).__name__} base needs p = 2"
        )
    all_cuts = base_cuts + list(cuts)
    if len(all_cuts) > _MAX_CUTS:
        raise NotImplementedError("too many halfspaces for exact active-set enumeration")
    if _all_cuts_ok(x, all_cuts, _FEAS_SLACK):
        return x.copy()
    d = geom.dim
    jx = duality_map(x, geom)
    normals = np.array([c.a for c in all_cuts])
    offsets = np.array([c.b for c in all_cuts])
    scale = 1.0 + float(np.linalg.norm(jx))
    newton_tol = max(1e-12, 0.01 * tol) * scale
    best = None
    for subset in _ordered_subsets(len(all_cuts)):
        if not subset:
            continue
        sub = list(subset)
        N = normals[sub]
        c = offsets[sub]
        k = len(sub)

        def residual(v, N=N, c=c):
            y, nu = v[:d], v[d:]
            return np.concatenate([duality_map(y, geom) - jx + N.T @ nu, N @ y - c])

        def analytic(v, N=N, k=k):
            y = v[:d]
            top = np.hstack([duality_jacobian(y, geom), N.T])
            bot = np.hstack([N, np.zeros((k, k))])
            return np.vstack([top, bot])

        w0 = np.linalg.lstsq(N, c - N @ x, rcond=None)[0]
        v0 = np.concatenate([x + w0, np.zeros(k)])
        try:
            v = damped_newton(residual, analytic, v0, newton_tol)
        except NoConvergenceError:
            continue
        y, nu = v[:d], v[d:]
        if not _all_cuts_ok(y, all_cuts, _FEAS_SLACK):
            continue
        if np.all(nu >= -_DUAL_TOL * scale):
            return y
        entry = (lyapunov(y, x, geom), len(sub), tuple(y))
        if best is None or entry < best:
            best = entry
    if best is not None:
        return np.array(best[2])
    if _lp_feasible(all_cuts, None, d):
        raise NoConvergenceError("no feasible candidate found although the system is feasible")
    raise EmptySetError("halfspace system has empty intersection")


def _project_cuts(x, cuts, base, geom, tol):
    cuts = [c for c in cuts if not c.is_full]
    if geom.dim == 1:
        lo, hi = _fold_interval(_interval_of(base), cuts)
        return np.array([_clamp_interval(float(x[0]), lo, hi, tol)])
    if geom.p == 2.0:
        return _euclidean_cut_projection(x, cuts, base, tol)
    return _lyapunov_cut_projection(x, cuts, base, geom, tol)


# ---------------------------------------------------------------------------
# public projection API

def generalized_projection(x, S: ConvexSet, geom: SpaceGeometry, tol: float = DEFAULT_TOL):
    """The phi-minimizing point of ``S`` for the anchor ``x``.

    Returns argmin over y in S of ``lyapunov(y, x, geom)``.  For p = 2 this
    is the metric projection.  The result satisfies the variational
    characterization ``<y - z, Jx - Jz> <= 0`` for all y in S.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (geom.dim,) or S.dim != geom.dim:
        raise DimensionMismatchError("vector, set, and geometry dimensions must agree")
    if geom.dim == 1:
        lo, hi = _interval_of(S)
        return np.array([_clamp_interval(float(x[0]), lo, hi, tol)])
    if geom.p == 2.0:
        return euclidean_projection(x, S)
    if isinstance(S, FullSpace):
        return x.copy()
    if isinstance(S, Box):
        return _lyapunov_cut_projection(x, [], S, geom, tol)
    if isinstance(S, HalfspaceIntersection):
        return _lyapunov_cut_projection(x, list(S.cuts), FullSpace(S.dim), geom, tol)
    if isinstance(S, IntersectionWith):
        return _lyapunov_cut_projection(x, list(S.cuts), S.base, geom, tol)
    raise NotImplementedError(
        f"generalized projection onto {type(S).__name__} is only available for p = 2"
    )


def project_halfspace_intersection(x, cuts, base: ConvexSet, geom: SpaceGeometry,
                                   tol: float = DEFAULT_TOL):
    """Project ``x`` onto ``base`` intersected with the given halfspace cuts.

    Degenerate full-space cuts are dropped.  Raises EmptySetError when the
    intersection is provably empty and NoConvergenceError when no candidate
    could be certified or collected.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (geom.dim,) or base.dim != geom.dim:
        raise DimensionMismatchError("vector, base, and geometry dimensions must agree")
    for c in cuts:
        if c.dim != geom.dim:
            raise DimensionMismatchError("cut dimension differs from the geometry")
    return _project_cuts(x, list(cuts), base, geom, tol)


def sample_points(S: ConvexSet, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` members of ``S``, used by validators and property checks."""
    d = S.dim
    if isinstance(S, FullSpace):
        return rng.standard_normal((count, d))
    if isinstance(S, Box):
        u = rng.uniform(size=(count, d))
        return S.lo + u * (S.hi - S.lo)
    if isinstance(S, Ball):
        dirs = rng.standard_normal((count, d))
        norms = np.linalg.norm(dirs, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        radii = S.radius * rng.uniform(size=(count, 1)) ** (1.0 / d)
        return S.center + dirs / norms * radii
    pts = rng.standard_normal((count, d))
    return np.array([euclidean_projection(p, S) for p in pts])
