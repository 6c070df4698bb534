"""The hybrid projection iteration for split common null point problems.

Given spaces E and F, a coupling matrix A : E -> F, maximal monotone
operators on each space, a constraint set C in E, a nonexpansive map and a
weighted family of nonexpansive maps on C, each step computes

    u_n = J^-1((1 - a_n) J x_n + a_n J P_C J^-1(s_n J W_n x_n + (1 - s_n) J S x_n))
    z_n = resolvent of the source operator at u_n + e_n       (parameter l_n)
    w_n = resolvent of the target operator at A z_n           (parameter m_n)
    y_n = P_C J^-1(J z_n - gamma A^T J_F(A z_n - w_n))

then builds three halfspace cuts that provably contain every solution and
projects the start point onto their intersection with C to obtain x_{n+1}.
P denotes the generalized projection and J the duality maps of the two
spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import DivergedError, InvalidParameterError
from .geometry import (
    SpaceGeometry,
    duality_map,
    ensure_finite,
    inverse_duality_map,
    lp_norm,
    lyapunov,
)
from .operators import IndicatorSubdifferential, MonotoneOperator, PsdLinear, generalized_resolvent
from .sets import (
    Box,
    ConvexSet,
    Halfspace,
    generalized_projection,
    project_halfspace_intersection,
    sample_points,
)
from .wmaps import Identity, NonexpansiveMap, SetProjection, WFamily, identity_family

_CUT_OFFSET_SLOP = 1e-9   # tolerated negative offset on a degenerate cut


# ---------------------------------------------------------------------------
# parameter schedules

@dataclass(frozen=True)
class Schedule:
    """A scalar sequence given by a closed-form rule or an explicit list.

    Kinds: ``constant`` (value), ``inverse`` (scale / (n + offset)),
    ``one_minus_inverse`` (1 - scale / (n + offset)), ``explicit`` (listed
    values, clamped to the last entry past the end).
    """

    kind: str
    value: float = 0.0
    scale: float = 1.0
    offset: float = 0.0
    values: tuple = ()

    @classmethod
    def constant(cls, value: float) -> "Schedule":
        return cls("constant", value=float(value))

    @classmethod
    def inverse(cls, scale: float = 1.0, offset: float = 0.0) -> "Schedule":
        return cls("inverse", scale=float(scale), offset=float(offset))

    @classmethod
    def one_minus_inverse(cls, scale: float = 1.0, offset: float = 0.0) -> "Schedule":
        return cls("one_minus_inverse", scale=float(scale), offset=float(offset))

    @classmethod
    def explicit(cls, values) -> "Schedule":
        vals = tuple(float(v) for v in values)
        if not vals:
            raise InvalidParameterError("explicit schedule needs at least one value")
        return cls("explicit", values=vals)

    def at(self, n: int) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "inverse":
            return self.scale / (n + self.offset)
        if self.kind == "one_minus_inverse":
            return 1.0 - self.scale / (n + self.offset)
        if self.kind == "explicit":
            return self.values[min(n, len(self.values)) - 1]
        raise InvalidParameterError(f"unknown schedule kind {self.kind!r}")


@dataclass(frozen=True)
class ErrorSchedule:
    """Vector error sequence: ``zero``, ``decay`` (direction * scale / (n + offset)),
    or ``explicit`` vectors clamped to the last entry."""

    kind: str
    direction: tuple = ()
    scale: float = 1.0
    offset: float = 0.0
    vectors: tuple = ()

    @classmethod
    def zero(cls) -> "ErrorSchedule":
        return cls("zero")

    @classmethod
    def decay(cls, direction, scale: float = 1.0, offset: float = 0.0) -> "ErrorSchedule":
        d = tuple(float(v) for v in ensure_finite(direction, "error direction"))
        return cls("decay", direction=d, scale=float(scale), offset=float(offset))

    @classmethod
    def explicit(cls, vectors) -> "ErrorSchedule":
        vecs = tuple(tuple(float(v) for v in ensure_finite(w, "error vector")) for w in vectors)
        if not vecs:
            raise InvalidParameterError("explicit error schedule needs at least one vector")
        return cls("explicit", vectors=vecs)

    def at(self, n: int, dim: int) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros(dim)
        if self.kind == "decay":
            return np.asarray(self.direction) * (self.scale / (n + self.offset))
        if self.kind == "explicit":
            return np.asarray(self.vectors[min(n, len(self.vectors)) - 1])
        raise InvalidParameterError(f"unknown error schedule kind {self.kind!r}")


@dataclass(frozen=True)
class ParameterSchedules:
    """Per-iteration parameters with the common defaults.

    alpha and sigma must stay in (0, 1); the resolvent parameters must stay
    at or above the floor.  Values are validated lazily as they are drawn.
    """

    alpha: Schedule = field(default_factory=lambda: Schedule.inverse(1.0, 1.0))
    sigma: Schedule = field(default_factory=lambda: Schedule.one_minus_inverse(1.0, 1.0))
    lam: Schedule = field(default_factory=lambda: Schedule.constant(0.25))
    mu: Schedule = field(default_factory=lambda: Schedule.constant(0.25))
    error: ErrorSchedule = field(default_factory=ErrorSchedule.zero)
    floor: float = 0.01

    def __post_init__(self):
        if not (self.floor > 0.0):
            raise InvalidParameterError("resolvent floor must be positive")

    def _unit_open(self, name: str, v: float) -> float:
        if not (0.0 < v < 1.0):
            raise InvalidParameterError(f"{name} must lie in (0, 1), got {v!r}")
        return v

    def alpha_at(self, n: int) -> float:
        return self._unit_open("alpha", self.alpha.at(n))

    def sigma_at(self, n: int) -> float:
        return self._unit_open("sigma", self.sigma.at(n))

    def lam_at(self, n: int) -> float:
        v = self.lam.at(n)
        if v < self.floor:
            raise InvalidParameterError(f"lambda fell below the floor {self.floor}")
        return v

    def mu_at(self, n: int) -> float:
        v = self.mu.at(n)
        if v < self.floor:
            raise InvalidParameterError(f"mu fell below the floor {self.floor}")
        return v

    def error_at(self, n: int, dim: int) -> np.ndarray:
        return self.error.at(n, dim)


@dataclass(frozen=True)
class StoppingRule:
    """Stop when the step norm reaches ``tol`` (disabled when tol <= 0) or
    after ``max_iters`` steps; abort when iterates exceed the guard norm."""

    tol: float = 1e-8
    max_iters: int = 100000
    guard: float = 1e8


# ---------------------------------------------------------------------------
# problem instances

@dataclass
class ProblemInstance:
    """All data of one split common null point problem.

    ``A`` maps ``space`` into ``target_space``; ``source_op`` acts on the
    first space, ``target_op`` on the second.  ``constraint`` is the closed
    convex set carrying the iteration, ``inner_map`` the nonexpansive map
    blended with the family inside the averaged step, ``start`` the anchor
    point that every iterate projects from.  ``smoothness_const`` is the
    constant c in the admissibility bound gamma < 2 / (c ||A||^2).
    """

    space: SpaceGeometry
    target_space: SpaceGeometry
    A: np.ndarray
    source_op: MonotoneOperator
    target_op: MonotoneOperator
    constraint: ConvexSet
    inner_map: NonexpansiveMap
    family: WFamily
    schedules: ParameterSchedules
    gamma: float
    start: np.ndarray
    smoothness_const: float = 1.0

    def __post_init__(self):
        self.A = ensure_finite(self.A, "coupling matrix")
        self.start = ensure_finite(self.start, "start point")


def operator_norm_bound(A: np.ndarray, space: SpaceGeometry, target_space: SpaceGeometry) -> float:
    """Upper bound on ||A|| between the two geometries.

    Exact spectral norm when both exponents are 2; otherwise the larger of
    the induced 1- and inf-norms, a conservative interpolation bound.
    """
    if space.p == 2.0 and target_space.p == 2.0:
        return float(np.linalg.norm(A, 2))
    return float(max(np.linalg.norm(A, 1), np.linalg.norm(A, np.inf)))


def validate_instance(P: ProblemInstance, samples: int = 16, seed: int = 0) -> None:
    """Raise InvalidParameterError when the instance is structurally unsound.

    Shape and finiteness checks are exact; the map conditions are sampled:
    every family map must send the constraint set into itself, and every
    map (inner map included) must be nonexpansive in the space norm.
    """
    gE, gF = P.space, P.target_space
    if P.A.shape != (gF.dim, gE.dim):
        raise InvalidParameterError(
            f"coupling matrix must be {gF.dim} x {gE.dim}, got {P.A.shape}"
        )
    if not np.any(P.A):
        raise InvalidParameterError("coupling matrix must be nonzero")
    if P.source_op.dim != gE.dim or P.target_op.dim != gF.dim:
        raise InvalidParameterError("operator dimensions do not match the spaces")
    if P.constraint.dim != gE.dim:
        raise InvalidParameterError("constraint set dimension does not match the space")
    if not (P.smoothness_const > 0.0):
        raise InvalidParameterError("smoothness constant must be positive")
    bound = 2.0 / (P.smoothness_const * operator_norm_bound(P.A, gE, gF) ** 2)
    if not (0.0 < P.gamma < bound):
        raise InvalidParameterError(
            f"gamma must lie in (0, {bound}) for this instance, got {P.gamma}"
        )
    if P.start.shape != (gE.dim,):
        raise InvalidParameterError("start point dimension does not match the space")
    if not P.constraint.contains(P.start, 1e-9):
        raise InvalidParameterError("start point must belong to the constraint set")
    if P.schedules.error.kind == "decay" and len(P.schedules.error.direction) != gE.dim:
        raise InvalidParameterError("error direction dimension does not match the space")
    if P.schedules.error.kind == "explicit":
        for w in P.schedules.error.vectors:
            if len(w) != gE.dim:
                raise InvalidParameterError("error vectors must match the space dimension")

    maps = set(P.family.maps) | {P.inner_map}
    if gE.p != 2.0 and any(isinstance(t, SetProjection) for t in maps):
        raise InvalidParameterError("SetProjection maps require a p = 2 geometry")
    rng = np.random.default_rng(seed)
    pts = sample_points(P.constraint, samples, rng)
    pairs = rng.integers(0, samples, size=(samples, 2))
    for t in maps:
        # family maps must send the constraint set into itself; the inner
        # map may leave it (its output is mixed in the dual and projected
        # back), so only nonexpansiveness is required of it
        if t in P.family.maps and not isinstance(t, Identity):
            for x in pts:
                if not P.constraint.contains(t(x), 1e-8):
                    raise InvalidParameterError(
                        f"{t!r} does not map the constraint set into itself"
                    )
        for i, j in pairs:
            dx = lp_norm(pts[i] - pts[j], gE)
            dt = lp_norm(t(pts[i]) - t(pts[j]), gE)
            if dt > dx * (1.0 + 1e-10) + 1e-12:
                raise InvalidParameterError(f"{t!r} is not nonexpansive on samples")


# ---------------------------------------------------------------------------
# cuts

def split_residual_cut(z, w, A: np.ndarray, target_space: SpaceGeometry) -> Halfspace:
    """Halfspace retaining all points whose image lies at or past w.

    Encodes ``<w - A v, J_F(A z - w)> >= 0`` as ``<a, v> <= b`` with
    ``a = A^T J_F(Az - w)`` and ``b = <w, J_F(Az - w)>``.  Degenerates to
    the full space when A z equals w.
    """
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    v = duality_map(A @ z - w, target_space)
    a = A.T @ v
    b = float(w @ v)
    if not np.any(a) and -_CUT_OFFSET_SLOP < b < 0.0:
        b = 0.0
    return Halfspace(a, b)


def fejer_cut(z, u_plus_e, space: SpaceGeometry) -> Halfspace:
    """Halfspace of points at least as close (in phi) to z as to u + e.

    ``phi(v, z) <= phi(v, u+e)`` linearizes to ``<a, v> <= b`` with
    ``a = 2 (J(u+e) - J(z))`` and ``b = ||u+e||^2 - ||z||^2``.
    """
    z = np.asarray(z, dtype=float)
    u_plus_e = np.asarray(u_plus_e, dtype=float)
    a = 2.0 * (duality_map(u_plus_e, space) - duality_map(z, space))
    nu = lp_norm(u_plus_e, space)
    nz = lp_norm(z, space)
    b = nu * nu - nz * nz
    if not np.any(a) and -_CUT_OFFSET_SLOP < b < 0.0:
        b = 0.0
    return Halfspace(a, b)


def history_cut(x_n, start, space: SpaceGeometry) -> Halfspace:
    """Halfspace ``<x_n - v, J(start) - J(x_n)> >= 0`` keeping the projection anchor.

    Full space when x_n equals the start point (in particular at n = 1).
    """
    x_n = np.asarray(x_n, dtype=float)
    start = np.asarray(start, dtype=float)
    a = duality_map(start, space) - duality_map(x_n, space)
    b = float(a @ x_n)
    if not np.any(a) and -_CUT_OFFSET_SLOP < b < 0.0:
        b = 0.0
    return Halfspace(a, b)


# ---------------------------------------------------------------------------
# iteration state

@dataclass(frozen=True)
class IterateState:
    """Everything computed during one iteration.

    ``x`` is the current iterate x_n; ``x_next`` the projection result
    x_{n+1}.  ``cuts`` holds the three halfspaces of the step in the order
    (split residual, resolvent step, history).  Diagnostics mirror the
    trace columns.
    """

    n: int
    x: np.ndarray
    u: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None
    w: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    cuts: Optional[tuple] = None
    x_next: Optional[np.ndarray] = None
    step_norm: float = np.nan
    split_residual: float = np.nan
    fix_residual: float = np.nan
    phi_start: float = np.nan
    cond_ratio: float = np.nan

    @classmethod
    def initial(cls, P: ProblemInstance) -> "IterateState":
        return cls(n=1, x=np.asarray(P.start, dtype=float).copy())

    def successor(self) -> "IterateState":
        if self.x_next is None:
            raise InvalidParameterError("state has not been completed by step()")
        return IterateState(n=self.n + 1, x=self.x_next)


def step(P: ProblemInstance, st: IterateState) -> IterateState:
    """Complete iteration ``st.n`` starting from ``st.x``.

    Returns a fully populated state for the same index; chain with
    ``state.successor()`` to move on.
    """
    gE, gF = P.space, P.target_space
    n, x = st.n, np.asarray(st.x, dtype=float)
    sched = P.schedules

    alpha = sched.alpha_at(n)
    sigma = sched.sigma_at(n)
    lam = sched.lam_at(n)
    mu = sched.mu_at(n)
    err = sched.error_at(n, gE.dim)

    wx = P.family.apply(min(n, P.family.depth), x)
    sx = P.inner_map(x)
    mixed = inverse_duality_map(
        sigma * duality_map(wx, gE) + (1.0 - sigma) * duality_map(sx, gE), gE
    )
    inner = generalized_projection(mixed, P.constraint, gE)
    jx = duality_map(x, gE)
    u = inverse_duality_map((1.0 - alpha) * jx + alpha * duality_map(inner, gE), gE)

    upe = u + err
    z = generalized_resolvent(P.source_op, lam, upe, gE)
    az = P.A @ z
    w = generalized_resolvent(P.target_op, mu, az, gF)
    jf_gap = duality_map(az - w, gF)
    y = generalized_projection(
        inverse_duality_map(duality_map(z, gE) - P.gamma * (P.A.T @ jf_gap), gE),
        P.constraint,
        gE,
    )

    cut_split = split_residual_cut(z, w, P.A, gF)
    cut_step = fejer_cut(z, upe, gE)
    cut_hist = history_cut(x, P.start, gE)
    x_next = project_halfspace_intersection(
        P.start, [cut_split, cut_step, cut_hist], P.constraint, gE
    )

    ju = duality_map(u, gE)
    return IterateState(
        n=n,
        x=x,
        u=u,
        z=z,
        w=w,
        y=y,
        cuts=(cut_split, cut_step, cut_hist),
        x_next=x_next,
        step_norm=lp_norm(x_next - x, gE),
        split_residual=lp_norm(az - w, gF),
        fix_residual=lp_norm(x - wx, gE),
        phi_start=lyapunov(x, P.start, gE),
        cond_ratio=lp_norm(jx - ju, gE.dual()) / alpha,
    )


@dataclass
class RunResult:
    states: list
    converged: bool

    @property
    def iterations(self) -> int:
        return len(self.states)

    @property
    def final(self) -> IterateState:
        return self.states[-1]


def run(P: ProblemInstance, stop: StoppingRule | None = None, validate: bool = True) -> RunResult:
    """Iterate ``step`` from the start point under a stopping rule.

    Records every completed state.  Raises DivergedError when an iterate
    escapes the guard norm; convergence means the step norm reached the
    tolerance within the budget.
    """
    if stop is None:
        stop = StoppingRule()
    if validate:
        validate_instance(P)
    st = IterateState.initial(P)
    states: list[IterateState] = []
    converged = False
    for _ in range(stop.max_iters):
        st = step(P, st)
        states.append(st)
        if lp_norm(st.x_next, P.space) > stop.guard:
            raise DivergedError(f"iterate norm exceeded the guard {stop.guard}")
        if stop.tol > 0.0 and st.step_norm <= stop.tol:
            converged = True
            break
        st = st.successor()
    return RunResult(states, converged)


def make_sfp_instance(C: ConvexSet, Q: ConvexSet, A, inner_map: NonexpansiveMap | None = None,
                      family: WFamily | None = None,
                      schedules: ParameterSchedules | None = None,
                      gamma: float | None = None, start=None,
                      space: SpaceGeometry | None = None,
                      target_space: SpaceGeometry | None = None,
                      smoothness_const: float = 1.0) -> ProblemInstance:
    """Split feasibility problem (find x in C with A x in Q) as an instance.

    Both operators become indicator subdifferentials, so the resolvents
    are projections onto C and Q.  Defaults: p = 2 geometries sized from
    A, identity maps, the standard schedules, and gamma = 1 / ||A||^2.
    """
    A = ensure_finite(A, "coupling matrix")
    if A.ndim != 2:
        raise InvalidParameterError("coupling matrix must be two-dimensional")
    space = space or SpaceGeometry(A.shape[1], 2.0)
    target_space = target_space or SpaceGeometry(A.shape[0], 2.0)
    if gamma is None:
        gamma = 1.0 / operator_norm_bound(A, space, target_space) ** 2 / smoothness_const
    if start is None:
        raise InvalidParameterError("an explicit start point is required")
    return ProblemInstance(
        space=space,
        target_space=target_space,
        A=A,
        source_op=IndicatorSubdifferential(C),
        target_op=IndicatorSubdifferential(Q),
        constraint=C,
        inner_map=inner_map or Identity(),
        family=family or identity_family(),
        schedules=schedules or ParameterSchedules(),
        gamma=float(gamma),
        start=start,
    )
