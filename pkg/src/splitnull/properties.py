"""Randomized invariant battery behind the ``check-properties`` command.

Every property is exercised on at least a thousand seeded random cases
spanning norm exponents 1.5, 2, 3, and 4 where the property applies.  A
case failure means the stated inequality or identity missed its tolerance;
the report shows the worst signed residual per property (negative residual
means satisfied with margin).

The duality map used by the identity checks is injectable so the battery
itself can be tested: substituting a corrupted map must flip the
three-point identity row to a failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    SpaceGeometry,
    duality_map,
    inverse_duality_map,
    lp_norm,
    lyapunov,
)
from .operators import (
    IndicatorSubdifferential,
    PsdLinear,
    Scaling,
    generalized_resolvent,
)
from .sets import (
    Ball,
    Box,
    FullSpace,
    Halfspace,
    HalfspaceIntersection,
    IntersectionWith,
    euclidean_projection,
    generalized_projection,
    sample_points,
)
from .solver import ParameterSchedules, StoppingRule, make_sfp_instance, run
from .wmaps import AffineContraction, Identity, WFamily

_P_GRID = (1.5, 2.0, 3.0, 4.0)


@dataclass
class PropertyResult:
    name: str
    cases: int
    failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


class _Row:
    """Accumulates signed residuals; anything above zero is a failure."""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.failures = 0
        self.worst = -np.inf

    def add(self, residual: float) -> None:
        self.cases += 1
        self.worst = max(self.worst, residual)
        if residual > 0.0:
            self.failures += 1

    def result(self) -> PropertyResult:
        worst = self.worst if np.isfinite(self.worst) else 0.0
        return PropertyResult(self.name, self.cases, self.failures, worst)


def _dims(rng) -> int:
    return int(rng.integers(1, 6))


def _vec(rng, dim, scale=1.5):
    v = scale * rng.standard_normal(dim)
    return v


# ---------------------------------------------------------------------------
# duality map and Lyapunov functional identities

def _check_duality(rng, n_cases, dmap):
    pairing = _Row("duality_pairing")
    dual_norm = _Row("duality_dual_norm")
    roundtrip = _Row("duality_roundtrip")
    for i in range(n_cases):
        g = SpaceGeometry(_dims(rng), _P_GRID[i % len(_P_GRID)])
        x = np.zeros(g.dim) if i % 97 == 0 else _vec(rng, g.dim)
        jx = dmap(x, g)
        nx = lp_norm(x, g)
        pairing.add(abs(float(x @ jx) - nx * nx) - 1e-10 * (1.0 + nx * nx))
        dual_norm.add(abs(lp_norm(jx, g.dual()) - nx) - 1e-10 * (1.0 + nx))
        back = inverse_duality_map(jx, g)
        v = _vec(rng, g.dim)
        forth = dmap(inverse_duality_map(v, g), g)
        err = max(
            float(np.max(np.abs(back - x))) if g.dim else 0.0,
            float(np.max(np.abs(forth - v))),
        )
        roundtrip.add(err - 1e-10 * (1.0 + nx + float(np.max(np.abs(v)))))
    return [pairing.result(), dual_norm.result(), roundtrip.result()]


def _check_sandwich(rng, n_cases):
    row = _Row("phi_sandwich")
    for i in range(n_cases):
        g = SpaceGeometry(_dims(rng), _P_GRID[i % len(_P_GRID)])
        x, y = _vec(rng, g.dim), _vec(rng, g.dim)
        nx, ny = lp_norm(x, g), lp_norm(y, g)
        phi = lyapunov(x, y, g)
        scale = 1e-10 * (1.0 + (nx + ny) ** 2)
        low = (nx - ny) ** 2 - phi - scale
        high = phi - (nx + ny) ** 2 - scale
        row.add(max(low, high))
    return [row.result()]


def _check_dual_convexity(rng, n_cases):
    row = _Row("phi_dual_convexity")
    for i in range(n_cases):
        g = SpaceGeometry(_dims(rng), _P_GRID[i % len(_P_GRID)])
        t, x, y = _vec(rng, g.dim), _vec(rng, g.dim), _vec(rng, g.dim)
        lam = float(rng.uniform())
        blend = inverse_duality_map(
            lam * duality_map(x, g) + (1.0 - lam) * duality_map(y, g), g
        )
        lhs = lyapunov(t, blend, g)
        rhs = lam * lyapunov(t, x, g) + (1.0 - lam) * lyapunov(t, y, g)
        row.add(lhs - rhs - 1e-10 * (1.0 + abs(rhs)))
    return [row.result()]


def _check_three_point(rng, n_cases, dmap):
    row = _Row("phi_three_point")
    # pairing side uses the injected map, the functional side the library
    # implementation, so a corrupted map cannot cancel out of both sides
    for i in range(n_cases):
        g = SpaceGeometry(_dims(rng), _P_GRID[i % len(_P_GRID)])
        x, y, z, w = (_vec(rng, g.dim) for _ in range(4))
        lhs = 2.0 * float((x - y) @ (dmap(z, g) - dmap(w, g)))
        rhs = (
            lyapunov(x, w, g)
            + lyapunov(y, z, g)
            - lyapunov(x, z, g)
            - lyapunov(y, w, g)
        )
        row.add(abs(lhs - rhs) - 1e-10 * (1.0 + abs(lhs) + abs(rhs)))
    return [row.result()]


# ---------------------------------------------------------------------------
# generalized projections

def _anchored_cuts(rng, dim, count):
    """Random halfspaces all containing a common anchor point."""
    anchor = _vec(rng, dim)
    cuts = []
    for _ in range(count):
        a = rng.standard_normal(dim)
        while not np.any(a):
            a = rng.standard_normal(dim)
        margin = float(rng.uniform(0.0, 1.5))
        cuts.append(Halfspace(a, float(a @ anchor) + margin))
    return cuts


def _projection_case(rng, i):
    p = _P_GRID[i % len(_P_GRID)]
    dim = int(rng.integers(2, 5)) if p != 2.0 else _dims(rng)
    g = SpaceGeometry(dim, p)
    if p == 2.0:
        pick = i % 4
        if pick == 0:
            lo = -1.0 - rng.uniform(size=dim)
            S = Box(lo, lo + 1.0 + rng.uniform(size=dim))
        elif pick == 1:
            S = Ball(_vec(rng, dim), float(rng.uniform(0.5, 2.0)))
        elif pick == 2:
            S = HalfspaceIntersection(_anchored_cuts(rng, dim, int(rng.integers(1, 4))))
        else:
            lo = -1.5 * np.ones(dim)
            S = IntersectionWith(Box(lo, -lo), _anchored_cuts(rng, dim, 2))
    else:
        S = HalfspaceIntersection(_anchored_cuts(rng, dim, int(rng.integers(1, 3))))
    return g, S


def _check_projections(rng, n_cases):
    decrease = _Row("projection_phi_decrease")
    variational = _Row("projection_variational")
    idem = _Row("projection_idempotent")
    member = _Row("projection_membership")
    for i in range(n_cases):
        g, S = _projection_case(rng, i)
        x = _vec(rng, g.dim, scale=2.0)
        z_hat = generalized_projection(x, S, g)
        member.add(0.0 if S.contains(z_hat, 1e-8) else 1.0)
        again = generalized_projection(z_hat, S, g)
        idem.add(float(np.max(np.abs(again - z_hat))) - 1e-8)
        zs = sample_points(S, 4, rng)
        jx = duality_map(x, g)
        jz = duality_map(z_hat, g)
        phi_zx = [lyapunov(z, x, g) for z in zs]
        scale = 1e-8 * (1.0 + max(abs(v) for v in phi_zx))
        for z, pzx in zip(zs, phi_zx):
            decrease.add(lyapunov(z, z_hat, g) + lyapunov(z_hat, x, g) - pzx - scale)
            variational.add(float((z - z_hat) @ (jx - jz)) - 1e-8 * (1.0 + lp_norm(z - z_hat, g)))
    return [decrease.result(), variational.result(), idem.result(), member.result()]


def _check_metric_agreement(rng, n_cases):
    row = _Row("projection_metric_agreement")
    for i in range(n_cases):
        g, S = _projection_case(rng, 4 * i + 1)  # forces p = 2 variants
        g = SpaceGeometry(g.dim, 2.0)
        x = _vec(rng, g.dim, scale=2.0)
        a = generalized_projection(x, S, g)
        b = euclidean_projection(x, S)
        row.add(float(np.max(np.abs(a - b))) - 1e-10 * (1.0 + float(np.max(np.abs(x)))))
    return [row.result()]


# ---------------------------------------------------------------------------
# resolvents

def _psd_with_kernel(rng, dim):
    """A PSD matrix with a known nontrivial kernel vector; returns (B, k)."""
    k = rng.standard_normal(dim)
    k /= np.linalg.norm(k)
    eigs = np.abs(rng.uniform(0.5, 2.0, size=dim))
    raw = rng.standard_normal((dim, dim))
    qmat, _ = np.linalg.qr(raw)
    B = qmat @ np.diag(eigs) @ qmat.T
    proj = np.eye(dim) - np.outer(k, k)
    B = proj @ B @ proj
    B = 0.5 * (B + B.T)
    return B, k


def _resolvent_case(rng, i):
    p = _P_GRID[i % len(_P_GRID)]
    dim = int(rng.integers(1, 5))
    g = SpaceGeometry(dim, p)
    pick = (i // len(_P_GRID)) % 3
    if pick == 0:
        M = Scaling(float(rng.uniform(0.0, 3.0)), dim)
        y0 = np.zeros(dim)
    elif pick == 1 and dim > 1:
        B, k = _psd_with_kernel(rng, dim)
        M = PsdLinear(B)
        y0 = float(rng.uniform(-2.0, 2.0)) * k
    else:
        if p == 2.0 or dim == 1:
            lo = -1.0 - rng.uniform(size=dim)
            S = Box(lo, lo + 2.0)
        else:
            S = HalfspaceIntersection(_anchored_cuts(rng, dim, 2))
        M = IndicatorSubdifferential(S)
        y0 = sample_points(S, 1, rng)[0]
    return g, M, y0


def _check_resolvents(rng, n_cases):
    decrease = _Row("resolvent_phi_decrease")
    fixes = _Row("resolvent_fixes_zeros")
    for i in range(n_cases):
        g, M, y0 = _resolvent_case(rng, i)
        r = float(rng.uniform(0.05, 2.0))
        x = _vec(rng, g.dim, scale=2.0)
        u = generalized_resolvent(M, r, x, g)
        lhs = lyapunov(y0, u, g) + lyapunov(u, x, g)
        rhs = lyapunov(y0, x, g)
        decrease.add(lhs - rhs - 1e-8 * (1.0 + abs(rhs)))
        fixed = generalized_resolvent(M, r, y0, g)
        fixes.add(lp_norm(fixed - y0, g) - 1e-8 * (1.0 + lp_norm(y0, g)))
    return [decrease.result(), fixes.result()]


def _check_resolvent_residual(rng, n_cases):
    row = _Row("resolvent_residual")
    for i in range(n_cases):
        p = _P_GRID[i % len(_P_GRID)]
        dim = int(rng.integers(1, 5))
        g = SpaceGeometry(dim, p)
        if i % 2 == 0 or dim == 1:
            M = Scaling(float(rng.uniform(0.0, 3.0)), dim)
        else:
            B, _ = _psd_with_kernel(rng, dim)
            M = PsdLinear(B)
        r = float(rng.uniform(0.05, 2.0))
        x = _vec(rng, g.dim, scale=2.0)
        u = generalized_resolvent(M, r, x, g)
        resid = duality_map(u, g) + r * M.value(u) - duality_map(x, g)
        row.add(lp_norm(resid, g.dual()) - 1e-8 * (1.0 + lp_norm(x, g)))
    return [row.result()]


def _check_obtuse_angle(rng, n_cases):
    row = _Row("obtuse_angle_p2")
    for i in range(n_cases):
        g, M, y0 = _resolvent_case(rng, 4 * i + 1)  # p = 2 slots
        g = SpaceGeometry(g.dim, 2.0)
        r = float(rng.uniform(0.05, 2.0))
        x = _vec(rng, g.dim, scale=2.0)
        u = generalized_resolvent(M, r, x, g)
        row.add(-float((u - y0) @ (x - u)) - 1e-8 * (1.0 + lp_norm(x, g) ** 2))
    return [row.result()]


def _check_monotone(rng, n_cases):
    row = _Row("operator_monotone")
    for i in range(n_cases):
        dim = int(rng.integers(1, 5))
        if i % 2 == 0 or dim == 1:
            M = Scaling(float(rng.uniform(0.0, 3.0)), dim)
        else:
            B, _ = _psd_with_kernel(rng, dim)
            M = PsdLinear(B)
        x, y = _vec(rng, dim), _vec(rng, dim)
        gap = float((x - y) @ (M.value(x) - M.value(y)))
        row.add(-gap - 1e-10 * (1.0 + float(np.linalg.norm(x - y)) ** 2))
    return [row.result()]


# ---------------------------------------------------------------------------
# nested averaged compositions

def _random_family(rng, dim, z_star, count):
    maps = []
    for _ in range(count):
        raw = rng.standard_normal((dim, dim))
        raw *= float(rng.uniform(0.3, 0.95)) / max(np.linalg.norm(raw, 2), 1e-12)
        maps.append(AffineContraction(raw, z_star - raw @ z_star))
    lambdas = rng.uniform(0.1, 0.5, size=count)
    return WFamily(maps, lambdas, bound=0.5)


def _check_wmaps(rng, n_cases):
    nonexp = _Row("wmap_nonexpansive")
    fixed = _Row("wmap_fixes_common_points")
    cauchy = _Row("wmap_cauchy_differences")
    for i in range(n_cases):
        dim = int(rng.integers(1, 5))
        z_star = _vec(rng, dim)
        fam = _random_family(rng, dim, z_star, int(rng.integers(2, 6)))
        n = int(rng.integers(1, fam.depth + 1))
        x, y = _vec(rng, dim, 2.0), _vec(rng, dim, 2.0)
        wx, wy = fam.apply(n, x), fam.apply(n, y)
        nonexp.add(
            float(np.linalg.norm(wx - wy))
            - float(np.linalg.norm(x - y)) * (1.0 + 1e-10)
            - 1e-12
        )
        fixed.add(float(np.max(np.abs(fam.apply(n, z_star) - z_star))) - 1e-10 * (1.0 + float(np.max(np.abs(z_star)))))
        # depth is at least 2 here, so a strictly interior level always exists
        m = int(rng.integers(1, fam.depth))
        gap = float(np.linalg.norm(fam.apply(m + 1, x) - fam.apply(m, x)))
        budget = np.prod(fam.lambdas[: m + 1]) * max(
            float(np.linalg.norm(t(x) - x)) for t in fam.maps
        )
        cauchy.add(gap - budget - 1e-10 * (1.0 + budget))
    return [nonexp.result(), fixed.result(), cauchy.result()]


# ---------------------------------------------------------------------------
# solver structure

def _structure_runs(rng):
    from .oracle import reference_instance

    runs = []
    P, _ = reference_instance(1.0)
    runs.append((P, np.zeros(1), 200))
    A = rng.standard_normal((5, 3))
    C = Box(-np.ones(3), np.ones(3))
    Q = Box(-0.3 * np.ones(5), 0.3 * np.ones(5))
    start = np.clip(rng.uniform(-1.0, 1.0, size=3), -1.0, 1.0)
    P2 = make_sfp_instance(C, Q, A, start=start)
    runs.append((P2, np.zeros(3), 150))
    return runs


def _check_solver_structure(rng):
    containment = _Row("solver_cut_containment")
    feasibility = _Row("solver_iterate_feasible")
    monotone = _Row("solver_phi_monotone")
    for P, z_star, steps in _structure_runs(rng):
        result = run(P, StoppingRule(tol=0.0, max_iters=steps))
        prev_phi = None
        for st in result.states:
            worst_cut = 0.0
            for cut in st.cuts:
                if not cut.is_full:
                    worst_cut = max(worst_cut, float(cut.a @ z_star) - cut.b)
            containment.add(worst_cut - 1e-8)
            ok = P.constraint.contains(st.x_next, 1e-8) and all(
                c.contains(st.x_next, 1e-8) for c in st.cuts
            )
            feasibility.add(0.0 if ok else 1.0)
            if prev_phi is not None:
                monotone.add(prev_phi - st.phi_start - 1e-10 * (1.0 + abs(prev_phi)))
            prev_phi = st.phi_start
    return [containment.result(), feasibility.result(), monotone.result()]


# ---------------------------------------------------------------------------
# battery driver

def run_battery(seed: int = 0, n_cases: int = 1000, duality=None) -> list[PropertyResult]:
    """Run every property on seeded random cases; deterministic per seed."""
    dmap = duality_map if duality is None else duality
    rng = np.random.default_rng(seed)
    results = []
    results += _check_duality(rng, n_cases, dmap)
    results += _check_sandwich(rng, n_cases)
    results += _check_dual_convexity(rng, n_cases)
    results += _check_three_point(rng, n_cases, dmap)
    results += _check_projections(rng, n_cases)
    results += _check_metric_agreement(rng, n_cases)
    results += _check_resolvents(rng, n_cases)
    results += _check_resolvent_residual(rng, n_cases)
    results += _check_obtuse_angle(rng, n_cases)
    results += _check_monotone(rng, n_cases)
    results += _check_wmaps(rng, n_cases)
    results += _check_solver_structure(rng)
    return results


def format_report(results, seed: int) -> str:
    lines = [f"property battery, seed={seed}"]
    lines.append(f"{'property':32s} {'cases':>7s} {'failures':>9s} {'worst':>13s} verdict")
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:32s} {r.cases:7d} {r.failures:9d} {r.worst:13.3e} {verdict}")
    total = sum(r.cases for r in results)
    bad = [r.name for r in results if not r.passed]
    if bad:
        lines.append(f"overall: FAIL ({len(bad)} failing: {', '.join(bad)})")
    else:
        lines.append(f"overall: PASS ({len(results)} properties, {total} cases)")
    return "\n".join(lines)
