"""Damped Newton iteration shared by the resolvent and projection solvers."""

from __future__ import annotations

import numpy as np

from .errors import NoConvergenceError

COND_LIMIT = 1e12


def finite_difference_jacobian(residual, v: np.ndarray, step: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian of ``residual`` at ``v``."""
    n = v.size
    cols = []
    for i in range(n):
        h = step * (1.0 + abs(v[i]))
        vp = v.copy()
        vm = v.copy()
        vp[i] += h
        vm[i] -= h
        cols.append((residual(vp) - residual(vm)) / (2.0 * h))
    return np.column_stack(cols)


def guarded_jacobian(residual, analytic, v: np.ndarray) -> np.ndarray:
    """Analytic Jacobian unless it is non-finite or badly conditioned."""
    jac = analytic(v)
    if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > COND_LIMIT:
        return finite_difference_jacobian(residual, v)
    return jac


def damped_newton(residual, analytic_jacobian, v0, tol: float, max_iter: int = 200,
                  armijo: float = 1e-4, max_backtrack: int = 40) -> np.ndarray:
    """Solve ``residual(v) = 0`` by Newton steps with Armijo backtracking.

    Convergence means the Euclidean residual norm drops to ``tol`` or
    below.  Raises NoConvergenceError when the budget runs out or a line
    search stalls.
    """
    v = np.asarray(v0, dtype=float).copy()
    g = residual(v)
    merit = float(g @ g)
    target = tol * tol
    for _ in range(max_iter):
        if merit <= target:
            return v
        jac = guarded_jacobian(residual, analytic_jacobian, v)
        try:
            direction = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError:
            direction = np.linalg.lstsq(jac, -g, rcond=None)[0]
        t = 1.0
        accepted = False
        for _bt in range(max_backtrack):
            vt = v + t * direction
            gt = residual(vt)
            mt = float(gt @ gt)
            if mt <= (1.0 - 2.0 * armijo * t) * merit:
                v, g, merit = vt, gt, mt
                accepted = True
                break
            t *= 0.5
        if not accepted:
            raise NoConvergenceError("newton line search stalled")
    if merit <= target:
        return v
    raise NoConvergenceError("newton iteration budget exhausted")
