"""Closed-form reference recurrence for the bundled one-dimensional example.

The example lives on the interval C = [0, 1] with coupling A = -2x, source
operator 2x, target operator 3y, resolvent parameters 0.25, perturbation
e_n = 1/n, and step weight gamma = 0.1.  Every quantity of the iteration
then has a scalar closed form, derived by hand from the definitions:

    s    = x_n + 1/n
    u_n  = x_n
    z_n  = (2/3) s            resolvent of 2x at parameter 1/4
    w_n  = -(16/21) s         resolvent of 3y at -2 z_n
    y_n  = clamp((116/210) s) since J z - 0.1 A^T J(Az - w) = (116/210) s
    split cut:  v <= (16/42) s
    step cut:   v <= (5/6) s  from expanding (v - z_n)^2 <= (v - s)^2
    history cut: v <= x_n when the start exceeds x_n, none at n = 1

and x_{n+1} clamps the start point into the surviving interval.  This
module implements that recurrence with plain floats, no shared code with
the solver, so the two can be compared as independent computations.

Note the step-cut bound used here follows from expanding the defining
inequality phi(v, z_n) <= phi(v, u_n + e_n) directly; demos/05 checks that
expansion against a brute-force evaluation of the inequality itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySetError, InvalidParameterError
from .geometry import SpaceGeometry
from .operators import Scaling
from .sets import Box
from .solver import (
    ErrorSchedule,
    ParameterSchedules,
    ProblemInstance,
    RunResult,
    StoppingRule,
    run,
)
from .wmaps import Identity, identity_family


@dataclass(frozen=True)
class ClosedFormState:
    n: int
    x: float
    u: float
    z: float
    w: float
    y: float
    split_bound: float
    step_bound: float
    x_next: float


def closed_form_trajectory(x1: float, steps: int) -> list[ClosedFormState]:
    """The first ``steps`` iterations of the scalar recurrence from ``x1``."""
    x1 = float(x1)
    if not (0.0 <= x1 <= 1.0):
        raise InvalidParameterError("the example requires a start inside [0, 1]")
    if steps < 1:
        raise InvalidParameterError("steps must be at least 1")
    out = []
    x = x1
    for n in range(1, steps + 1):
        s = x + 1.0 / n
        u = x
        z = (2.0 / 3.0) * s
        w = -(16.0 / 21.0) * s
        y = min(max((116.0 / 210.0) * s, 0.0), 1.0)
        split_bound = (16.0 / 42.0) * s
        step_bound = (5.0 / 6.0) * s
        lo, hi = 0.0, 1.0
        hi = min(hi, split_bound, step_bound)
        if x1 > x:
            hi = min(hi, x)
        elif x1 < x:
            lo = max(lo, x)
        if lo > hi:
            raise EmptySetError("closed-form cut interval collapsed")
        x_next = min(max(x1, lo), hi)
        out.append(ClosedFormState(n, x, u, z, w, y, split_bound, step_bound, x_next))
        x = x_next
    return out


def first_below(threshold: float, x1: float = 1.0, limit: int = 100000) -> int:
    """Smallest n with |x_n| < threshold along the closed-form trajectory."""
    x = float(x1)
    if abs(x) < threshold:
        return 1
    for st in closed_form_trajectory(x1, limit):
        if abs(st.x_next) < threshold:
            return st.n + 1
    raise InvalidParameterError(f"trajectory stayed above {threshold} for {limit} steps")


def reference_instance(x1: float = 1.0) -> tuple[ProblemInstance, StoppingRule]:
    """The same example posed as a general problem instance."""
    return (
        ProblemInstance(
            space=SpaceGeometry(1, 2.0),
            target_space=SpaceGeometry(1, 2.0),
            A=np.array([[-2.0]]),
            source_op=Scaling(2.0, 1),
            target_op=Scaling(3.0, 1),
            constraint=Box([0.0], [1.0]),
            inner_map=Identity(),
            family=identity_family(),
            schedules=ParameterSchedules(error=ErrorSchedule.decay([1.0])),
            gamma=0.1,
            start=np.array([float(x1)]),
        ),
        StoppingRule(),
    )


def compare_trajectories(x1: float = 1.0, steps: int = 1000) -> dict:
    """Max per-component deviation between the solver and the recurrence.

    Runs the general solver for exactly ``steps`` iterations (step-norm
    stopping disabled) and the scalar recurrence side by side.  Returns a
    dict of per-quantity maxima plus the overall worst value under "max".
    The split-cut bound is compared as offset over normal of the built
    halfspace, which is well defined here because the cut never
    degenerates on this example.
    """
    P, _ = reference_instance(x1)
    result: RunResult = run(P, StoppingRule(tol=0.0, max_iters=steps))
    oracle = closed_form_trajectory(x1, steps)
    dev = {"x": 0.0, "u": 0.0, "z": 0.0, "w": 0.0, "y": 0.0, "split_bound": 0.0}
    for st, ref in zip(result.states, oracle):
        dev["x"] = max(dev["x"], abs(float(st.x[0]) - ref.x))
        dev["u"] = max(dev["u"], abs(float(st.u[0]) - ref.u))
        dev["z"] = max(dev["z"], abs(float(st.z[0]) - ref.z))
        dev["w"] = max(dev["w"], abs(float(st.w[0]) - ref.w))
        dev["y"] = max(dev["y"], abs(float(st.y[0]) - ref.y))
        cut = st.cuts[0]
        if cut.is_full:
            raise InvalidParameterError("split cut unexpectedly degenerated")
        bound = cut.b / float(cut.a[0])
        dev["split_bound"] = max(dev["split_bound"], abs(bound - ref.split_bound))
    dev["max"] = max(dev.values())
    dev["steps"] = len(result.states)
    return dev
