#!/usr/bin/env python3
"""The bundled one-dimensional interval problem, end to end.

Everything here is scalar, so each sub-step collapses to a closed form
that the full solver must reproduce exactly:

    s   = x_n + 1/n          (after the inexactness term e_n = 1/n)
    z_n = (2/3) s            resolvent of M1(x) = 2x at lambda = 1/4
    w_n = -(16/21) s         resolvent of M2(y) = 3y applied to A z_n
    y_n = clip((116/210) s)  gradient-like correction, back onto [0, 1]

The three halfspace cuts then reduce to interval caps:

    split cut:   x <= (16/42) s
    step cut:    x <= (5/6) s
    history cut: x <= x_n

The step cut comes from expanding 2 (u_n + e_n - z_n) x <= (u_n + e_n)^2
- z_n^2 with u_n = x_n: the normal is (2/3) s and the offset (5/9) s^2,
hence x <= (5/6) s whenever s > 0.  Because (16/42) s < (5/6) s the step
cut never binds on this problem; the script verifies both facts
numerically rather than trusting the algebra.
"""

import numpy as np

from splitnull import StoppingRule, fejer_cut, run
from splitnull.oracle import closed_form_trajectory, reference_instance


def main():
    P, stop = reference_instance(1.0)

    print("first iterations, solver vs closed form")
    print("=" * 72)
    res = run(P, StoppingRule(tol=0.0, max_iters=8))
    states = closed_form_trajectory(1.0, 8)
    print(" n   x_n (solver)        x_n (closed)        z_n          w_n")
    for st, cf in zip(res.states, states):
        print(
            f" {st.n}   {st.x[0]:.15f}   {cf.x:.15f}   {st.z[0]: .6f}   {st.w[0]: .6f}"
        )
    worst = max(abs(st.x[0] - cf.x) for st, cf in zip(res.states, states))
    print(f"worst |solver - closed form| over these steps: {worst:.2e}")

    print()
    print("brute-force check of the step-cut expansion")
    print("=" * 72)
    g = P.space
    worst_gap = 0.0
    for s in np.linspace(0.05, 2.0, 40):
        z = np.array([2.0 * s / 3.0])
        cut = fejer_cut(z, np.array([s]), g)
        # the cut is a.x <= b; for s > 0 that caps x at b / a
        cap = cut.b / cut.a[0]
        worst_gap = max(worst_gap, abs(cap - 5.0 * s / 6.0))
    print(f"max |cut cap - (5/6) s| over s in [0.05, 2]: {worst_gap:.2e}")

    far = all(16.0 * s / 42.0 < 5.0 * s / 6.0 for s in np.linspace(0.01, 2.0, 200))
    print(f"split bound (16/42) s stays below step bound (5/6) s: {far}")

    print()
    print("running to the 1e-8 step-norm tolerance")
    print("=" * 72)
    full = run(P, stop)
    last = full.states[-1]
    print(f"converged = {full.converged} after {full.iterations} iterations")
    print(f"final iterate {last.x[0]:.3e}, final step {last.step_norm:.3e}")
    print("the solution of the problem is x = 0, approached like c / n:")
    for n in (100, 1000, full.iterations):
        st = full.states[n - 1]
        print(f"  n = {n:5d}: x_n = {st.x[0]:.6e}   n * x_n = {st.n * st.x[0]:.4f}")


if __name__ == "__main__":
    main()
