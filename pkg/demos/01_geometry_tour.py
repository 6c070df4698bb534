#!/usr/bin/env python3
"""Tour of the l^p geometry helpers: norms, duality maps, and the
Lyapunov functional that replaces squared distance away from p=2."""

import numpy as np

from splitnull import SpaceGeometry, duality_map, inverse_duality_map, lp_norm, lyapunov


def main():
    x = np.array([1.0, -2.0, 0.5])

    print("vector x =", x)
    print("=" * 60)
    for p in (1.5, 2.0, 3.0, 4.0):
        g = SpaceGeometry(3, p)
        jx = duality_map(x, g)
        print(f"p = {p}")
        print(f"  ||x||_p           = {lp_norm(x, g):.6f}")
        print(f"  J(x)              = {np.array2string(jx, precision=6)}")
        print(f"  <x, Jx>           = {x @ jx:.6f}   (equals ||x||^2)")
        print(f"  ||Jx||_q          = {lp_norm(jx, g.dual()):.6f}   (equals ||x||)")
        back = inverse_duality_map(jx, g)
        print(f"  J^-1(J(x)) error  = {np.max(np.abs(back - x)):.2e}")
        print()

    print("=" * 60)
    print("the Lyapunov functional phi(x, y) generalizes ||x - y||^2:")
    g2 = SpaceGeometry(3, 2.0)
    g15 = SpaceGeometry(3, 1.5)
    y = np.array([0.5, 0.5, 0.5])
    print(f"  p=2.0: phi = {lyapunov(x, y, g2):.6f}, ||x-y||^2 = {np.sum((x - y) ** 2):.6f}")
    print(f"  p=1.5: phi = {lyapunov(x, y, g15):.6f}  (no distance interpretation,")
    nx, ny = lp_norm(x, g15), lp_norm(y, g15)
    print(f"         but sandwiched between {(nx - ny) ** 2:.4f} and {(nx + ny) ** 2:.4f})")

    print()
    print("in dimension one every weight cancels and J is the identity:")
    for p in (1.5, 3.0, 7.0):
        g1 = SpaceGeometry(1, p)
        v = np.array([-2.5])
        print(f"  p = {p}: J({v[0]}) = {duality_map(v, g1)[0]:.12f}")


if __name__ == "__main__":
    main()
