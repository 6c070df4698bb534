#!/usr/bin/env python3
"""Nested averaged compositions of nonexpansive maps.

Level n averages T_n against the input, then level n-1 averages T_{n-1}
applied to that intermediate against the same input, and so on down to
level 1.  Common fixed points of the family survive at every level, and
successive levels form a Cauchy sequence whose gap is controlled by the
product of the mixing weights.
"""

import numpy as np

from splitnull import AffineContraction, WFamily


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def main():
    rng = np.random.default_rng(3)
    z_star = np.array([0.5, -0.25])

    # six contractions sharing the fixed point z_star
    maps = []
    for k in range(6):
        Q = float(rng.uniform(0.4, 0.9)) * rotation(rng.uniform(0.0, 2 * np.pi))
        maps.append(AffineContraction(Q, z_star - Q @ z_star))
    lam = rng.uniform(0.2, 0.5, size=6)
    fam = WFamily(maps, lam, bound=0.5)

    x = np.array([3.0, 2.0])
    print("common fixed point z* =", z_star)
    print("input x =", x)
    print("=" * 60)
    print(" n   W_n x                      |W_n x - W_{n-1}x|   weight budget")
    prev = None
    for n in range(1, fam.depth + 1):
        w = fam.apply(n, x)
        if prev is not None:
            gap = np.linalg.norm(w - prev)
            budget = np.prod(lam[:n]) * max(np.linalg.norm(t(x) - x) for t in maps)
            print(f" {n}   {np.array2string(w, precision=8):26s} {gap:.3e}          {budget:.3e}")
        else:
            print(f" {n}   {np.array2string(w, precision=8)}")
        prev = w

    print()
    print("fixed point preserved at every level:")
    for n in (1, 3, 6):
        err = np.max(np.abs(fam.apply(n, z_star) - z_star))
        print(f"  |W_{n} z* - z*| = {err:.2e}")

    print()
    for eps in (1e-2, 1e-12):
        lim = fam.apply_limit(x, eps=eps)
        if lim.truncated:
            note = f"ran out of maps at depth {lim.n_used}, gap target not reached"
        else:
            note = f"stabilized after {lim.n_used} levels"
        print(f"apply_limit(eps={eps:g}): {note}")
    print("deepest value =", np.array2string(fam.apply(fam.depth, x), precision=10))


if __name__ == "__main__":
    main()
