import numpy as np
import pytest

from splitnull import (
    Ball,
    Box,
    EmptySetError,
    FullSpace,
    Halfspace,
    HalfspaceIntersection,
    IntersectionWith,
    InvalidParameterError,
    SpaceGeometry,
    euclidean_projection,
    generalized_projection,
    lyapunov,
    project_halfspace_intersection,
)
from splitnull.sets import sample_points


def test_halfspace_degenerate_normals():
    full = Halfspace(np.zeros(2), 0.5)
    assert full.is_full
    assert full.contains(np.array([100.0, -3.0]))
    with pytest.raises(EmptySetError):
        Halfspace(np.zeros(2), -0.5)


def test_halfspace_contains_with_tolerance():
    h = Halfspace(np.array([1.0, 0.0]), 1.0)
    assert h.contains(np.array([1.0, 5.0]))
    assert not h.contains(np.array([1.0 + 1e-6, 0.0]))
    assert h.contains(np.array([1.0 + 1e-6, 0.0]), tol=1e-5)


def test_box_and_ball_validation():
    with pytest.raises(EmptySetError):
        Box(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    with pytest.raises(InvalidParameterError):
        Ball(np.zeros(2), -1.0)
    with pytest.raises(InvalidParameterError):
        Box(np.array([-np.inf]), np.array([0.0]))
    # a zero-radius ball is a legal single-point set
    pt = Ball(np.array([1.0, 2.0]), 0.0)
    assert pt.contains(np.array([1.0, 2.0]))
    assert not pt.contains(np.array([1.0, 2.1]))


def test_euclidean_projection_exact_forms():
    box = Box(np.zeros(2), np.ones(2))
    assert np.allclose(euclidean_projection(np.array([2.0, -1.0]), box), [1.0, 0.0])

    ball = Ball(np.zeros(2), 1.0)
    got = euclidean_projection(np.array([3.0, 4.0]), ball)
    assert np.allclose(got, [0.6, 0.8])

    h = HalfspaceIntersection([Halfspace(np.array([1.0, 1.0]), 1.0)])
    got = euclidean_projection(np.array([1.0, 1.0]), h)
    assert np.allclose(got, [0.5, 0.5])


def test_generalized_projection_matches_metric_projection_for_p2():
    rng = np.random.default_rng(11)
    g = SpaceGeometry(3, 2.0)
    sets = [
        Box(-np.ones(3), np.ones(3)),
        Ball(np.array([0.5, 0.0, -0.5]), 1.2),
        HalfspaceIntersection(
            [Halfspace(np.array([1.0, 1.0, 0.0]), 0.5), Halfspace(np.array([0.0, -1.0, 1.0]), 0.3)]
        ),
    ]
    for S in sets:
        for _ in range(10):
            x = rng.standard_normal(3) * 2.0
            assert np.allclose(
                generalized_projection(x, S, g), euclidean_projection(x, S), atol=1e-9
            )


def test_dimension_one_projection_is_clamp_for_any_exponent():
    box = Box(np.array([0.0]), np.array([1.0]))
    for p in (1.5, 2.0, 3.0, 4.0):
        g = SpaceGeometry(1, p)
        assert generalized_projection(np.array([2.0]), box, g)[0] == pytest.approx(1.0)
        assert generalized_projection(np.array([-0.5]), box, g)[0] == pytest.approx(0.0)
        assert generalized_projection(np.array([0.25]), box, g)[0] == pytest.approx(0.25)


def test_empty_intersection_detected():
    cuts = [
        Halfspace(np.array([1.0, 0.0]), -1.0),
        Halfspace(np.array([-1.0, 0.0]), -1.0),
    ]
    g = SpaceGeometry(2, 2.0)
    with pytest.raises(EmptySetError):
        project_halfspace_intersection(np.zeros(2), cuts, FullSpace(2), g)


def test_empty_box_cut_intersection_detected():
    # the cut x1 >= 2 misses the unit box entirely
    cuts = [Halfspace(np.array([-1.0, 0.0]), -2.0)]
    g = SpaceGeometry(2, 2.0)
    with pytest.raises(EmptySetError):
        project_halfspace_intersection(np.zeros(2), cuts, Box(np.zeros(2), np.ones(2)), g)


def test_projection_onto_symmetric_halfspace_p4():
    # For p=4 and x=(1,1) the pairing term is constant on the plane
    # y1+y2=1, so the minimizer of phi over the halfspace is the symmetric
    # point (1/2, 1/2).
    g = SpaceGeometry(2, 4.0)
    S = HalfspaceIntersection([Halfspace(np.array([1.0, 1.0]), 1.0)])
    x = np.array([1.0, 1.0])
    z = generalized_projection(x, S, g)
    assert np.max(np.abs(z - 0.5)) < 1e-6
    # no feasible grid point does better than the reported minimizer
    ts = np.linspace(-1.0, 2.0, 3001)
    cand = np.stack([ts, 1.0 - ts], axis=1)
    phis = [lyapunov(c, x, g) for c in cand]
    assert lyapunov(z, x, g) <= min(phis) + 1e-8


def test_projection_variational_inequality_p3():
    rng = np.random.default_rng(21)
    g = SpaceGeometry(3, 3.0)
    from splitnull.geometry import duality_map

    for _ in range(10):
        a = rng.standard_normal(3)
        anchor = rng.standard_normal(3)
        S = HalfspaceIntersection([Halfspace(a, float(a @ anchor) + 0.1)])
        x = rng.standard_normal(3) * 2.0
        z = generalized_projection(x, S, g)
        assert S.contains(z, 1e-8)
        gap = duality_map(x, g) - duality_map(z, g)
        for y in sample_points(S, 6, rng):
            assert float((y - z) @ gap) <= 1e-8 * (1.0 + np.linalg.norm(y - z))


def test_first_cut_projection_of_interval_example():
    # first iteration of the bundled interval problem: the split cut caps
    # the next iterate at 32/42 and the box keeps it inside [0, 1]
    g = SpaceGeometry(1, 2.0)
    cuts = [Halfspace(np.array([1.0]), 32.0 / 42.0)]
    z = project_halfspace_intersection(np.array([1.0]), cuts, Box(np.zeros(1), np.ones(1)), g)
    assert z[0] == pytest.approx(32.0 / 42.0, abs=1e-12)


def test_projection_idempotent_on_intersection_with_base():
    g = SpaceGeometry(2, 2.0)
    S = IntersectionWith(
        Box(-np.ones(2), np.ones(2)),
        [Halfspace(np.array([1.0, 1.0]), 0.0)],
    )
    x = np.array([2.0, 2.0])
    z = generalized_projection(x, S, g)
    assert S.contains(z, 1e-9)
    z2 = generalized_projection(z, S, g)
    assert np.allclose(z, z2, atol=1e-9)


def test_sample_points_land_inside():
    rng = np.random.default_rng(5)
    for S in (
        Box(-np.ones(3), np.ones(3)),
        Ball(np.zeros(3), 2.0),
        HalfspaceIntersection([Halfspace(np.array([1.0, 0.0, 0.0]), 0.0)]),
        FullSpace(3),
    ):
        for z in sample_points(S, 8, rng):
            assert S.contains(z, 1e-9)
