import pytest

from splitnull.oracle import (
    closed_form_trajectory,
    compare_trajectories,
    first_below,
    reference_instance,
)
from splitnull.solver import validate_instance


def test_first_state_hand_values():
    states = closed_form_trajectory(1.0, 2)
    s1 = states[0]
    assert s1.n == 1
    assert s1.x == 1.0
    assert s1.u == 1.0
    assert s1.z == pytest.approx(4.0 / 3.0, abs=1e-15)
    assert s1.w == pytest.approx(-32.0 / 21.0, abs=1e-15)
    assert s1.y == 1.0  # the unclamped value 232/210 exceeds the interval
    assert s1.split_bound == pytest.approx(32.0 / 42.0, abs=1e-15)
    assert s1.x_next == pytest.approx(32.0 / 42.0, abs=1e-15)
    # history never loosens anything when starting from the right endpoint
    s2 = states[1]
    assert s2.x == s1.x_next
    assert s2.x_next <= s2.x


def test_trajectory_monotone_from_any_start():
    for x1 in (0.0, 0.3, 1.0):
        states = closed_form_trajectory(x1, 200)
        xs = [s.x for s in states]
        assert all(b <= a for a, b in zip(xs, xs[1:]))
        assert all(0.0 <= v <= 1.0 for v in xs)


def test_first_below_sanity():
    n = first_below(1e-3)
    states = closed_form_trajectory(1.0, n)
    assert states[-1].x < 1e-3
    assert states[-2].x >= 1e-3


def test_reference_instance_is_valid():
    P, stop = reference_instance(1.0)
    validate_instance(P)
    assert stop.tol == 1e-8


def test_compare_trajectories_tight():
    rep = compare_trajectories(0.5, 100)
    assert rep["max"] < 1e-12
    assert rep["steps"] == 100
