import numpy as np
import pytest

from splitnull import (
    Box,
    IndicatorSubdifferential,
    InvalidParameterError,
    NotSingleValuedError,
    PsdLinear,
    Scaling,
    SpaceGeometry,
    check_resolvent_inequality,
    duality_map,
    generalized_resolvent,
    lp_norm,
)


def test_scaling_resolvent_closed_form():
    g = SpaceGeometry(3, 2.0)
    x = np.array([2.0, -4.0, 1.0])
    u = generalized_resolvent(Scaling(2.0, 3), 0.25, x, g)
    assert np.allclose(u, x / 1.5)


def test_scaling_resolvent_one_dimension_any_exponent():
    # dim-1 duality map is the identity, so the p=2 formula stays exact
    for p in (1.5, 3.0, 4.0):
        g = SpaceGeometry(1, p)
        u = generalized_resolvent(Scaling(3.0, 1), 0.5, np.array([2.0]), g)
        assert u[0] == pytest.approx(2.0 / 2.5, abs=1e-10)


def test_psd_linear_resolvent_closed_form():
    g = SpaceGeometry(2, 2.0)
    B = np.array([[2.0, 1.0], [1.0, 2.0]])
    x = np.array([1.0, -1.0])
    r = 0.5
    u = generalized_resolvent(PsdLinear(B), r, x, g)
    assert np.allclose(np.eye(2) @ u + r * B @ u, x, atol=1e-12)


def test_psd_linear_validation():
    with pytest.raises(InvalidParameterError):
        PsdLinear(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InvalidParameterError):
        PsdLinear(np.array([[-1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(InvalidParameterError):
        Scaling(-0.1, 2)


def test_resolvent_requires_positive_parameter():
    g = SpaceGeometry(2, 2.0)
    with pytest.raises(InvalidParameterError):
        generalized_resolvent(Scaling(1.0, 2), 0.0, np.zeros(2), g)


def test_resolvent_residual_small_for_p_not_2():
    rng = np.random.default_rng(17)
    for p in (1.5, 3.0):
        g = SpaceGeometry(3, p)
        M = Scaling(2.0, 3)
        for _ in range(10):
            x = rng.standard_normal(3) * 2.0
            u = generalized_resolvent(M, 0.7, x, g)
            resid = duality_map(u, g) + 0.7 * M.value(u) - duality_map(x, g)
            assert lp_norm(resid, g.dual()) < 1e-9 * (1.0 + lp_norm(x, g))


def test_indicator_resolvent_is_projection_for_every_parameter():
    g = SpaceGeometry(2, 2.0)
    box = Box(np.zeros(2), np.ones(2))
    M = IndicatorSubdifferential(box)
    x = np.array([2.0, -1.0])
    u1 = generalized_resolvent(M, 0.1, x, g)
    u2 = generalized_resolvent(M, 10.0, x, g)
    assert np.allclose(u1, [1.0, 0.0])
    assert np.array_equal(u1, u2)


def test_indicator_value_not_single_valued():
    M = IndicatorSubdifferential(Box(np.zeros(1), np.ones(1)))
    with pytest.raises(NotSingleValuedError):
        M.value(np.array([0.0]))


def test_resolvent_inequality_holds():
    rng = np.random.default_rng(23)
    g = SpaceGeometry(3, 1.5)
    M = Scaling(1.5, 3)
    for _ in range(10):
        x = rng.standard_normal(3)
        assert check_resolvent_inequality(M, 0.5, x, np.zeros(3), g)


def test_resolvent_fixes_null_points():
    g = SpaceGeometry(2, 3.0)
    M = Scaling(4.0, 2)
    u = generalized_resolvent(M, 1.3, np.zeros(2), g)
    assert np.max(np.abs(u)) < 1e-10
