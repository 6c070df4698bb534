import numpy as np
import pytest

from splitnull import (
    DimensionMismatchError,
    InvalidParameterError,
    SpaceGeometry,
    duality_map,
    inverse_duality_map,
    lp_norm,
    lyapunov,
)
from splitnull.geometry import duality_jacobian
from splitnull._newton import finite_difference_jacobian


def test_geometry_validation():
    with pytest.raises(InvalidParameterError):
        SpaceGeometry(0, 2.0)
    with pytest.raises(InvalidParameterError):
        SpaceGeometry(3, 1.0)
    with pytest.raises(InvalidParameterError):
        SpaceGeometry(3, float("inf"))
    g = SpaceGeometry(3, 1.5)
    assert g.q == 3.0
    assert not g.is_hilbert
    assert SpaceGeometry(2, 2.0).is_hilbert


def test_conjugate_exponent_algebra():
    for p in (1.5, 2.0, 3.0, 4.0, 1.1):
        g = SpaceGeometry(2, p)
        q = g.q
        assert (p - 1.0) * (q - 1.0) == pytest.approx(1.0, rel=1e-14)
        assert p + q == pytest.approx(p * q, rel=1e-14)
        assert g.dual().p == pytest.approx(q)
        assert g.dual().dual().p == pytest.approx(p, rel=1e-14)


def test_duality_map_is_identity_in_hilbert_case():
    g = SpaceGeometry(4, 2.0)
    x = np.array([1.0, -2.0, 0.0, 3.5])
    assert np.array_equal(duality_map(x, g), x)
    assert np.array_equal(inverse_duality_map(x, g), x)


def test_duality_map_zero_vector():
    g = SpaceGeometry(3, 3.0)
    assert np.array_equal(duality_map(np.zeros(3), g), np.zeros(3))


def test_duality_map_one_dimension_any_exponent():
    # in dimension one the weights cancel and J collapses to the identity
    for p in (1.2, 1.5, 2.0, 3.0, 7.0):
        g = SpaceGeometry(1, p)
        for v in (-2.5, -1.0, 0.0, 0.3, 4.0):
            x = np.array([v])
            assert duality_map(x, g)[0] == pytest.approx(v, abs=1e-12)


def test_duality_identities_fixed_cases():
    rng = np.random.default_rng(3)
    for p in (1.5, 2.0, 3.0, 4.0):
        g = SpaceGeometry(4, p)
        for _ in range(25):
            x = rng.standard_normal(4) * 2.0
            jx = duality_map(x, g)
            nx = lp_norm(x, g)
            assert float(x @ jx) == pytest.approx(nx * nx, rel=1e-12, abs=1e-12)
            assert lp_norm(jx, g.dual()) == pytest.approx(nx, rel=1e-12, abs=1e-12)


def test_duality_map_round_trip():
    rng = np.random.default_rng(4)
    for p in (1.5, 3.0, 4.0):
        g = SpaceGeometry(5, p)
        x = rng.standard_normal(5)
        assert np.max(np.abs(inverse_duality_map(duality_map(x, g), g) - x)) < 1e-12
        v = rng.standard_normal(5)
        assert np.max(np.abs(duality_map(inverse_duality_map(v, g), g) - v)) < 1e-12


def test_duality_map_positive_homogeneity():
    g = SpaceGeometry(3, 1.5)
    x = np.array([0.7, -1.1, 0.4])
    assert np.allclose(duality_map(2.5 * x, g), 2.5 * duality_map(x, g))


def test_lyapunov_basics():
    g = SpaceGeometry(3, 3.0)
    x = np.array([1.0, 2.0, -1.0])
    y = np.array([0.5, -0.5, 2.0])
    assert lyapunov(x, x, g) == pytest.approx(0.0, abs=1e-12)
    phi = lyapunov(x, y, g)
    nx, ny = lp_norm(x, g), lp_norm(y, g)
    assert (nx - ny) ** 2 - 1e-12 <= phi <= (nx + ny) ** 2 + 1e-12


def test_lyapunov_reduces_to_squared_distance_in_hilbert_case():
    g = SpaceGeometry(2, 2.0)
    x = np.array([3.0, -1.0])
    y = np.array([1.0, 1.0])
    assert lyapunov(x, y, g) == pytest.approx(float(np.sum((x - y) ** 2)), rel=1e-14)


def test_duality_jacobian_matches_finite_differences():
    rng = np.random.default_rng(9)
    for p in (1.5, 3.0):
        g = SpaceGeometry(3, p)
        y = rng.standard_normal(3) + np.sign(rng.standard_normal(3)) * 0.5
        analytic = duality_jacobian(y, g)
        numeric = finite_difference_jacobian(lambda v: duality_map(v, g), y)
        assert np.max(np.abs(analytic - numeric)) < 1e-6


def test_dimension_mismatch_raises():
    g = SpaceGeometry(3, 2.0)
    with pytest.raises(DimensionMismatchError):
        duality_map(np.zeros(2), g)
    with pytest.raises(DimensionMismatchError):
        lyapunov(np.zeros(3), np.zeros(4), g)
