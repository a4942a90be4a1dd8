"""Tests for closed-form level-set cardinalities, parametrizations and diameters."""

import math

import numpy as np
import pytest

from angleforge.angle_sets import (
    beta_pair,
    dim3_pi3_cross_angles,
    dim3_real_intersection,
    gamma0,
    ortho_circle_triple_count,
    pi3_cross_slope,
    proj_card,
    proj_cap_pair_set,
    proj_diam,
    proj_extremal_pair,
    sphere_cap_diam,
    sphere_cap_pair_set,
    sphere_card,
    tilde_point,
)
from angleforge.errors import DomainError
from angleforge.linalg_core import line_angle
from angleforge.models import Cardinality, Field, Line, UnitVector
from angleforge.oracle_mc import max_pairwise_angle


def _real_line(gamma):
    return Line.from_vector(np.array([math.cos(gamma), math.sin(gamma), 0.0]), Field.REAL)


@pytest.mark.parametrize(
    "alpha, beta, gamma, dim, expected",
    [
        (0.3, 0.5, 0.1, 3, Cardinality.empty()),
        (0.3, 0.5, 0.2, 3, Cardinality.one()),
        (0.3, 0.5, 0.5, 3, Cardinality.finite(2)),
        (0.3, 0.5, 0.5, 4, Cardinality.infinite()),
        (0.3, 0.5, 0.8, 3, Cardinality.one()),
        (0.3, 0.5, 0.9, 3, Cardinality.empty()),
        (0.4, 0.4, 0.8, 3, Cardinality.one()),
        (2.0, 2.0, 2.0, 3, Cardinality.finite(2)),
        (2.0, 2.0, 2 * math.pi - 4.0, 3, Cardinality.one()),
        (1.0, math.pi - 1.0, math.pi, 3, Cardinality.infinite()),
        (1.0, math.pi - 1.0, 0.5, 3, Cardinality.empty()),
        (math.pi / 2, math.pi / 2, math.pi, 3, Cardinality.infinite()),
    ],
)
def test_sphere_card_table(alpha, beta, gamma, dim, expected):
    """Branches of the sphere intersection table."""
    assert sphere_card(alpha, beta, gamma, dim) == expected


def test_sphere_card_domain():
    """Angles outside the table's range and dim < 3 are rejected."""
    with pytest.raises(DomainError):
        sphere_card(0.5, 0.3, 0.2, 3)
    with pytest.raises(DomainError):
        sphere_card(0.3, 0.5, 0.4, 2)


@pytest.mark.parametrize(
    "alpha, beta, gamma, dim, fld, expected",
    [
        (0.3, 0.4, 0.05, 3, Field.REAL, Cardinality.empty()),
        (0.3, 0.4, 0.1, 3, Field.REAL, Cardinality.one()),
        (0.3, 0.5, 0.5, 3, Field.REAL, Cardinality.finite(2)),
        (1.0, 1.0, 1.0, 3, Field.REAL, Cardinality.finite(2)),
        (1.0, 1.0, math.pi - 2.0, 3, Field.REAL, Cardinality.finite(3)),
        (1.0, 1.0, 1.3, 3, Field.REAL, Cardinality.finite(4)),
        (1.0, 1.0, 1.3, 4, Field.REAL, Cardinality.infinite()),
        (1.0, 1.0, 1.3, 3, Field.COMPLEX, Cardinality.infinite()),
        (math.pi / 4, math.pi / 4, math.pi / 2, 3, Field.REAL, Cardinality.finite(2)),
        (math.pi / 4, math.pi / 4, math.pi / 2, 3, Field.COMPLEX, Cardinality.infinite()),
        (math.pi / 2, math.pi / 2, 0.7, 3, Field.REAL, Cardinality.one()),
    ],
)
def test_proj_card_table(alpha, beta, gamma, dim, fld, expected):
    """Branches of the projective intersection table, including the real dim-3 refinement."""
    assert proj_card(alpha, beta, gamma, dim, fld) == expected


def test_dim3_intersection_matches_table():
    """Explicit dim-3 intersections have the tabulated size and the right angles."""
    x = _real_line(0.0)
    for gamma, count in ((1.0, 2), (math.pi - 2.0, 3), (1.3, 4)):
        y = _real_line(gamma)
        lines = dim3_real_intersection(x, y, 1.0)
        assert len(lines) == count
        assert proj_card(1.0, 1.0, gamma, 3, Field.REAL).count == count
        for line in lines:
            assert line_angle(line, x) == pytest.approx(1.0, abs=1e-9)
            assert line_angle(line, y) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("alpha", [1.1, 1.2, 1.3, 1.5])
def test_three_element_intersection_at_pi_minus_two_alpha(alpha):
    """For pi/3 < alpha < pi/2 the intersection has three lines exactly at pi - 2 alpha."""
    x = _real_line(0.0)
    target = math.pi - 2 * alpha
    assert len(dim3_real_intersection(x, _real_line(target), alpha)) == 3
    assert len(dim3_real_intersection(x, _real_line(target + 0.02), alpha)) == 4
    assert len(dim3_real_intersection(x, _real_line(target - 0.02), alpha)) == 2


def test_sphere_cap_samples_lie_on_both_caps():
    """Sampled points sit at angle alpha from both centres, in dim 3 and 5."""
    for dim in (3, 5):
        x = UnitVector.normalized(np.eye(dim)[0], Field.REAL)
        y_arr = np.zeros(dim)
        y_arr[0], y_arr[1] = math.cos(0.6), math.sin(0.6)
        desc = sphere_cap_pair_set(x, UnitVector.normalized(y_arr, Field.REAL), 0.5)
        assert desc.membership_residual(desc.sample(64)) < 1e-12


def test_sphere_cap_diameter_formula():
    """h(gamma) equals the largest angle on the intersection circle."""
    x = UnitVector.normalized(np.array([0.0, 0.0, 1.0]), Field.REAL)
    for alpha, gamma in ((0.5, 0.6), (1.0, 1.5), (0.2, 0.05)):
        y = UnitVector.normalized(np.array([math.sin(gamma), 0.0, math.cos(gamma)]), Field.REAL)
        points = sphere_cap_pair_set(x, y, alpha).sample(400)
        assert max_pairwise_angle(points) == pytest.approx(sphere_cap_diam(alpha, gamma), abs=1e-9)


@pytest.mark.parametrize("alpha", np.linspace(0.01, 1.56, 12))
def test_gamma0_bracket_and_fixed_point(alpha):
    """alpha < gamma0 < 2 alpha and h(gamma0(alpha)) = alpha."""
    g = gamma0(alpha)
    assert alpha < g < 2 * alpha
    assert sphere_cap_diam(alpha, g) == pytest.approx(alpha, abs=1e-11)


def test_gamma0_endpoints():
    """gamma0(0) = 0 and gamma0(pi/2) = pi."""
    assert gamma0(0.0) == 0.0
    assert gamma0(math.pi / 2) == pytest.approx(math.pi, abs=1e-12)


def test_proj_extremal_pair_realizes_diameter():
    """The extremal lines lie in both caps and are proj_diam apart."""
    v = Line.from_vector(np.array([1.0, 0.0, 0.0]), Field.COMPLEX)
    for alpha, gamma in ((0.5, 0.6), (0.3, 0.2), (0.7, 1.2)):
        w = Line.from_vector(np.array([math.cos(gamma), math.sin(gamma), 0.0]), Field.COMPLEX)
        first, second = proj_extremal_pair(v, w, alpha)
        for line in (first, second):
            assert line_angle(line, v) == pytest.approx(alpha, abs=1e-10)
            assert line_angle(line, w) == pytest.approx(alpha, abs=1e-10)
        assert line_angle(first, second) == pytest.approx(proj_diam(alpha, gamma), abs=1e-9)


def test_proj_cap_samples_and_domain():
    """Sampled lines lie in both caps; alpha >= pi/4 is outside the diameter formula."""
    v = Line.from_vector(np.array([1.0, 0.0, 0.0]), Field.COMPLEX)
    w = Line.from_vector(np.array([math.cos(0.6), math.sin(0.6), 0.0]), Field.COMPLEX)
    desc = proj_cap_pair_set(v, w, 0.5)
    assert desc.membership_residual(desc.sample(200)) < 1e-9
    with pytest.raises(DomainError):
        proj_diam(math.pi / 4, 0.3)


def test_orthogonal_circle_at_pi_over_four():
    """Orthogonal lines at pi/4 give the circle family, each member with two pi/4 partners."""
    v = Line.from_vector(np.array([1.0, 0.0, 0.0]), Field.COMPLEX)
    w = Line.from_vector(np.array([0.0, 1.0, 0.0]), Field.COMPLEX)
    desc = proj_cap_pair_set(v, w, math.pi / 4)
    assert desc.family == "ortho-circle"
    points = desc.sample(64)
    assert desc.membership_residual(points) < 1e-12
    assert max_pairwise_angle(points, "line") == pytest.approx(math.pi / 2, abs=1e-9)
    assert ortho_circle_triple_count(1.0 + 0j) == 2
    assert ortho_circle_triple_count(np.exp(0.4j)) == 2


def test_pi3_cross_peak():
    """The cross inner product reaches 1/2 at gamma = pi/2, where its slope vanishes."""
    assert dim3_pi3_cross_angles(math.pi / 2) == pytest.approx(0.5, abs=1e-15)
    assert pi3_cross_slope(math.pi / 2) == pytest.approx(0.0, abs=1e-12)
    assert dim3_pi3_cross_angles(1.3) < 0.5


def test_tilde_point():
    """The tilde point is -x - u and lies at 2pi/3 from both."""
    x = UnitVector.normalized(np.array([1.0, 0.0, 0.0]), Field.REAL)
    u = UnitVector.normalized(np.array([-0.5, math.sqrt(3) / 2, 0.0]), Field.REAL)
    point = tilde_point(x, u)
    assert np.allclose(point.components, [-0.5, -math.sqrt(3) / 2, 0.0], atol=1e-15)
    with pytest.raises(DomainError):
        tilde_point(x, UnitVector.normalized(np.array([0.0, 1.0, 0.0]), Field.REAL))


def test_beta_pair():
    """beta1 < pi/2 < beta2 on (pi/3, pi/2), undefined outside."""
    b1, b2 = beta_pair(1.2)
    assert b1 < math.pi / 2 < b2
    assert b1 == pytest.approx(math.acos(math.cos(1.2) / (1 + math.cos(1.2))))
    with pytest.raises(DomainError):
        beta_pair(math.pi / 3)
