"""Tests for the scalar angle functions, recursions and constants."""

import math

import pytest

from angleforge.angle_calculus import (
    Ordering,
    alpha_check_equation,
    beta,
    case2_recursion,
    case4_gamma,
    case4_signed_cos,
    case5_explicit,
    case5_recursion,
    ceq_chain_report,
    dim3_three_element_angle,
    ordering_classify,
    ordering_sphere_angle,
    proj_gamma0,
    restricted_sphere_angle,
    scan_orderings,
    solve_alpha_check,
    special_constants,
    sphere_to_line_angle,
    verify_beta_monotonicity,
)
from angleforge.angle_sets import proj_diam
from angleforge.errors import DomainError

SQRT5 = math.acos(1 / math.sqrt(5))
SQRT17 = math.acos((1 + math.sqrt(17)) / 8)


def _wrap(alpha):
    return 2 * math.pi - beta(alpha) - alpha


def test_alpha_check_bracket():
    """The root of 2pi - beta(a) - a = 2a lies in (1.28, 1.29)."""
    root = solve_alpha_check()
    assert 1.28 < root < 1.29
    assert abs(alpha_check_equation(root)) < 1e-12
    assert _wrap(1.28) > 2.59
    assert _wrap(1.29) < 2.57


def test_special_constants():
    """Bisection roots match their closed forms."""
    constants = special_constants()
    assert constants.alpha_sqrt5 == pytest.approx(SQRT5, abs=1e-10)
    assert constants.alpha_sqrt5_second == pytest.approx(SQRT5, abs=1e-10)
    assert constants.alpha_sqrt17 == pytest.approx(SQRT17, abs=1e-10)
    for value in (constants.alpha_sqrt5, constants.alpha_sqrt17):
        assert math.pi / 4 < value < math.pi / 2
    assert set(constants.to_dict()) == {
        "alpha_sqrt5",
        "alpha_sqrt5_second",
        "alpha_sqrt17",
        "alpha_check",
    }


def test_case2_recursion():
    """Starts at pi/4, increases strictly and converges to pi/2."""
    terms = case2_recursion(60)
    assert terms[0] == pytest.approx(math.pi / 4)
    assert all(b > a for a, b in zip(terms[:50], terms[1:50]))
    assert all(t <= math.pi / 2 for t in terms)
    assert terms[39] > math.pi / 2 - 1e-6
    assert abs(terms[-1] - math.pi / 2) < 1e-9
    for prev, cur in zip(terms[:10], terms[1:11]):
        assert beta(cur) - cur == pytest.approx(prev, abs=1e-12)


def test_case5_recursion():
    """Alternates around 2pi/3 and matches the explicit formula."""
    terms = case5_recursion(60)
    assert terms[0] == pytest.approx(5 * math.pi / 8)
    assert terms[1] == pytest.approx(11 * math.pi / 16)
    for n, term in enumerate(terms[:20], start=1):
        if n % 2:
            assert 5 * math.pi / 8 - 1e-15 <= term < 2 * math.pi / 3
        else:
            assert 2 * math.pi / 3 < term <= 11 * math.pi / 16 + 1e-15
    assert abs(terms[39] - 2 * math.pi / 3) < 1e-11
    for n in range(1, 51):
        assert case5_explicit(n) == pytest.approx(terms[n - 1], abs=1e-12)


def test_recursions_reject_empty_requests():
    """Sequences need at least one term."""
    with pytest.raises(DomainError):
        case2_recursion(0)
    with pytest.raises(DomainError):
        case5_recursion(0)


@pytest.mark.parametrize("alpha", [0.05, 0.2, math.pi / 6, 0.9, 1.0])
def test_case4_gamma_bracket(alpha):
    """case4_gamma lies in (alpha, 2 alpha) and never exceeds pi/2."""
    g = case4_gamma(alpha)
    assert alpha < g < 2 * alpha
    assert g <= math.pi / 2


def test_case4_gamma_root():
    """The signed cosine vanishes exactly at c = (1 + sqrt 17)/8."""
    assert case4_signed_cos(SQRT17) == pytest.approx(0.0, abs=1e-14)
    assert case4_gamma(SQRT17) == pytest.approx(math.pi / 2, abs=1e-7)
    with pytest.raises(DomainError):
        case4_gamma(math.pi / 3)


def test_ceq_chain():
    """2c^2 - 1 < |4c + 4/(c+1) - 5| < c on [1/2, 1)."""
    frame = ceq_chain_report(2000)
    assert len(frame) == 2000
    assert frame["holds"].all()


def test_beta_monotonicity():
    """beta(a) - a increases, stays below a, and beta' > 1."""
    report = verify_beta_monotonicity(300)
    assert report.ok
    assert report.min_derivative > 1
    assert report.to_dict()["ok"] is True
    with pytest.raises(DomainError):
        verify_beta_monotonicity(5)


@pytest.mark.parametrize(
    "alpha, expected",
    [
        (math.pi / 3 + 0.01, Ordering.O2),
        (1.2, Ordering.O6),
        (SQRT5, Ordering.O1),
    ],
)
def test_ordering_classify(alpha, expected):
    """The order of 2b1, 2pi - b1 - b2, b2 - b1 and 2pi - 2b2."""
    assert ordering_classify(alpha, 4) is expected


def test_ordering_sphere_angle_and_domain():
    """O6 singles out 2pi - b1 - b2; dim < 4 is rejected."""
    assert 0 < ordering_sphere_angle(1.2, 4) < math.pi
    with pytest.raises(DomainError):
        ordering_classify(1.2, 3)


def test_scan_orderings():
    """Base inequalities hold everywhere and some orderings never occur."""
    frame = scan_orderings(500, 4)
    assert frame["base_inequalities"].all()
    seen = set(frame["ordering"])
    assert {"O2", "O6"} <= seen
    assert {o.value for o in Ordering} - seen


def test_restricted_and_line_angles_agree():
    """Lines at angle a through v meet the complement sphere at the restricted angle."""
    for alpha in (0.2, 0.6, 1.0):
        overlap = math.cos(restricted_sphere_angle(alpha))
        assert sphere_to_line_angle(alpha, overlap) == pytest.approx(alpha, abs=1e-12)
    assert restricted_sphere_angle(math.pi / 3) == pytest.approx(math.acos(1 / 3))


def test_proj_gamma0_fixed_point():
    """proj_diam(a, proj_gamma0(a)) = a with the root in (a, 2a)."""
    for alpha in (0.1, 0.4, 0.7):
        g = proj_gamma0(alpha)
        assert alpha < g < 2 * alpha
        assert proj_diam(alpha, g) == pytest.approx(alpha, abs=1e-10)


def test_dim3_three_element_angle():
    """pi - 2a on (pi/3, pi/2)."""
    assert dim3_three_element_angle(1.2) == pytest.approx(math.pi - 2.4)
    with pytest.raises(DomainError):
        dim3_three_element_angle(1.0)
