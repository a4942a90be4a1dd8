"""Scalar angle functions, recursions and transcendental constants used by the closure engine."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

import numpy as np
import pandas as pd

from .angle_sets import beta_pair, gamma0, proj_diam
from .config import ANGLE_TOL, BISECT_TOL
from .errors import DomainError
from .models import Angle
from .oracle_mc import bisect

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2
ORDERING_TIE_TOL = 1e-10

ALPHA_CHECK_BRACKET = (1.2, 1.35)
SQRT5_BRACKET = (1.05, 1.4)
SQRT17_BRACKET = (0.1, math.pi / 3 - 1e-9)


def beta(alpha: Angle) -> Angle:
    """beta(a) = arccos(4 cos^2 a / (cos a + 1) - 1); the same function as gamma0."""
    return gamma0(alpha)


def _gap_beta(eps: float) -> float:
    """pi - beta(pi/2 - eps), accurate for small eps."""
    s = math.sin(eps)
    return 2 * math.atan2(2 * s, math.sqrt(2 + 2 * s - 4 * s * s))


def case2_recursion(n_max: int) -> List[Angle]:
    """
    The sequence a_1 = pi/4, beta(a_n) - a_n = a_(n-1).

    Each term is found by bisection on the gap e_n = pi/2 - a_n, which solves
    (pi - beta(pi/2 - e)) - e = e_(n-1) on [0, e_(n-1)].

    Args:
        n_max: Number of terms

    Returns:
        Terms a_1 ... a_n_max, increasing towards pi/2
    """
    if n_max < 1:
        raise DomainError(f"need at least one term, got {n_max}")
    gaps = [math.pi / 4]
    while len(gaps) < n_max:
        prev = gaps[-1]
        gaps.append(
            bisect(lambda e, p=prev: _gap_beta(e) - e - p, 0.0, prev, tol=max(prev * 1e-13, 1e-300))
        )
    return [HALF_PI - e for e in gaps]


def alpha_check_equation(alpha: Angle) -> float:
    """2 pi - beta(a) - 3 a; its root separates the two sub-cases of pi/4 < a < pi/2."""
    return 2 * math.pi - beta(alpha) - 3 * alpha


def solve_alpha_check() -> Angle:
    """Unique root of 2 pi - beta(a) - a = 2a, which lies in (1.28, 1.29)."""
    root = bisect(alpha_check_equation, *ALPHA_CHECK_BRACKET)
    logger.debug(f"alpha check root {root!r}")
    return root


def case5_recursion(n_max: int) -> List[Angle]:
    """a_1 = 5pi/8, a_n = pi - a_(n-1)/2; converges to 2pi/3 alternating around it."""
    if n_max < 1:
        raise DomainError(f"need at least one term, got {n_max}")
    terms = [5 * math.pi / 8]
    while len(terms) < n_max:
        terms.append(math.pi - terms[-1] / 2)
    return terms


def case5_explicit(n: int) -> Angle:
    """Closed form (-1)^(n-1) a_1 / 2^(n-1) + sum_(j<=n-2) (-1)^j pi / 2^j of the case-5 terms."""
    if n < 1:
        raise DomainError(f"terms are indexed from 1, got {n}")
    head = (-1) ** (n - 1) * (5 * math.pi / 8) / 2 ** (n - 1)
    tail = math.fsum((-1) ** j * math.pi / 2**j for j in range(n - 1))
    return head + tail


def case4_signed_cos(alpha: Angle) -> float:
    """4c + 4/(c+1) - 5 with c = cos a; vanishes at c = (1 + sqrt 17)/8."""
    c = math.cos(alpha)
    return 4 * c + 4 / (c + 1) - 5


def case4_gamma(alpha: Angle) -> Angle:
    """
    Angle arccos|4 cos a + 4/(cos a + 1) - 5| preserved by line maps of a real space of dim 3.

    Args:
        alpha: Line angle in (0, pi/3)

    Returns:
        Angle in (a, 2a) and at most pi/2
    """
    if not 0 < alpha < math.pi / 3:
        raise DomainError(f"alpha must lie in (0, pi/3), got {alpha}")
    return math.acos(min(1.0, abs(case4_signed_cos(alpha))))


@dataclass(frozen=True)
class SpecialConstants:
    """Roots of the transcendental equations of the real projective cases."""

    alpha_sqrt5: Angle
    alpha_sqrt5_second: Angle
    alpha_sqrt17: Angle
    alpha_check: Angle

    def to_dict(self) -> Dict[str, float]:
        return {
            "alpha_sqrt5": self.alpha_sqrt5,
            "alpha_sqrt5_second": self.alpha_sqrt5_second,
            "alpha_sqrt17": self.alpha_sqrt17,
            "alpha_check": self.alpha_check,
        }


def special_constants() -> SpecialConstants:
    """
    Solve 3 beta1 = 2pi - beta2, 3 beta2 = 2pi + beta1 and case4_gamma = pi/2 by bisection.

    The last root is a double zero of |4c + 4/(c+1) - 5|, so the signed quantity is bisected.
    """

    def first(alpha: float) -> float:
        b1, b2 = beta_pair(alpha)
        return 3 * b1 - (2 * math.pi - b2)

    def second(alpha: float) -> float:
        b1, b2 = beta_pair(alpha)
        return 3 * b2 - (2 * math.pi + b1)

    def quarter(alpha: float) -> float:
        return math.acos(max(-1.0, min(1.0, case4_signed_cos(alpha)))) - HALF_PI

    constants = SpecialConstants(
        alpha_sqrt5=bisect(first, *SQRT5_BRACKET),
        alpha_sqrt5_second=bisect(second, *SQRT5_BRACKET),
        alpha_sqrt17=bisect(quarter, *SQRT17_BRACKET),
        alpha_check=solve_alpha_check(),
    )
    logger.info(f"special constants: {constants.to_dict()}")
    return constants


class Ordering(str, Enum):
    """Order of 2b1, 2pi - b1 - b2, b2 - b1 and 2pi - 2b2."""

    O1 = "O1"  # 2b1 = 2pi - b1 - b2 or b2 - b1 = 2pi - 2b2
    O2 = "O2"  # 2b1 > 2pi - b1 - b2 > b2 - b1 > 2pi - 2b2
    O3 = "O3"  # 2pi - b1 - b2 > 2b1 > b2 - b1 > 2pi - 2b2, dim 4
    O4 = "O4"  # as O3, dim >= 5
    O5 = "O5"  # 2b1 > 2pi - b1 - b2 > 2pi - 2b2 > b2 - b1
    O6 = "O6"  # 2pi - b1 - b2 > 2b1 > 2pi - 2b2 > b2 - b1


def ordering_quantities(alpha: Angle) -> Dict[str, float]:
    """The four sphere angles built from beta_pair(alpha)."""
    b1, b2 = beta_pair(alpha)
    return {
        "double_beta1": 2 * b1,
        "wrap_sum": 2 * math.pi - b1 - b2,
        "beta_gap": b2 - b1,
        "wrap_double_beta2": 2 * math.pi - 2 * b2,
    }


def ordering_classify(alpha: Angle, dim: int = 4, tol: float = ORDERING_TIE_TOL) -> Ordering:
    """
    Classify the order of the four quantities for a line angle in (pi/3, pi/2).

    Args:
        alpha: Line angle
        dim: Space dimension (at least 4), splits O3 from O4
        tol: Tie tolerance; ties map to O1

    Returns:
        Ordering class
    """
    if dim < 4:
        raise DomainError(f"orderings are defined for dim >= 4, got {dim}")
    q = ordering_quantities(alpha)
    q1, q2, q3, q4 = (
        q["double_beta1"],
        q["wrap_sum"],
        q["beta_gap"],
        q["wrap_double_beta2"],
    )
    if abs(q1 - q2) <= tol or abs(q3 - q4) <= tol:
        return Ordering.O1
    if q1 > q2:
        return Ordering.O2 if q3 > q4 else Ordering.O5
    if q3 > q4:
        return Ordering.O3 if dim == 4 else Ordering.O4
    return Ordering.O6


def ordering_sphere_angle(alpha: Angle, dim: int = 4) -> Angle:
    """Sphere angle singled out by the ordering class: 2b1, or 2pi - b1 - b2 for O4 and O6."""
    order = ordering_classify(alpha, dim)
    q = ordering_quantities(alpha)
    if order in (Ordering.O4, Ordering.O6):
        return q["wrap_sum"]
    return q["double_beta1"]


def scan_orderings(n: int = 10_000, dim: int = 4) -> pd.DataFrame:
    """
    Classify an interior grid of (pi/3, pi/2).

    Returns:
        One row per grid angle with the four quantities, the class and the base inequalities
    """
    alphas = np.linspace(math.pi / 3, HALF_PI, n + 2)[1:-1]
    rows = []
    for alpha in alphas:
        q = ordering_quantities(float(alpha))
        b1, b2 = beta_pair(float(alpha))
        rows.append(
            {
                "alpha": float(alpha),
                **q,
                "ordering": ordering_classify(float(alpha), dim).value,
                "base_inequalities": bool(
                    q["double_beta1"] > q["beta_gap"]
                    and q["wrap_sum"] > q["beta_gap"]
                    and q["wrap_sum"] > q["wrap_double_beta2"]
                    and b1 + b2 > math.pi
                ),
            }
        )
    frame = pd.DataFrame(rows)
    counts = frame["ordering"].value_counts().to_dict()
    logger.info(f"ordering scan over {n} angles: {counts}")
    return frame


@dataclass
class MonotonicityReport:
    """Finite-difference checks of beta(a) - a on (0, pi/2)."""

    grid_n: int
    min_slope: float
    min_derivative: float
    max_excess: float
    boundary_low: float
    boundary_high: float

    @property
    def ok(self) -> bool:
        return (
            self.min_slope > 0
            and self.min_derivative > 1 - 1e-6
            and self.max_excess < 0
            and abs(self.boundary_low) < 1e-12
            and abs(self.boundary_high - math.pi) < 1e-12
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "grid_n": self.grid_n,
            "min_slope": self.min_slope,
            "min_derivative": self.min_derivative,
            "max_excess": self.max_excess,
            "boundary_low": self.boundary_low,
            "boundary_high": self.boundary_high,
            "ok": self.ok,
        }


def verify_beta_monotonicity(grid_n: int = 1000) -> MonotonicityReport:
    """
    Check that beta(a) - a increases, that d beta/d a > 1 and that beta(a) - a < a.

    Args:
        grid_n: Number of interior grid points (at least 10)
    """
    if grid_n < 10:
        raise DomainError(f"grid_n must be at least 10, got {grid_n}")
    alphas = np.linspace(0.0, HALF_PI, grid_n + 2)[1:-1]
    values = np.array([beta(float(a)) for a in alphas])
    excess = values - alphas
    h = 1e-6
    derivative = np.array([(beta(float(a) + h) - beta(float(a) - h)) / (2 * h) for a in alphas])
    report = MonotonicityReport(
        grid_n=grid_n,
        min_slope=float(np.min(np.diff(excess))),
        min_derivative=float(np.min(derivative)),
        max_excess=float(np.max(excess - alphas)),
        boundary_low=beta(0.0),
        boundary_high=beta(HALF_PI),
    )
    logger.debug(f"beta monotonicity: {report.to_dict()}")
    return report


def ceq_chain_report(n: int = 10_000) -> pd.DataFrame:
    """
    Evaluate 2c^2 - 1 < |4c + 4/(c+1) - 5| < c on a grid of c in [0.5, 1 - 1e-6].

    Returns:
        One row per grid point with both margins and a holds flag
    """
    c = np.linspace(0.5, 1 - 1e-6, n)
    middle = np.abs(4 * c + 4 / (c + 1) - 5)
    frame = pd.DataFrame(
        {
            "c": c,
            "lower_margin": middle - (2 * c * c - 1),
            "upper_margin": c - middle,
        }
    )
    frame["holds"] = (frame["lower_margin"] > 0) & (frame["upper_margin"] > 0)
    return frame


def restricted_sphere_angle(alpha: Angle) -> Angle:
    """
    Sphere angle on the unit sphere of the complement of [v] induced by lines at angle a.

    Lines [cos a v + sin a u1], [cos a v + sin a u2] at angle a from each other correspond to
    <u1, u2> = cos a / (1 + cos a) when a < pi/3 (and 1/3 at a = pi/3).
    """
    if not 0 < alpha <= math.pi / 3 + ANGLE_TOL:
        raise DomainError(f"alpha must lie in (0, pi/3], got {alpha}")
    c = math.cos(alpha)
    return math.acos(c / (1 + c))


def sphere_to_line_angle(alpha: Angle, overlap: float) -> Angle:
    """Line angle between [cos a v + sin a u1] and [cos a v + sin a u2] for <u1, u2> = overlap."""
    value = math.cos(alpha) ** 2 + overlap * math.sin(alpha) ** 2
    return math.acos(min(1.0, abs(value)))


def proj_gamma0(alpha: Angle) -> Angle:
    """
    Unique gamma in (a, 2a) at which the complex cap intersection has diameter a.

    Args:
        alpha: Line angle in (0, pi/4)
    """
    if not 0 < alpha < math.pi / 4:
        raise DomainError(f"alpha must lie in (0, pi/4), got {alpha}")
    hi = 2 * alpha * (1 - 1e-12)
    return bisect(lambda g: proj_diam(alpha, g) - alpha, alpha, hi, tol=BISECT_TOL)


def dim3_three_element_angle(alpha: Angle) -> Angle:
    """pi - 2a, where [x]^a cap [y]^a has exactly three lines (real, dim 3)."""
    if not math.pi / 3 < alpha < HALF_PI:
        raise DomainError(f"alpha must lie in (pi/3, pi/2), got {alpha}")
    return math.pi - 2 * alpha
