"""Closed-form cardinalities, parametrizations and diameters of angle level sets."""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .config import ANGLE_TOL, MERGE_TOL
from .errors import DomainError
from .linalg_core import inner, line_angle, line_angles, orthonormal_extend, sphere_angles
from .models import Angle, Cardinality, Field, Line, UnitVector

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def sphere_card(
    alpha: Angle, beta: Angle, gamma: Angle, dim: int, tol: float = ANGLE_TOL
) -> Cardinality:
    """
    Cardinality of x^(alpha) cap y^(beta) on the unit sphere of a real space.

    Args:
        alpha: Smaller level angle
        beta: Larger level angle
        gamma: Angle between x and y
        dim: Dimension of the space (at least 3)
        tol: Tolerance for branch selection

    Returns:
        Empty or One per the case table, Finite(2) for the remaining cases in dim 3
        (two circles on the 2-sphere), Infinite in higher dimensions
    """
    if not (0 < alpha <= beta + tol and beta < math.pi and 0 < gamma <= math.pi + tol):
        raise DomainError(
            f"need 0 < alpha <= beta < pi and 0 < gamma <= pi, got {alpha}, {beta}, {gamma}"
        )
    if dim < 3:
        raise DomainError(f"sphere intersections need dim >= 3, got {dim}")

    many = Cardinality.finite(2) if dim == 3 else Cardinality.infinite()

    if _close(alpha, beta, tol):
        if _close(alpha, HALF_PI, tol):
            return Cardinality.infinite() if _close(gamma, math.pi, tol) else many
        edge = 2 * alpha if alpha < HALF_PI else 2 * math.pi - 2 * alpha
        if _close(gamma, edge, tol):
            return Cardinality.one()
        return Cardinality.empty() if gamma > edge else many

    total = alpha + beta
    low = beta - alpha
    if _close(total, math.pi, tol):
        if _close(gamma, math.pi, tol):
            # y = -x and the two circles coincide
            return Cardinality.infinite()
        if _close(gamma, low, tol):
            return Cardinality.one()
        return Cardinality.empty() if gamma < low else many

    high = total if total < math.pi else 2 * math.pi - total
    if _close(gamma, low, tol) or _close(gamma, high, tol):
        return Cardinality.one()
    if gamma < low or gamma > high:
        return Cardinality.empty()
    return many


def proj_card(
    alpha: Angle, beta: Angle, gamma: Angle, dim: int, field: Field, tol: float = ANGLE_TOL
) -> Cardinality:
    """
    Cardinality of [v]^alpha cap [w]^beta in a projective space.

    Args:
        alpha: Smaller level angle
        beta: Larger level angle
        gamma: Angle between [v] and [w]
        dim: Dimension of the underlying space (at least 3)
        field: Scalar field
        tol: Tolerance for branch selection

    Returns:
        Cardinality of the intersection
    """
    if not (0 < alpha <= beta + tol and beta <= HALF_PI + tol and 0 < gamma <= HALF_PI + tol):
        raise DomainError(
            f"need 0 < alpha <= beta <= pi/2 and 0 < gamma <= pi/2, got {alpha}, {beta}, {gamma}"
        )
    if dim < 3:
        raise DomainError(f"projective intersections need dim >= 3, got {dim}")

    if _close(alpha, HALF_PI, tol) and _close(beta, HALF_PI, tol):
        return Cardinality.one() if dim == 3 else Cardinality.infinite()

    low, high = beta - alpha, alpha + beta
    if _close(gamma, low, tol):
        return Cardinality.one()
    if _close(gamma, high, tol):
        if high < HALF_PI - tol:
            return Cardinality.one()
        # gamma = pi/2 = alpha + beta: the unimodular family [cos(a) v + lambda sin(a) w]
        return Cardinality.infinite() if field is Field.COMPLEX else Cardinality.finite(2)
    if gamma < low or gamma > high:
        return Cardinality.empty()

    if field is Field.COMPLEX or dim >= 4:
        return Cardinality.infinite()
    if _close(beta, HALF_PI, tol):
        return Cardinality.finite(2)
    threshold = math.pi - alpha - beta
    if _close(gamma, threshold, tol):
        return Cardinality.finite(3)
    return Cardinality.finite(4 if gamma > threshold else 2)


@dataclass
class CapIntersectionDescriptor:
    """Parametrized intersection of two level sets of equal angle."""

    metric: str
    field: Field
    alpha: Angle
    gamma: Angle
    x: np.ndarray
    y: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    complement: np.ndarray
    family: str = "cap"
    seed: int = 0

    @property
    def dim(self) -> int:
        return int(self.x.shape[0])

    def first_coefficient(self, eps: float = 0.0) -> float:
        """Coefficient of e1 in the parametrization."""
        half_cos, half_sin = math.cos(self.gamma / 2), math.sin(self.gamma / 2)
        if self.metric == "sphere":
            return min(1.0, math.cos(self.alpha) / half_cos)
        num = math.cos(self.alpha) ** 2 - (half_sin * math.cos(eps)) ** 2
        den = half_cos**2 - (half_sin * math.cos(eps)) ** 2
        return math.sqrt(max(0.0, num / den))

    def _directions(self, n: int) -> np.ndarray:
        k = self.complement.shape[0]
        basis = self.complement
        if self.field is Field.REAL:
            if k == 1:
                return np.array([basis[0], -basis[0]])
            if k == 2:
                theta = 2 * np.pi * np.arange(n) / n
                return np.outer(np.cos(theta), basis[0]) + np.outer(np.sin(theta), basis[1])
        elif k == 1:
            phases = np.exp(2j * np.pi * np.arange(n) / n)
            return np.outer(phases, basis[0])
        rng = np.random.default_rng(self.seed)
        coeffs = rng.standard_normal((n, k))
        if self.field is Field.COMPLEX:
            coeffs = coeffs + 1j * rng.standard_normal((n, k))
        coeffs[0] = 0
        coeffs[0, 0] = 1
        coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
        directions = coeffs @ basis
        return np.vstack([directions, -basis[0][None, :]])

    def sample(self, n: int) -> np.ndarray:
        """Materialize points (rows) of the set; at most about n of them."""
        if n < 2:
            raise DomainError("need at least two samples")
        if self.family == "ortho-circle":
            lam = np.exp(2j * np.pi * np.arange(n) / n)
            return (self.x[None, :] + lam[:, None] * self.y[None, :]) / math.sqrt(2)
        if self.metric == "sphere":
            a = self.first_coefficient()
            b = math.sqrt(max(0.0, 1.0 - a * a))
            return a * self.e1[None, :] + b * self._directions(n)
        phases = 4 if self.complement.shape[0] == 1 else 8
        n_eps = max(2, n // (2 * phases))
        directions = self._directions(phases)
        points = []
        for eps in np.linspace(0.0, HALF_PI, n_eps):
            a = self.first_coefficient(eps)
            b = math.sqrt(max(0.0, 1.0 - a * a))
            for lam in (1j, -1j):
                head = a * self.e1 + lam * b * math.cos(eps) * self.e2
                points.append(head[None, :] + b * math.sin(eps) * directions)
        return np.vstack(points)

    def membership_residual(self, points: np.ndarray) -> float:
        """Largest deviation of the points' angles to x and y from alpha."""
        n = points.shape[0]
        if self.metric == "sphere":
            to_x = sphere_angles(points, np.broadcast_to(self.x, (n, self.dim)))
            to_y = sphere_angles(points, np.broadcast_to(self.y, (n, self.dim)))
        else:
            to_x = line_angles(points, np.broadcast_to(self.x, (n, self.dim)))
            to_y = line_angles(points, np.broadcast_to(self.y, (n, self.dim)))
        return float(max(np.max(np.abs(to_x - self.alpha)), np.max(np.abs(to_y - self.alpha))))


def _bisector_frame(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    e1 = x + y
    e2 = x - y
    return e1 / np.linalg.norm(e1), e2 / np.linalg.norm(e2)


def sphere_cap_pair_set(x: UnitVector, y: UnitVector, alpha: Angle) -> CapIntersectionDescriptor:
    """
    Describe x^(alpha) cap y^(alpha) for 0 < angle(x, y) < 2 alpha, alpha < pi/2.

    Points are cos(alpha)/cos(gamma/2) e1 + sqrt(1 - cos^2(alpha)/cos^2(gamma/2)) e3 with e1 the
    bisector of x, y and e3 any unit vector orthogonal to x and y.
    """
    if x.field is not Field.REAL or y.field is not Field.REAL:
        raise DomainError("sphere cap intersections need a real space")
    if x.dim < 3:
        raise DomainError("sphere cap intersections need dim >= 3")
    if not 0 < alpha < HALF_PI:
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    gamma = float(np.arccos(np.clip(inner(x, y), -1.0, 1.0)))
    if not 0 < gamma < 2 * alpha:
        raise DomainError(f"angle between centres {gamma} outside (0, 2*alpha)")
    e1, e2 = _bisector_frame(x.components, y.components)
    frame = orthonormal_extend([e1, e2], x.dim, Field.REAL)
    return CapIntersectionDescriptor(
        metric="sphere",
        field=Field.REAL,
        alpha=alpha,
        gamma=gamma,
        x=x.components,
        y=y.components,
        e1=frame[0],
        e2=frame[1],
        complement=frame[2:],
    )


def _check_proj_diam_domain(alpha: Angle, gamma: Angle) -> None:
    if not 0 < alpha < math.pi / 4:
        raise DomainError(f"the diameter formula needs alpha in (0, pi/4), got {alpha}")
    if not 0 < gamma < 2 * alpha:
        raise DomainError(f"gamma must lie in (0, 2*alpha), got {gamma}")


def _aligned_pair(v: Line, w: Line) -> Tuple[np.ndarray, np.ndarray]:
    """Representatives of v and w with <v, w> real and non-negative."""
    a, b = v.vector, w.vector
    overlap = inner(a, b)
    if abs(overlap) > 0:
        b = b * (overlap / abs(overlap))
    return a, b


def proj_cap_pair_set(v: Line, w: Line, alpha: Angle) -> CapIntersectionDescriptor:
    """
    Describe [v]^alpha cap [w]^alpha in a complex space of dim >= 3.

    Covers alpha in (0, pi/4) with 0 < angle(v, w) < 2 alpha, and the circle
    {[sqrt(1/2) v + lambda sqrt(1/2) w]} for alpha = pi/4 and orthogonal v, w.
    """
    if v.field is not Field.COMPLEX:
        raise DomainError("the line-cap parametrization is for complex spaces")
    if v.dim < 3:
        raise DomainError("need dim >= 3")
    gamma = line_angle(v, w)
    a, b = _aligned_pair(v, w)
    if _close(alpha, math.pi / 4, ANGLE_TOL) and _close(gamma, HALF_PI, ANGLE_TOL):
        return CapIntersectionDescriptor(
            metric="line",
            field=Field.COMPLEX,
            alpha=alpha,
            gamma=gamma,
            x=a,
            y=b,
            e1=a,
            e2=b,
            complement=orthonormal_extend([a, b], v.dim, Field.COMPLEX)[2:],
            family="ortho-circle",
        )
    _check_proj_diam_domain(alpha, gamma)
    e1, e2 = _bisector_frame(a, b)
    frame = orthonormal_extend([e1, e2], v.dim, Field.COMPLEX)
    return CapIntersectionDescriptor(
        metric="line",
        field=Field.COMPLEX,
        alpha=alpha,
        gamma=gamma,
        x=a,
        y=b,
        e1=frame[0],
        e2=frame[1],
        complement=frame[2:],
    )


def sphere_cap_diam(alpha: Angle, gamma: Angle) -> Angle:
    """
    Diameter h(gamma) of x^(alpha) cap y^(alpha), gamma = angle(x, y).

    Args:
        alpha: Level angle in (0, pi/2)
        gamma: Angle between the centres, in (0, 2 alpha)

    Returns:
        arccos(2 cos^2(alpha) / cos^2(gamma/2) - 1)
    """
    if not 0 < alpha < HALF_PI:
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    if not 0 < gamma < 2 * alpha:
        raise DomainError(f"gamma must lie in (0, 2*alpha), got {gamma}")
    half_cos = math.cos(gamma / 2)
    ratio = (math.cos(alpha) / half_cos) ** 2
    # 1 - ratio = (cos^2(g/2) - cos^2(a)) / cos^2(g/2) without cancellation
    complement = math.sin(alpha - gamma / 2) * math.sin(alpha + gamma / 2) / half_cos**2
    return 2 * math.atan2(math.sqrt(max(0.0, complement)), math.sqrt(ratio))


def gamma0(alpha: Angle) -> Angle:
    """
    The angle arccos(4 cos^2(alpha) / (cos(alpha) + 1) - 1), which lies in (alpha, 2 alpha).

    Evaluated as 2 atan2(sin(alpha/2) sqrt(1 + 2 cos(alpha)), cos(alpha)) so that it stays
    accurate at both ends of [0, pi/2].
    """
    if not 0 <= alpha <= HALF_PI:
        raise DomainError(f"alpha must lie in [0, pi/2], got {alpha}")
    c = math.cos(alpha)
    return 2 * math.atan2(math.sin(alpha / 2) * math.sqrt(1 + 2 * c), c)


def proj_diam(alpha: Angle, gamma: Angle) -> Angle:
    """
    Diameter of [v]^alpha cap [w]^alpha in a complex space, alpha < pi/4.

    Args:
        alpha: Level angle in (0, pi/4)
        gamma: Angle between [v] and [w], in (0, 2 alpha)

    Returns:
        2 arccos sqrt((cos^2 a - sin^2(g/2)) / (cos^2(g/2) - sin^2(g/2)))
    """
    _check_proj_diam_domain(alpha, gamma)
    a_sq = _extremal_weight(alpha, gamma)
    return 2 * math.atan2(math.sqrt(max(0.0, 1.0 - a_sq)), math.sqrt(a_sq))


def _extremal_weight(alpha: Angle, gamma: Angle) -> float:
    num = math.cos(alpha) ** 2 - math.sin(gamma / 2) ** 2
    return num / math.cos(gamma)


def proj_extremal_pair(v: Line, w: Line, alpha: Angle) -> Tuple[Line, Line]:
    """The two lines of [v]^alpha cap [w]^alpha realizing its diameter."""
    desc = proj_cap_pair_set(v, w, alpha)
    if desc.family != "cap":
        raise DomainError("the extremal pair formula needs alpha < pi/4")
    a_sq = _extremal_weight(alpha, desc.gamma)
    a, b = math.sqrt(a_sq), math.sqrt(max(0.0, 1.0 - a_sq))
    first = Line.from_vector(a * desc.e1 + 1j * b * desc.e2, Field.COMPLEX)
    second = Line.from_vector(a * desc.e1 - 1j * b * desc.e2, Field.COMPLEX)
    return first, second


def dim3_real_intersection(x: Line, y: Line, alpha: Angle) -> List[Line]:
    """
    All lines at angle alpha from both [x] and [y] in a real space of dim 3.

    With e1, e2 the bisectors and e3 the normal, the candidates are
    [cos(a)/sin(g/2) e2 +- sqrt(1 - cos^2(a)/sin^2(g/2)) e3] and
    [cos(a)/cos(g/2) e1 +- sqrt(1 - cos^2(a)/cos^2(g/2)) e3]; coincident ones are merged.
    """
    if x.field is not Field.REAL or x.dim != 3 or y.field is not Field.REAL or y.dim != 3:
        raise DomainError("need two lines of a real space of dim 3")
    if not 0 < alpha < HALF_PI:
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    a, b = _aligned_pair(x, y)
    gamma = line_angle(x, y)
    if not 0 < gamma < 2 * alpha:
        raise DomainError(f"angle between the lines {gamma} outside (0, 2*alpha)")
    e1, e2 = _bisector_frame(a, b)
    e3 = np.cross(e1, e2)
    e3 = e3 / np.linalg.norm(e3)

    candidates: List[np.ndarray] = []
    for axis, scale in ((e2, math.sin(gamma / 2)), (e1, math.cos(gamma / 2))):
        ratio = math.cos(alpha) / scale
        if ratio > 1 + ANGLE_TOL:
            continue
        if ratio >= 1 - ANGLE_TOL:
            # tangent; the pair separation grows like sqrt(1 - ratio)
            candidates.append(axis)
            continue
        rest = math.sqrt(1.0 - ratio * ratio)
        candidates.extend([ratio * axis + rest * e3, ratio * axis - rest * e3])

    found: List[Line] = []
    for vec in candidates:
        line = Line.from_vector(vec, Field.REAL)
        if all(line_angle(line, other) > MERGE_TOL for other in found):
            found.append(line)
    logger.debug(f"dim-3 intersection at alpha={alpha:.6f}, gamma={gamma:.6f}: {len(found)} lines")
    return found


def _pi3_cross_value(gamma: Angle) -> float:
    first = 1 - 0.25 / math.sin(gamma / 2) ** 2
    second = 1 - 0.25 / math.cos(gamma / 2) ** 2
    return math.sqrt(max(0.0, first)) * math.sqrt(max(0.0, second))


def dim3_pi3_cross_angles(gamma: Angle) -> float:
    """
    Inner product between the cross members of the two three-element families at alpha = pi/3.

    Equals 1/2 (cross angles pi/3) only at gamma = pi/2.
    """
    if not math.pi / 3 < gamma <= HALF_PI + ANGLE_TOL:
        raise DomainError(f"gamma must lie in (pi/3, pi/2], got {gamma}")
    return _pi3_cross_value(gamma)


def pi3_cross_slope(gamma: Angle) -> float:
    """
    Derivative of the squared cross product with respect to u = sin^2(gamma/2).

    Positive below pi/2 and negative above on (pi/3, 2pi/3), so its root locates the maximum.
    """
    if not math.pi / 3 < gamma < 2 * math.pi / 3:
        raise DomainError(f"gamma must lie in (pi/3, 2pi/3), got {gamma}")
    u = math.sin(gamma / 2) ** 2
    return (1 / (4 * u * u)) * (1 - 1 / (4 * (1 - u))) - (1 - 1 / (4 * u)) / (4 * (1 - u) ** 2)


def tilde_point(x: UnitVector, u: UnitVector, tol: float = 1e-8) -> UnitVector:
    """
    The unique point of x^(2pi/3) cap u^(2pi/3) in the plane of x and u.

    Args:
        x: Centre
        u: Point at angle 2pi/3 from x
        tol: Accepted deviation from 2pi/3

    Returns:
        2 <u, x> x - u, the image of u under the reflection fixing x
    """
    if x.field is not Field.REAL or u.field is not Field.REAL:
        raise DomainError("tilde points are defined on real spheres")
    angle = float(np.arccos(np.clip(inner(x, u), -1.0, 1.0)))
    if not _close(angle, 2 * math.pi / 3, tol):
        raise DomainError(f"angle(x, u) = {angle} is not 2pi/3")
    image = 2 * inner(u, x) * x.components - u.components
    return UnitVector.normalized(image, Field.REAL)


def ortho_circle_angles(lam: complex, mu: complex) -> Angle:
    """Angle between [sqrt(1/2) v + lam sqrt(1/2) w] and the mu member, v orthogonal to w."""
    return float(np.arccos(np.clip(abs(1 + lam * np.conj(mu)) / 2, 0.0, 1.0)))


def ortho_circle_triple_count(lam: complex, n: int = 720) -> int:
    """Number of circle members at angle pi/4 from the lam member, by sign changes on n points."""
    mus = np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
    values = np.array([ortho_circle_angles(lam, mu) for mu in mus]) - math.pi / 4
    signs = np.sign(values)
    return int(np.count_nonzero(signs != np.roll(signs, 1)))


def beta_pair(alpha: Angle) -> Tuple[Angle, Angle]:
    """
    Sphere angles (beta1, beta2) induced on H - [v] by lines at angle alpha in (pi/3, pi/2).

    beta1 = arccos(1 - 1/(1 + cos a)), beta2 = arccos(1 - 1/(1 - cos a)).
    """
    if not math.pi / 3 < alpha < HALF_PI:
        raise DomainError(f"alpha must lie in (pi/3, pi/2), got {alpha}")
    c = math.cos(alpha)
    return math.acos(c / (1 + c)), math.acos(-c / (1 - c))
