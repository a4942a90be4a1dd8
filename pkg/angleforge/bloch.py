"""Bloch sphere correspondence for lines of a two-dimensional complex space."""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .config import UNIT_TOL
from .errors import DomainError
from .models import Field, Line

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlochPoint:
    """A point of the unit sphere of R^3."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.0) > UNIT_TOL:
            raise DomainError(f"Bloch point is not on the unit sphere (norm {norm!r})")

    @classmethod
    def from_array(cls, coords: np.ndarray) -> "BlochPoint":
        """Build from three coordinates, rescaling away roundoff."""
        arr = np.asarray(coords, dtype=float)
        if arr.shape != (3,):
            raise DomainError(f"a Bloch point has three coordinates, got shape {arr.shape}")
        arr = arr / np.linalg.norm(arr)
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    @property
    def coordinates(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def _check_qubit(line: Line) -> None:
    if line.field is not Field.COMPLEX or line.dim != 2:
        raise DomainError("the Bloch correspondence needs a line of a complex space of dim 2")


def bloch_angles(line: Line) -> Tuple[float, float]:
    """
    (theta, nu) with [(cos theta, e^(i nu) sin theta)] = line.

    theta in [0, pi/2] comes from the magnitudes only; nu in [0, 2pi) is set to 0 at the poles.
    """
    _check_qubit(line)
    a, b = line.vector
    theta = math.atan2(abs(b), abs(a))
    if abs(a) <= UNIT_TOL or abs(b) <= UNIT_TOL:
        return theta, 0.0
    nu = (np.angle(b) - np.angle(a)) % (2 * math.pi)
    return theta, float(nu)


def to_bloch(line: Line) -> BlochPoint:
    """rho([(cos t, e^(i nu) sin t)]) = (sin 2t cos nu, sin 2t sin nu, cos 2t)."""
    theta, nu = bloch_angles(line)
    s = math.sin(2 * theta)
    coords = np.array([s * math.cos(nu), s * math.sin(nu), math.cos(2 * theta)])
    return BlochPoint.from_array(coords)


def from_bloch(point: BlochPoint) -> Line:
    """Inverse of to_bloch."""
    theta = math.atan2(math.hypot(point.x, point.y), point.z) / 2
    nu = math.atan2(point.y, point.x)
    vec = np.array([math.cos(theta), np.exp(1j * nu) * math.sin(theta)], dtype=complex)
    return Line.from_vector(vec, Field.COMPLEX)


def orthocomplement(line: Line) -> Line:
    """The unique line orthogonal to a line of C^2: [(a, b)] -> [(-conj b, conj a)]."""
    _check_qubit(line)
    a, b = line.vector
    return Line.from_vector(np.array([-np.conj(b), np.conj(a)]), Field.COMPLEX)


def bloch_angle(first: BlochPoint, second: BlochPoint) -> float:
    """Great-circle angle between two Bloch points."""
    cos = float(np.dot(first.coordinates, second.coordinates))
    return math.acos(max(-1.0, min(1.0, cos)))


def bloch_rows(vectors: np.ndarray) -> np.ndarray:
    """Vectorized Bloch coordinates for rows of unit vectors of C^2."""
    a, b = vectors[:, 0], vectors[:, 1]
    cross = 2 * np.conj(a) * b
    return np.stack([cross.real, cross.imag, np.abs(a) ** 2 - np.abs(b) ** 2], axis=1)
