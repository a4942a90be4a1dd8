"""Field-generic vectors, lines, angles and frames."""

import logging
from typing import List, Sequence, Union

import numpy as np

from .config import RANK_TOL
from .errors import DimensionMismatchError, DomainError, RankDeficientError
from .models import Angle, Field, Line, UnitVector

logger = logging.getLogger(__name__)

VectorLike = Union[UnitVector, np.ndarray, Sequence[complex]]
SeedLike = Union[int, np.random.Generator, None]


def _components(x: VectorLike) -> np.ndarray:
    if isinstance(x, UnitVector):
        return x.components
    return np.asarray(x)


def _field_of(*xs: VectorLike) -> Field:
    fields = {x.field for x in xs if isinstance(x, UnitVector)}
    if len(fields) > 1:
        raise DimensionMismatchError("operands belong to different fields")
    if fields:
        return fields.pop()
    return Field.COMPLEX if any(np.iscomplexobj(_components(x)) for x in xs) else Field.REAL


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Accept an integer seed or an existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def inner(x: VectorLike, y: VectorLike) -> complex:
    """
    Inner product <x, y> = sum_k x_k conj(y_k).

    Args:
        x: First vector
        y: Second vector

    Returns:
        Scalar inner product (float for real inputs)
    """
    _field_of(x, y)
    a, b = _components(x), _components(y)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")
    value = np.sum(a * np.conj(b))
    if not np.iscomplexobj(value):
        return float(value)
    return complex(value)


def sphere_angle(x: VectorLike, y: VectorLike) -> Angle:
    """Angle arccos<x, y> between unit vectors of a real space."""
    if _field_of(x, y) is Field.COMPLEX:
        raise DomainError("sphere angles are defined for real spaces only")
    return float(np.arccos(np.clip(inner(x, y), -1.0, 1.0)))


def line_angle(first: Line, second: Line) -> Angle:
    """Angle arccos|<u, v>| between two lines; lies in [0, pi/2]."""
    if first.field is not second.field or first.dim != second.dim:
        raise DimensionMismatchError("lines live in different spaces")
    return float(np.arccos(np.clip(abs(inner(first.vector, second.vector)), 0.0, 1.0)))


def line_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise line angles between two stacks of unit representatives."""
    overlaps = np.abs(np.sum(a * np.conj(b), axis=-1))
    return np.arccos(np.clip(overlaps, 0.0, 1.0))


def sphere_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise sphere angles between two stacks of real unit vectors."""
    return np.arccos(np.clip(np.sum(a * b, axis=-1), -1.0, 1.0))


def transition_probability(first: Line, second: Line) -> float:
    """Tr PQ = |<u, v>|^2 for the rank-one projections onto the lines."""
    return float(abs(inner(first.vector, second.vector)) ** 2)


def gap_distance(first: Line, second: Line) -> float:
    """Gap metric ||P - Q|| = sqrt(1 - Tr PQ)."""
    return float(np.sqrt(max(0.0, 1.0 - transition_probability(first, second))))


def projection_matrix(line: Line) -> np.ndarray:
    """Rank-one orthogonal projection onto a line."""
    v = line.vector
    return np.outer(v, np.conj(v))


def gap_distance_spectral(first: Line, second: Line) -> float:
    """Operator norm of P - Q computed from the dense matrices."""
    diff = projection_matrix(first) - projection_matrix(second)
    return float(np.linalg.norm(diff, 2))


def orthonormal_extend(
    partial: Sequence[VectorLike], dim: int, field: Field = Field.REAL
) -> np.ndarray:
    """
    Complete linearly independent vectors to an orthonormal frame by Gram-Schmidt.

    Args:
        partial: Vectors to keep (first in the frame, after orthonormalization)
        dim: Dimension of the space
        field: Scalar field

    Returns:
        dim x dim array whose rows form the frame

    Raises:
        RankDeficientError: If partial is linearly dependent
    """
    if dim < 2:
        raise DomainError(f"dimension must be at least 2, got {dim}")
    frame: List[np.ndarray] = []
    candidates = [np.asarray(_components(v), dtype=field.dtype) for v in partial]
    for idx, vec in enumerate(candidates):
        if vec.shape != (dim,):
            raise DimensionMismatchError(f"vector {idx} has shape {vec.shape}, expected ({dim},)")
        residual = _orthogonalize(vec, frame)
        norm = np.linalg.norm(residual)
        if norm < RANK_TOL:
            raise RankDeficientError(f"vector {idx} depends on the previous ones")
        frame.append(residual / norm)

    # Fill the remainder from standard basis vectors in order of largest residual.
    basis = np.eye(dim, dtype=field.dtype)
    while len(frame) < dim:
        residuals = [_orthogonalize(e, frame) for e in basis]
        best = int(np.argmax([np.linalg.norm(r) for r in residuals]))
        frame.append(residuals[best] / np.linalg.norm(residuals[best]))
    return np.array(frame)


def _orthogonalize(vec: np.ndarray, frame: Sequence[np.ndarray]) -> np.ndarray:
    # twice for numerical orthogonality
    out = vec.copy()
    for _ in range(2):
        for f in frame:
            out = out - np.vdot(f, out) * f
    return out


def random_units(n: int, dim: int, field: Field, seed: SeedLike = None) -> np.ndarray:
    """n Gaussian-normalized unit vectors as rows."""
    if dim < 2:
        raise DomainError(f"dimension must be at least 2, got {dim}")
    rng = as_generator(seed)
    if field is Field.REAL:
        raw = rng.standard_normal((n, dim))
    else:
        raw = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def random_unit(dim: int, field: Field, seed: SeedLike = None) -> UnitVector:
    """Rotation-invariant random unit vector; deterministic for a fixed seed."""
    return UnitVector(field, random_units(1, dim, field, seed)[0])


def random_line(dim: int, field: Field, seed: SeedLike = None) -> Line:
    """Line through a random unit vector."""
    return Line(random_unit(dim, field, seed))


def lines_from_rows(rows: np.ndarray, field: Field) -> List[Line]:
    """Wrap each row of an array as a Line."""
    return [Line.from_vector(row, field) for row in rows]


def random_unimodular(n: int, field: Field, seed: SeedLike = None) -> np.ndarray:
    """Random scalars of modulus one (signs for the real field)."""
    rng = as_generator(seed)
    if field is Field.REAL:
        return rng.choice(np.array([-1.0, 1.0]), size=n)
    return np.exp(2j * np.pi * rng.random(n))


def line_angles_stable(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise line angles via atan2, accurate for nearly equal lines."""
    overlaps = np.sum(a * np.conj(b), axis=-1)
    perp = a - overlaps[..., None] * b
    return np.arctan2(np.linalg.norm(perp, axis=-1), np.abs(overlaps))
