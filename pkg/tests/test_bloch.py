"""Tests for the Bloch sphere correspondence."""

import math

import numpy as np
import pytest

from angleforge.bloch import (
    BlochPoint,
    bloch_angle,
    bloch_rows,
    from_bloch,
    orthocomplement,
    to_bloch,
)
from angleforge.errors import DomainError
from angleforge.linalg_core import line_angle, lines_from_rows, random_units
from angleforge.models import Field, Line


def test_poles():
    """[e1] and [e2] sit at the north and south poles."""
    north = to_bloch(Line.from_vector(np.array([1.0, 0.0]), Field.COMPLEX))
    south = to_bloch(Line.from_vector(np.array([0.0, 1.0]), Field.COMPLEX))
    assert np.allclose(north.coordinates, [0.0, 0.0, 1.0])
    assert np.allclose(south.coordinates, [0.0, 0.0, -1.0])


def test_orthocomplement_is_antipode():
    """The orthogonal line maps to the antipodal Bloch point."""
    rng = np.random.default_rng(2)
    for line in lines_from_rows(random_units(20, 2, Field.COMPLEX, rng), Field.COMPLEX):
        perp = orthocomplement(line)
        assert line_angle(line, perp) == pytest.approx(math.pi / 2, abs=1e-7)
        assert np.allclose(to_bloch(perp).coordinates, -to_bloch(line).coordinates, atol=1e-12)


def test_angle_doubling():
    """Great-circle angles on the Bloch sphere are twice the line angles."""
    rng = np.random.default_rng(4)
    lines = lines_from_rows(random_units(200, 2, Field.COMPLEX, rng), Field.COMPLEX)
    for first, second in zip(lines[::2], lines[1::2]):
        doubled = 2 * line_angle(first, second)
        assert bloch_angle(to_bloch(first), to_bloch(second)) == pytest.approx(doubled, abs=1e-7)


def test_round_trip():
    """from_bloch inverts to_bloch."""
    rng = np.random.default_rng(6)
    for line in lines_from_rows(random_units(100, 2, Field.COMPLEX, rng), Field.COMPLEX):
        assert from_bloch(to_bloch(line)).same_as(line, tol=1e-10)


def test_bloch_rows_matches_scalar_map():
    """The vectorized coordinates agree with to_bloch."""
    rows = random_units(50, 2, Field.COMPLEX, 8)
    lines = lines_from_rows(rows, Field.COMPLEX)
    expected = np.array([to_bloch(line).coordinates for line in lines])
    assert np.allclose(bloch_rows(rows), expected, atol=1e-12)


def test_rejects_non_qubit_lines():
    """Only lines of C^2 have Bloch points."""
    with pytest.raises(DomainError):
        to_bloch(Line.from_vector(np.array([1.0, 0.0]), Field.REAL))
    with pytest.raises(DomainError):
        to_bloch(Line.from_vector(np.array([1.0, 0.0, 0.0]), Field.COMPLEX))
    with pytest.raises(DomainError):
        BlochPoint(1.0, 1.0, 0.0)
