"""Tests for angle parsing and formatting."""

import math

import pytest

from angleforge.utils import clamp_unit, format_angle, parse_angle, try_parse_angle


@pytest.mark.parametrize(
    "text, expected",
    [
        ("pi", math.pi),
        ("pi/4", math.pi / 4),
        ("3pi/8", 3 * math.pi / 8),
        ("3*pi/8", 3 * math.pi / 8),
        ("-pi/4", -math.pi / 4),
        ("π/2", math.pi / 2),
        ("0.785398", 0.785398),
        (" 1.5 ", 1.5),
    ],
)
def test_parse_angle(text, expected):
    """Decimal and pi-fraction forms parse to radians."""
    assert parse_angle(text) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("text", ["", "abc", "pi/0", "nan", "inf", "4pi/"])
def test_parse_angle_rejects_malformed(text):
    """Malformed and non-finite angles raise ValueError."""
    with pytest.raises(ValueError):
        parse_angle(text)


def test_try_parse_angle():
    """try_parse_angle returns None instead of raising."""
    assert try_parse_angle("pi/3") == pytest.approx(math.pi / 3)
    assert try_parse_angle("three") is None


@pytest.mark.parametrize(
    "angle, text",
    [
        (math.pi / 4, "pi/4"),
        (3 * math.pi / 8, "3pi/8"),
        (-math.pi / 4, "-pi/4"),
        (math.pi, "pi"),
        (0.0, "0"),
        (1.0, "1"),
    ],
)
def test_format_angle(angle, text):
    """pi fractions print symbolically, everything else as a decimal."""
    assert format_angle(angle) == text


def test_format_parse_agree():
    """Formatted pi fractions parse back to the same angle."""
    for k in range(1, 24):
        angle = k * math.pi / 24
        assert parse_angle(format_angle(angle)) == pytest.approx(angle, abs=1e-14)


def test_clamp_unit():
    """Cosines are clamped into [-1, 1]."""
    assert clamp_unit(1.0000001) == 1.0
    assert clamp_unit(-2.0) == -1.0
    assert clamp_unit(0.25) == 0.25
