"""Utility functions for angle parsing and formatting."""

import math
import re
from fractions import Fraction
from typing import Optional

_PI_PATTERN = re.compile(
    r"^(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_angle(text: str) -> float:
    """
    Parse an angle in radians.

    Args:
        text: Decimal ("0.785398") or a multiple of pi ("pi", "pi/4", "3pi/8", "3*pi/8", "-pi/4")

    Returns:
        Angle in radians

    Raises:
        ValueError: If the text is not a recognised angle
    """
    cleaned = text.strip().lower().replace("π", "pi")
    if not cleaned:
        raise ValueError("empty angle")
    match = _PI_PATTERN.match(cleaned)
    if match:
        num = float(match.group("num")) if match.group("num") else 1.0
        den = float(match.group("den")) if match.group("den") else 1.0
        if den == 0:
            raise ValueError(f"zero denominator in angle {text!r}")
        value = num * math.pi / den
        return -value if match.group("sign") == "-" else value
    try:
        value = float(cleaned)
    except ValueError as exc:
        raise ValueError(f"malformed angle {text!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"non-finite angle {text!r}")
    return value


def try_parse_angle(text: str) -> Optional[float]:
    """
    Parse an angle, returning None when the text is malformed.

    Args:
        text: Angle text accepted by parse_angle

    Returns:
        Parsed angle or None if invalid
    """
    try:
        return parse_angle(text)
    except (ValueError, AttributeError):
        return None


def format_angle(angle: float, max_den: int = 24, tol: float = 1e-12) -> str:
    """
    Format an angle as a pi fraction when it is one, else as a decimal.

    Args:
        angle: Angle in radians
        max_den: Largest denominator tried
        tol: Absolute tolerance for recognising a pi fraction

    Returns:
        Display string such as "3pi/8" or "1.2862"
    """
    if not math.isfinite(angle):
        return str(angle)
    frac = Fraction(angle / math.pi).limit_denominator(max_den)
    if abs(float(frac) * math.pi - angle) <= tol:
        if frac == 0:
            return "0"
        num = "" if abs(frac.numerator) == 1 else str(abs(frac.numerator))
        sign = "-" if frac < 0 else ""
        den = "" if frac.denominator == 1 else f"/{frac.denominator}"
        return f"{sign}{num}pi{den}"
    return f"{angle:.6g}"


def clamp_unit(value: float) -> float:
    """Clamp a cosine into [-1, 1] before arccos."""
    return max(-1.0, min(1.0, value))
