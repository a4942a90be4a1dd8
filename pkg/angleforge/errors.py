"""Exception hierarchy for angleforge."""

from typing import Optional, Tuple


class AngleForgeError(Exception):
    """Base class for every error raised by the package."""


class DomainError(AngleForgeError, ValueError):
    """An angle, dimension or field lies outside an operation's stated range."""


class DimensionMismatchError(AngleForgeError, ValueError):
    """Two operands live in different spaces."""


class RankDeficientError(AngleForgeError, ValueError):
    """Vectors expected to be linearly independent are not."""


class AngleInconsistentSampleError(AngleForgeError, ValueError):
    """A sampled line map does not preserve pairwise angles."""

    def __init__(self, pair: Tuple[int, int], defect: float):
        self.pair = pair
        self.defect = defect
        super().__init__(
            f"sample is not angle-consistent: pair {pair} violates by {defect:.3e} rad"
        )


class UndecidableError(AngleForgeError):
    """The linear/conjugate-linear test has nothing to decide on."""


class NoSignChangeError(AngleForgeError, ValueError):
    """A bisection bracket does not straddle a root."""


class OracleResolutionError(AngleForgeError):
    """Solution clusters cannot be separated at the requested grid resolution."""


class SampleFormatError(AngleForgeError, ValueError):
    """A line-map sample file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
