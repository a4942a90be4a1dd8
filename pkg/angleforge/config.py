"""Tolerances, run configuration and environment handling."""

import logging
import os
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from .models import Context, Field

logger = logging.getLogger(__name__)

# Numeric tolerances
UNIT_TOL = 1e-12
LINE_EQ_TOL = 1e-10
ANGLE_TOL = 1e-9
RANK_TOL = 1e-10
DEDUP_TOL = 1e-11
MERGE_TOL = 1e-8
BISECT_TOL = 1e-13
BISECT_MAX_ITER = 200
MAX_DIM = 64

# Closure engine defaults
DEFAULT_TERMINAL_THRESHOLD = 1e-3
DEFAULT_MAX_STEPS = 10_000

THREADS_ENV = "ANGLEFORGE_THREADS"

SPACES = ("sphere-real", "proj-real", "proj-complex")


def thread_cap() -> int:
    """
    Worker count for oracle grid sweeps.

    Returns:
        Value of ANGLEFORGE_THREADS if it is a positive integer, else the CPU count
    """
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        logger.warning(f"Ignoring invalid {THREADS_ENV}={raw!r}")
    return max(1, os.cpu_count() or 1)


@dataclass
class RunConfig:
    """Parameters of one CLI invocation."""

    command: str = ""
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    space: str = "sphere-real"
    dim: int = 3
    grid: int = 8
    resolution: int = 200
    seed: int = 0
    tol: float = ANGLE_TOL
    out: Optional[str] = None
    fmt: str = "json"
    threads: int = 1

    @property
    def field(self) -> "Field":
        """Scalar field implied by the space."""
        from .models import Field

        return Field.COMPLEX if self.space == "proj-complex" else Field.REAL

    @property
    def context(self) -> "Context":
        """Closure context implied by space and dimension."""
        from .models import Context

        if self.space == "sphere-real":
            return Context.SPHERE_REAL
        if self.space == "proj-real":
            return Context.PROJ_REAL
        if self.dim == 2:
            return Context.PROJ_COMPLEX_DIM2
        return Context.PROJ_COMPLEX

    @classmethod
    def from_args(cls, args: Any) -> "RunConfig":
        """Build a config from an argparse namespace, ignoring missing attributes."""
        return cls(
            command=getattr(args, "command", "") or "",
            alpha=getattr(args, "alpha", None),
            beta=getattr(args, "beta", None),
            gamma=getattr(args, "gamma", None),
            space=getattr(args, "space", "sphere-real") or "sphere-real",
            dim=getattr(args, "dim", 3) or 3,
            grid=getattr(args, "grid", 8) or 8,
            resolution=getattr(args, "resolution", 200) or 200,
            seed=getattr(args, "seed", 0) or 0,
            tol=getattr(args, "tol", ANGLE_TOL) or ANGLE_TOL,
            out=getattr(args, "out", None),
            fmt=getattr(args, "format", "json") or "json",
            threads=thread_cap(),
        )
