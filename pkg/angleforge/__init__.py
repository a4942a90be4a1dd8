"""angleforge - numerical toolkit for rigidity of angle-preserving maps."""

from .closure_engine import RigidityCertificate, closure, replay
from .models import Context, Field, IsometryKind, Line, LineMapSample, UnitVector, Verdict
from .symmetry_fit import fit_isometry, is_angle_preserver

__version__ = "0.1.0"
__description__ = "Closure certificates, lemma verification and Wigner symmetry fitting"

__all__ = [
    "Context",
    "Field",
    "IsometryKind",
    "Line",
    "LineMapSample",
    "RigidityCertificate",
    "UnitVector",
    "Verdict",
    "closure",
    "fit_isometry",
    "is_angle_preserver",
    "replay",
]
