"""Data models and type definitions for angleforge."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Protocol, Tuple, TypedDict

import numpy as np

from .config import LINE_EQ_TOL, MAX_DIM, UNIT_TOL
from .errors import DimensionMismatchError, DomainError

Angle = float


class Field(str, Enum):
    """Scalar field of a space."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> type:
        return np.float64 if self is Field.REAL else np.complex128


class Context(str, Enum):
    """Which rigidity statement a closure run targets."""

    SPHERE_REAL = "SphereReal"
    PROJ_REAL = "ProjReal"
    PROJ_COMPLEX = "ProjComplex"
    PROJ_COMPLEX_DIM2 = "ProjComplexDim2"


class Verdict(str, Enum):
    """Terminal outcome of a closure run."""

    SMALL_ANGLES = "IsometryViaSmallAngles"
    ORTHOGONALITY = "IsometryViaOrthogonality"
    QUBIT_AMBIGUITY = "QubitAntipodalAmbiguity"
    INCONCLUSIVE = "Inconclusive"

    @property
    def is_rigid(self) -> bool:
        return self in (Verdict.SMALL_ANGLES, Verdict.ORTHOGONALITY)


class IsometryKind(str, Enum):
    """Linear or conjugate-linear implementing operator."""

    LINEAR = "Linear"
    CONJUGATE_LINEAR = "ConjugateLinear"


class CardinalityClass(str, Enum):
    EMPTY = "Empty"
    ONE = "One"
    FINITE = "Finite"
    INFINITE = "Infinite"


@dataclass(frozen=True)
class Cardinality:
    """Size of an intersection set: Empty, One, Finite(n >= 2) or Infinite."""

    kind: CardinalityClass
    count: Optional[int] = None

    @classmethod
    def empty(cls) -> "Cardinality":
        return cls(CardinalityClass.EMPTY, 0)

    @classmethod
    def one(cls) -> "Cardinality":
        return cls(CardinalityClass.ONE, 1)

    @classmethod
    def finite(cls, n: int) -> "Cardinality":
        """Finite(n), normalized so that 0 and 1 map onto Empty and One."""
        if n < 0:
            raise ValueError(f"negative cardinality {n}")
        if n == 0:
            return cls.empty()
        if n == 1:
            return cls.one()
        return cls(CardinalityClass.FINITE, n)

    @classmethod
    def infinite(cls) -> "Cardinality":
        return cls(CardinalityClass.INFINITE, None)

    @property
    def bucket(self) -> str:
        """Coarse class used by the grid oracles: Empty, One or Many."""
        if self.kind is CardinalityClass.EMPTY:
            return "Empty"
        if self.kind is CardinalityClass.ONE:
            return "One"
        return "Many"

    def __str__(self) -> str:
        if self.kind is CardinalityClass.FINITE:
            return f"Finite({self.count})"
        return self.kind.value


def _check_dim(dim: int) -> None:
    if dim < 2 or dim > MAX_DIM:
        raise DomainError(f"dimension must lie in [2, {MAX_DIM}], got {dim}")


@dataclass(eq=False)
class UnitVector:
    """A point of the unit sphere of a finite-dimensional real or complex space."""

    field: Field
    components: np.ndarray

    def __post_init__(self) -> None:
        self.components = np.asarray(self.components, dtype=self.field.dtype)
        if self.components.ndim != 1:
            raise DimensionMismatchError("components must be a flat array")
        _check_dim(self.components.shape[0])
        norm = float(np.linalg.norm(self.components))
        if abs(norm - 1.0) > UNIT_TOL:
            raise DomainError(f"vector is not unit length (norm {norm!r})")

    @classmethod
    def normalized(cls, components: np.ndarray, field: Field) -> "UnitVector":
        """Scale a nonzero vector onto the unit sphere."""
        arr = np.asarray(components, dtype=field.dtype)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0 or not np.isfinite(norm):
            raise DomainError("cannot normalize a zero or non-finite vector")
        return cls(field, arr / norm)

    @property
    def dim(self) -> int:
        return int(self.components.shape[0])


def canonical_phase(components: np.ndarray) -> np.ndarray:
    """Rescale so the first nonzero component is real and positive."""
    nonzero = np.flatnonzero(np.abs(components) > LINE_EQ_TOL)
    if nonzero.size == 0:
        raise DomainError("zero vector has no line")
    pivot = components[nonzero[0]]
    return components * (np.abs(pivot) / pivot)


@dataclass(eq=False)
class Line:
    """A one-dimensional subspace [v], stored by its canonical representative."""

    rep: UnitVector

    def __post_init__(self) -> None:
        canon = canonical_phase(self.rep.components)
        if self.rep.field is Field.REAL:
            canon = canon.real
        self.rep = UnitVector(self.rep.field, canon / np.linalg.norm(canon))

    @classmethod
    def from_vector(cls, components: np.ndarray, field: Field) -> "Line":
        """Line spanned by any nonzero vector."""
        return cls(UnitVector.normalized(components, field))

    @property
    def field(self) -> Field:
        return self.rep.field

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def vector(self) -> np.ndarray:
        return self.rep.components

    def same_as(self, other: "Line", tol: float = LINE_EQ_TOL) -> bool:
        """Representatives agree within tol."""
        if self.field is not other.field or self.dim != other.dim:
            return False
        return bool(np.max(np.abs(self.vector - other.vector)) <= tol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Line):
            return NotImplemented
        return self.same_as(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Line({self.field.value}, {np.array2string(self.vector, precision=6)})"


@dataclass
class LineMapSample:
    """Finitely many (input line, output line) pairs of a candidate symmetry."""

    field: Field
    dim: int
    pairs: List[Tuple[Line, Line]] = field(default_factory=list)

    def __post_init__(self) -> None:
        for idx, (src, dst) in enumerate(self.pairs):
            for line in (src, dst):
                if line.field is not self.field or line.dim != self.dim:
                    raise DimensionMismatchError(
                        f"pair {idx} is outside the declared space "
                        f"({self.field.value}, dim {self.dim})"
                    )
        if len(self.pairs) > 1:
            reps = self.inputs
            gaps = np.max(np.abs(reps[:, None, :] - reps[None, :, :]), axis=-1)
            later, earlier = np.nonzero(np.tril(gaps <= LINE_EQ_TOL, -1))
            if later.size:
                raise DomainError(f"pair {later[0]} repeats the input line of pair {earlier[0]}")

    @property
    def inputs(self) -> np.ndarray:
        """Input representatives as rows."""
        return np.array([src.vector for src, _ in self.pairs])

    @property
    def outputs(self) -> np.ndarray:
        """Output representatives as rows."""
        return np.array([dst.vector for _, dst in self.pairs])

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class FittedIsometry:
    """Matrix of a linear or conjugate-linear isometry, with its fit residual."""

    matrix: np.ndarray
    kind: IsometryKind = IsometryKind.LINEAR
    residual: float = 0.0

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_orthonormal(self) -> bool:
        gram = self.matrix.conj().T @ self.matrix
        return bool(np.max(np.abs(gram - np.eye(self.dim))) < 1e-9)

    def to_dict(self) -> Dict[str, object]:
        """JSON-ready form; complex entries interleave (re, im) per row."""
        if np.iscomplexobj(self.matrix):
            rows = [
                [float(x) for pair in zip(row.real, row.imag) for x in pair] for row in self.matrix
            ]
            field_name = Field.COMPLEX.value
        else:
            rows = [[float(x) for x in row] for row in self.matrix]
            field_name = Field.REAL.value
        return {
            "field": field_name,
            "dim": self.dim,
            "kind": self.kind.value,
            "residual": float(self.residual),
            "matrix": rows,
        }


class StepRecord(TypedDict):
    """Serialized form of one derivation step."""

    rule: str
    params: Dict[str, float]
    inputs: List[float]
    input_domains: List[str]
    output: float
    domain: str
    case: str
    conditions: Dict[str, bool]


class SampleableSet(Protocol):
    """Anything the diameter oracle can materialize."""

    metric: str

    def sample(self, n: int) -> np.ndarray:
        """Return points (rows) of the set."""
        ...

    def membership_residual(self, points: np.ndarray) -> float:
        """Worst deviation of points from the defining conditions."""
        ...
