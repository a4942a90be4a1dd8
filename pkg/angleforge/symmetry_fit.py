"""Reconstruction of Wigner symmetries from sampled line maps."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import null_space, polar
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components, minimum_spanning_tree
from scipy.stats import ortho_group, unitary_group

from .bloch import orthocomplement
from .config import ANGLE_TOL, RANK_TOL
from .errors import (
    AngleInconsistentSampleError,
    DimensionMismatchError,
    DomainError,
    RankDeficientError,
    UndecidableError,
)
from .linalg_core import SeedLike, as_generator, line_angles, line_angles_stable
from .models import Field, FittedIsometry, IsometryKind, Line, LineMapSample

logger = logging.getLogger(__name__)

TRIPLE_LINES = 40
TRIPLE_TOL = 1e-8


def _apply_rows(matrix: np.ndarray, kind: IsometryKind, rows: np.ndarray) -> np.ndarray:
    src = np.conj(rows) if kind is IsometryKind.CONJUGATE_LINEAR else rows
    return src @ matrix.T


def apply_wigner(iso: FittedIsometry, line: Line) -> Line:
    """Image [Uv] (linear) or [U conj(v)] (conjugate-linear) of a line."""
    if line.dim != iso.dim:
        raise DimensionMismatchError(f"line of dim {line.dim} for an operator of dim {iso.dim}")
    image = _apply_rows(iso.matrix, iso.kind, line.vector[None, :])[0]
    return Line.from_vector(image, line.field)


def _residual(matrix: np.ndarray, kind: IsometryKind, sample: LineMapSample) -> float:
    images = _apply_rows(matrix, kind, sample.inputs)
    images = images / np.linalg.norm(images, axis=1, keepdims=True)
    return float(np.max(line_angles_stable(images, sample.outputs)))


def consistency_defect(sample: LineMapSample) -> Tuple[Tuple[int, int], float]:
    """Largest change of |<u_i, u_j>| between inputs and outputs, with its pair."""
    gram_in = np.abs(sample.inputs @ sample.inputs.conj().T)
    gram_out = np.abs(sample.outputs @ sample.outputs.conj().T)
    diff = np.abs(gram_in - gram_out)
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return (int(min(i, j)), int(max(i, j))), float(diff[i, j])


def _phases(inputs: np.ndarray, outputs: np.ndarray) -> np.ndarray:
    """
    Unimodular c_k with <x_k, x_p> = c_k conj(c_p) <y_k, y_p> along a maximum-overlap tree.

    Each connected component of the overlap graph is rooted at its first line with c = 1.
    """
    n = len(inputs)
    overlap_in = inputs @ inputs.conj().T
    overlap_out = outputs @ outputs.conj().T
    weights = 2.0 - np.abs(overlap_in)
    weights[np.abs(overlap_in) < RANK_TOL] = 0.0
    np.fill_diagonal(weights, 0.0)
    tree = minimum_spanning_tree(csr_matrix(weights))
    tree = tree + tree.T
    n_comp, labels = connected_components(tree, directed=False)
    phases = np.ones(n, dtype=complex)
    for comp in range(n_comp):
        root = int(np.flatnonzero(labels == comp)[0])
        order, parents = breadth_first_order(tree, root, directed=False)
        for k in order[1:]:
            p = parents[k]
            ratio = overlap_in[k, p] / (np.conj(phases[p]) * overlap_out[k, p])
            phases[k] = ratio / abs(ratio)
    logger.debug(f"phase alignment over {n} lines in {n_comp} components")
    return phases


def _fit_kind(sample: LineMapSample, kind: IsometryKind) -> FittedIsometry:
    inputs = np.conj(sample.inputs) if kind is IsometryKind.CONJUGATE_LINEAR else sample.inputs
    outputs = sample.outputs
    phases = _phases(inputs, outputs)
    if sample.field is Field.REAL:
        phases = phases.real
    targets = phases[:, None] * outputs
    transposed, *_ = np.linalg.lstsq(inputs, targets, rcond=None)
    unitary, _ = polar(transposed.T)
    if sample.field is Field.REAL:
        unitary = unitary.real
    return FittedIsometry(unitary, kind, _residual(unitary, kind, sample))


def fit_isometry(sample: LineMapSample, tol: float = ANGLE_TOL) -> FittedIsometry:
    """
    Fit the orthogonal, unitary or antiunitary operator implementing a sampled line map.

    Args:
        sample: Pairs of input and output lines
        tol: Accepted change of pairwise |<u, v>| between inputs and outputs

    Returns:
        FittedIsometry with its residual (largest line angle between fitted and sampled output)

    Raises:
        RankDeficientError: If the input lines do not span the space
        AngleInconsistentSampleError: If the sample changes some pairwise angle
    """
    if len(sample) == 0 or np.linalg.matrix_rank(sample.inputs, tol=RANK_TOL) < sample.dim:
        raise RankDeficientError(f"input lines do not span the space of dim {sample.dim}")
    pair, defect = consistency_defect(sample)
    if defect > tol:
        raise AngleInconsistentSampleError(pair, defect)

    if sample.field is Field.REAL:
        fitted = _fit_kind(sample, IsometryKind.LINEAR)
    else:
        try:
            fitted = _fit_kind(sample, classify_antilinearity(sample))
        except UndecidableError:
            # every triple product is real: either kind fits, keep the better one
            linear = _fit_kind(sample, IsometryKind.LINEAR)
            anti = _fit_kind(sample, IsometryKind.CONJUGATE_LINEAR)
            fitted = anti if anti.residual < linear.residual else linear
    logger.info(
        f"fitted {fitted.kind.value} isometry on {len(sample)} pairs, "
        f"residual {fitted.residual:.3e}"
    )
    return fitted


def classify_antilinearity(sample: LineMapSample) -> IsometryKind:
    """
    Decide linear versus conjugate-linear from the triple product <u,v><v,w><w,u>.

    The triple product is a line invariant; linear maps keep it and conjugate-linear maps
    conjugate it. The triple with the largest imaginary part among the first lines decides.

    Raises:
        UndecidableError: For real samples, or when every sampled triple product is real
    """
    if sample.field is not Field.COMPLEX:
        raise UndecidableError("linear and conjugate-linear coincide over the reals")
    head = min(len(sample), TRIPLE_LINES)
    gram_in = sample.inputs[:head] @ sample.inputs[:head].conj().T
    gram_out = sample.outputs[:head] @ sample.outputs[:head].conj().T
    triple_in = np.einsum("ij,jk,ki->ijk", gram_in, gram_in, gram_in)
    triple_out = np.einsum("ij,jk,ki->ijk", gram_out, gram_out, gram_out)
    idx = np.unravel_index(int(np.argmax(np.abs(triple_in.imag))), triple_in.shape)
    strength = float(triple_in.imag[idx])
    if abs(strength) < TRIPLE_TOL:
        raise UndecidableError("all sampled triple products are real")
    same = np.sign(triple_out.imag[idx]) == np.sign(strength)
    return IsometryKind.LINEAR if same else IsometryKind.CONJUGATE_LINEAR


def double_perp(lines: Sequence[Line]) -> List[Line]:
    """
    Basis lines of ({lines}^perp)^perp, i.e. of the span of the given lines.

    Raises:
        DomainError: If no line is given
    """
    if not lines:
        raise DomainError("double_perp needs at least one line")
    dim, fld = lines[0].dim, lines[0].field
    rows = np.array([line.vector for line in lines])
    perp = null_space(np.conj(rows), rcond=RANK_TOL)
    if perp.shape[1] == 0:
        basis = np.eye(dim, dtype=fld.dtype)
    else:
        basis = null_space(perp.conj().T, rcond=RANK_TOL)
    return [Line.from_vector(col, fld) for col in basis.T]


@dataclass
class AnglePreserverReport:
    """Pairs where exactly one side of 'angle = alpha' holds."""

    alpha: float
    tol: float
    pairs_checked: int
    violations: List[Tuple[int, int, float, float]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.violations, columns=["first", "second", "angle_in", "angle_out"]
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "alpha": self.alpha,
            "tol": self.tol,
            "pairs_checked": self.pairs_checked,
            "consistent": self.consistent,
            "violations": [list(v) for v in self.violations],
        }


def is_angle_preserver(
    sample: LineMapSample, alpha: float, tol: float = ANGLE_TOL
) -> AnglePreserverReport:
    """Check 'angle(u, v) = alpha iff angle(phi u, phi v) = alpha' on every sampled pair."""
    n = len(sample)
    rows, cols = np.triu_indices(n, 1)
    angle_in = line_angles(sample.inputs[rows], sample.inputs[cols])
    angle_out = line_angles(sample.outputs[rows], sample.outputs[cols])
    hit_in = np.abs(angle_in - alpha) <= tol
    hit_out = np.abs(angle_out - alpha) <= tol
    bad = np.flatnonzero(hit_in != hit_out)
    violations = [
        (int(rows[k]), int(cols[k]), float(angle_in[k]), float(angle_out[k])) for k in bad
    ]
    logger.debug(f"angle {alpha:.6f}: {len(violations)} violations over {len(rows)} pairs")
    return AnglePreserverReport(alpha, tol, int(len(rows)), violations)


def random_wigner(
    dim: int,
    fld: Field,
    kind: IsometryKind = IsometryKind.LINEAR,
    seed: SeedLike = None,
) -> FittedIsometry:
    """Haar-random orthogonal or unitary operator, optionally composed with conjugation."""
    if fld is Field.REAL and kind is IsometryKind.CONJUGATE_LINEAR:
        raise DomainError("conjugate-linear maps need a complex space")
    rng = as_generator(seed)
    if fld is Field.REAL:
        matrix = ortho_group.rvs(dim, random_state=rng)
    else:
        matrix = unitary_group.rvs(dim, random_state=rng)
    return FittedIsometry(np.asarray(matrix), kind, 0.0)


def wigner_sample(iso: FittedIsometry, lines: Sequence[Line]) -> LineMapSample:
    """Forward-generate a sample from a known operator."""
    if not lines:
        raise DomainError("need at least one line")
    pairs = [(line, apply_wigner(iso, line)) for line in lines]
    return LineMapSample(lines[0].field, lines[0].dim, pairs)


def qubit_complement_sample(
    iso: FittedIsometry, lines: Sequence[Line], seed: SeedLike = None
) -> LineMapSample:
    """Send each qubit line to [Uv] or, at random, to its orthocomplement [Uv]^perp."""
    rng = as_generator(seed)
    pairs = []
    for line in lines:
        image = apply_wigner(iso, line)
        if rng.random() < 0.5:
            image = orthocomplement(image)
        pairs.append((line, image))
    return LineMapSample(Field.COMPLEX, 2, pairs)


def vector_sign_pattern(
    matrix: np.ndarray, inputs: np.ndarray, outputs: np.ndarray
) -> np.ndarray:
    """Signs s_k with outputs_k = s_k R inputs_k for a vector sample fitted on lines."""
    overlaps = np.sum((inputs @ matrix.T) * outputs, axis=1).real
    return np.where(overlaps >= 0, 1, -1)


def vector_pairs_to_sample(
    inputs: np.ndarray, outputs: np.ndarray, fld: Field = Field.REAL
) -> LineMapSample:
    """Quotient a vector-level sample by sign: each vector becomes its line."""
    if inputs.shape != outputs.shape:
        raise DimensionMismatchError("inputs and outputs differ in shape")
    pairs = [
        (Line.from_vector(a, fld), Line.from_vector(b, fld)) for a, b in zip(inputs, outputs)
    ]
    return LineMapSample(fld, inputs.shape[1], pairs)


def max_held_out_error(
    fitted: FittedIsometry, truth: FittedIsometry, lines: Sequence[Line]
) -> float:
    """Largest line angle between fitted and true images of held-out lines."""
    rows = np.array([line.vector for line in lines])
    a = _apply_rows(fitted.matrix, fitted.kind, rows)
    b = _apply_rows(truth.matrix, truth.kind, rows)
    a = a / np.linalg.norm(a, axis=1, keepdims=True)
    b = b / np.linalg.norm(b, axis=1, keepdims=True)
    return float(np.max(line_angles_stable(a, b)))


def fit_report(fitted: FittedIsometry, sample: LineMapSample) -> Dict[str, object]:
    """Serializable summary of a fit."""
    out = fitted.to_dict()
    out["pairs"] = len(sample)
    out["orthonormal"] = fitted.is_orthonormal
    out["angle_residual_deg"] = math.degrees(fitted.residual)
    return out
