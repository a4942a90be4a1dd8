"""Grid and Monte Carlo oracles for the closed forms, plus bisection."""

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .config import BISECT_MAX_ITER, BISECT_TOL
from .errors import DomainError, NoSignChangeError, OracleResolutionError
from .linalg_core import inner, orthonormal_extend
from .models import Field, Line, SampleableSet, UnitVector, canonical_phase

logger = logging.getLogger(__name__)

CHUNK = 512
ROW_CAP = 4
CIRCLE_SAMPLES = 32
MU_PHASES = np.exp(0.5j * np.pi * np.arange(4))

Estimate = Union[str, float, Tuple[float, float]]


@dataclass(frozen=True)
class GridSpec:
    """Resolution, seed and tolerance of an oracle run."""

    resolution: int = 200
    seed: int = 0
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.resolution < 16:
            raise DomainError(f"grid resolution must be at least 16, got {self.resolution}")
        if self.tolerance <= 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")

    @property
    def merge_radius(self) -> float:
        """Distance below which polished solutions belong to one cluster."""
        return 3.0 / self.resolution

    @property
    def near_miss(self) -> float:
        """Level extrema closer to zero than this, but outside tolerance, are not called."""
        return math.sqrt(self.tolerance)

    @property
    def distinct(self) -> float:
        """Spread above which roots in one cluster are different points."""
        return 10.0 * math.sqrt(self.tolerance)


@dataclass
class OracleReport:
    """Outcome of an oracle run."""

    estimate: Estimate
    samples_used: int
    max_residual: float
    tolerance: float
    clusters: int = 0
    continuum: bool = False
    witnesses: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    def to_dict(self) -> Dict[str, object]:
        """JSON-ready summary (witnesses omitted)."""
        estimate = list(self.estimate) if isinstance(self.estimate, tuple) else self.estimate
        return {
            "estimate": estimate,
            "samples_used": int(self.samples_used),
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "clusters": int(self.clusters),
            "continuum": bool(self.continuum),
        }


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = BISECT_TOL,
    maxiter: int = BISECT_MAX_ITER,
) -> float:
    """
    Root of a continuous function with a sign change on [lo, hi].

    Args:
        f: Function handle
        lo: Left end of the bracket
        hi: Right end of the bracket
        tol: Absolute bracket width at termination (must be positive)
        maxiter: Iteration cap

    Returns:
        Root estimate

    Raises:
        NoSignChangeError: If f(lo) and f(hi) have the same sign
    """
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)) or f_lo * f_hi > 0:
        raise NoSignChangeError(f"no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})")
    root, result = optimize.bisect(
        f, lo, hi, xtol=tol, maxiter=maxiter, full_output=True, disp=False
    )
    if not result.converged:
        logger.warning(f"bisection on [{lo}, {hi}] stopped after {result.iterations} iterations")
    logger.debug(f"bisection root {root!r} after {result.iterations} iterations")
    return float(root)


def _as_array(x: Union[UnitVector, np.ndarray]) -> np.ndarray:
    return x.components if isinstance(x, UnitVector) else np.asarray(x)


def _pairwise(points: np.ndarray, metric: str) -> np.ndarray:
    """Pairwise angles from chord lengths, accurate for nearby points."""
    if metric == "line":
        gram = points @ points.conj().T
        resid = points[:, None, :] - gram[:, :, None] * points[None, :, :]
        return np.arctan2(np.linalg.norm(resid, axis=-1), np.abs(gram))
    chord = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    return 2 * np.arcsin(np.clip(chord / 2, 0.0, 1.0))


def _cluster(points: np.ndarray, radius: float, metric: str) -> Tuple[np.ndarray, int]:
    if len(points) == 0:
        return np.zeros(0, dtype=int), 0
    graph = csr_matrix(_pairwise(points, metric) < radius)
    n_clusters, labels = connected_components(graph, directed=False)
    return labels, int(n_clusters)


def _circle_roots(level: Callable, n: int, spec: GridSpec) -> np.ndarray:
    """
    Zeros of a smooth 2pi-periodic function located from n samples.

    Sign changes between neighbouring samples are bisected. A sampled extremum of |level| that
    keeps its sign is polished with a bounded Brent search: a polished value within tolerance
    is a touching root, a sign flip brackets two roots, and a value within ``spec.near_miss``
    of zero cannot be called.

    Raises:
        OracleResolutionError: If a polished extremum is too close to zero to call
    """
    tol = spec.tolerance
    step = 2 * np.pi / n
    t = step * np.arange(n)
    values = np.asarray(level(t), dtype=float)
    if np.ptp(values) <= tol:
        if abs(values[0]) > tol:
            return np.zeros(0)
        return t[:: max(1, n // CIRCLE_SAMPLES)]

    roots: List[float] = list(t[np.abs(values) <= tol])
    before, after = np.roll(values, 1), np.roll(values, -1)
    for i in np.flatnonzero(values * after < 0):
        roots.append(bisect(level, t[i], t[i] + step))

    mag = np.abs(values)
    touch = (before * after > 0) & (values * before >= 0)
    touch &= (mag <= np.abs(before)) & (mag <= np.abs(after))
    for i in np.flatnonzero(touch):
        sign = float(np.sign(before[i]))
        lo, hi = t[i] - step, t[i] + step
        best = optimize.minimize_scalar(
            lambda s, sign=sign: sign * float(level(s)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13},
        )
        s = float(best.x)
        value = float(level(s))
        if abs(value) <= tol:
            roots.append(s)
        elif sign * value < 0:
            roots.extend([bisect(level, lo, s), bisect(level, s, hi)])
        elif abs(value) < spec.near_miss:
            raise OracleResolutionError(
                f"level extremum {value:.2e} near t={s:.6f} is too close to zero to call"
            )
    return np.mod(np.array(roots, dtype=float), 2 * np.pi)


def _summarize(
    solutions: np.ndarray,
    residuals: Sequence[float],
    spec: GridSpec,
    radius: float,
    metric: str,
    samples: int,
    check_resolution: bool,
) -> OracleReport:
    labels, n_clusters = _cluster(solutions, radius, metric)
    fit = np.asarray(residuals, dtype=float)
    witnesses, spreads = [], []
    for label in range(n_clusters):
        members = solutions[labels == label]
        witnesses.append(members[int(np.argmin(fit[labels == label]))])
        spreads.append(float(np.max(_pairwise(members, metric))) if len(members) > 1 else 0.0)
    continuum = any(spread > 2 * radius for spread in spreads)
    # more than four clusters is Many however the roots inside them are grouped
    blurred = max(spreads, default=0.0) if n_clusters <= 4 else 0.0
    if check_resolution and not continuum and blurred > min(spec.distinct, radius):
        raise OracleResolutionError(
            f"roots {blurred:.2e} apart merge into one cluster at resolution {spec.resolution}"
        )
    witness_arr = np.array(witnesses) if witnesses else np.zeros((0, solutions.shape[-1]))

    if check_resolution and 2 <= n_clusters <= 4 and not continuum:
        gaps = _pairwise(witness_arr, metric)
        gap = float(np.min(gaps[np.triu_indices(n_clusters, 1)]))
        if gap < 2 * radius:
            raise OracleResolutionError(
                f"clusters {gap:.2e} apart cannot be separated at resolution {spec.resolution}"
            )

    if n_clusters == 0:
        estimate = "Empty"
    elif n_clusters == 1 and not continuum:
        estimate = "One"
    else:
        estimate = "Many"
    logger.debug(f"oracle: {len(solutions)} solutions in {n_clusters} clusters -> {estimate}")
    return OracleReport(
        estimate=estimate,
        samples_used=samples,
        max_residual=float(np.max(fit)) if fit.size else float("nan"),
        tolerance=spec.tolerance,
        clusters=n_clusters,
        continuum=continuum,
        witnesses=witness_arr,
    )


def mc_sphere_card(
    x: Union[UnitVector, np.ndarray],
    y: Union[UnitVector, np.ndarray],
    alpha: float,
    beta: float,
    spec: GridSpec,
) -> OracleReport:
    """
    Classify x^(alpha) cap y^(beta) on the 2-sphere.

    The circle x^(alpha) is sampled at ``spec.resolution`` points and <p, y> - cos(beta) is
    solved along it; the roots are clustered. Zero clusters give Empty, one compact cluster One,
    anything else Many.

    Raises:
        OracleResolutionError: If roots are closer than the grid can resolve, or a tangency
            cannot be decided
    """
    xv, yv = _as_array(x).real, _as_array(y).real
    if xv.shape != (3,) or yv.shape != (3,):
        raise DomainError("the sphere oracle works in dim 3")
    e2, e3 = orthonormal_extend([xv], 3, Field.REAL)[1:]
    ca, sa, cb = math.cos(alpha), math.sin(alpha), math.cos(beta)

    def circle(t: ArrayLike) -> np.ndarray:
        angle = np.asarray(t, dtype=float)[..., None]
        return ca * xv + sa * (np.cos(angle) * e2 + np.sin(angle) * e3)

    def level(t: ArrayLike) -> np.ndarray:
        return circle(t) @ yv - cb

    roots = _circle_roots(level, spec.resolution, spec)
    points = circle(roots).reshape(-1, 3)
    residuals = np.maximum(np.abs(points @ yv - cb), np.abs(points @ xv - ca))
    logger.debug(f"sphere oracle: {len(roots)} roots on the alpha-circle")
    return _summarize(points, residuals, spec, spec.merge_radius, "sphere", spec.resolution, True)


def _proj_frame(v: Line, w: Line) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    a = v.vector
    b = w.vector
    overlap = inner(b, a)
    if abs(overlap) > 0:
        b = b * (np.conj(overlap) / abs(overlap))
    gamma = float(np.arccos(np.clip(abs(overlap), 0.0, 1.0)))
    rest = b - inner(b, a) * a
    if np.linalg.norm(rest) < 1e-12:
        raise DomainError("the two lines coincide")
    e2 = rest / np.linalg.norm(rest)
    e3 = orthonormal_extend([a, e2], 3, v.field)[2]
    return a, e2, e3, gamma


def _spread_rows(indices: np.ndarray) -> np.ndarray:
    if len(indices) <= ROW_CAP:
        return indices
    picks = np.linspace(0, len(indices) - 1, ROW_CAP).round().astype(int)
    return indices[np.unique(picks)]


def mc_proj_card(v: Line, w: Line, alpha: float, beta: float, spec: GridSpec) -> OracleReport:
    """
    Classify [v]^alpha cap [w]^beta in dim 3 over either field.

    Every line at angle alpha from [v] is [cos a e1 + sin a (lam cos d e2 + mu sin d e3)] for
    unimodular lam, mu, with [w] in span(e1, e2). Real spaces reduce this to one angle t and
    the signed levels <u, w> = +-cos b are solved along it. In complex spaces mu only turns the
    e3 part, so |<u, w>|^2 = cos^2 b is solved on the (d, arg lam) grid with mu = 1, and every
    root is then spun through four values of mu to expose the circle it lies on.
    """
    if v.dim != 3 or w.dim != 3 or v.field is not w.field:
        raise DomainError("the projective oracle works with two lines of one space of dim 3")
    e1, e2, e3, gamma = _proj_frame(v, w)
    ca, sa, cb = math.cos(alpha), math.sin(alpha), math.cos(beta)
    wv = math.cos(gamma) * e1 + math.sin(gamma) * e2
    n = spec.resolution

    if v.field is Field.REAL:
        e1, e2, e3, wv = e1.real, e2.real, e3.real, wv.real

        def circle(t: ArrayLike) -> np.ndarray:
            angle = np.asarray(t, dtype=float)[..., None]
            return ca * e1 + sa * (np.cos(angle) * e2 + np.sin(angle) * e3)

        roots = np.concatenate(
            [_circle_roots(lambda t, s=s: circle(t) @ wv - s * cb, n, spec) for s in (1.0, -1.0)]
        )
        points = circle(roots).reshape(-1, 3)
        samples = 2 * n
    else:
        points = _complex_level_points(e1, e2, e3, wv, ca, sa, cb, spec)
        samples = n * n

    if len(points):
        points = np.array([canonical_phase(p / np.linalg.norm(p)) for p in points])
    residuals = np.abs(np.abs(points @ np.conj(wv)) - cb)
    logger.debug(f"projective oracle: {len(points)} root lines")
    return _summarize(points, residuals, spec, spec.merge_radius, "line", samples, True)


def _complex_level_points(
    e1: np.ndarray,
    e2: np.ndarray,
    e3: np.ndarray,
    wv: np.ndarray,
    ca: float,
    sa: float,
    cb: float,
    spec: GridSpec,
) -> np.ndarray:
    """Representatives of lines on the complex level set, four phases of mu per root."""
    n = spec.resolution

    def build(d: ArrayLike, theta: ArrayLike, mu: complex = 1.0) -> np.ndarray:
        d = np.asarray(d, dtype=float)[..., None]
        lam = np.exp(1j * np.asarray(theta, dtype=float))[..., None]
        return ca * e1 + sa * (lam * np.cos(d) * e2 + mu * np.sin(d) * e3)

    def level(d: ArrayLike, theta: ArrayLike) -> np.ndarray:
        return np.abs(build(d, theta) @ np.conj(wv)) ** 2 - cb * cb

    d_axis = np.linspace(0.0, np.pi / 2, n)
    theta_axis = 2 * np.pi * np.arange(n) / n
    values = level(d_axis[:, None], theta_axis[None, :])
    near = np.abs(values) <= spec.tolerance
    row_flip = (values * np.roll(values, -1, axis=1) < 0) | near
    col_flip = values[:-1] * values[1:] < 0

    roots: List[Tuple[float, float]] = []
    for k in _spread_rows(np.flatnonzero(row_flip.any(axis=1))):
        d = float(d_axis[k])
        roots.extend((d, float(t)) for t in _circle_roots(partial(level, d), n, spec))
    # rows are constant in theta when cos a or cos g vanishes; those change sign along d
    columns = np.flatnonzero(col_flip.any(axis=0)) if not roots else np.zeros(0, dtype=int)
    for j in _spread_rows(columns):
        theta = float(theta_axis[j])
        for k in np.flatnonzero(col_flip[:, j])[:2]:
            lo, hi = float(d_axis[k]), float(d_axis[k + 1])
            roots.append((bisect(partial(level, theta=theta), lo, hi), theta))

    if not roots:
        roots = _polish_level_minimum(level, values, d_axis, theta_axis, spec)

    if not roots:
        return np.zeros((0, 3), dtype=complex)
    ds, thetas = np.array(roots).T
    return np.concatenate([build(ds, thetas, mu) for mu in MU_PHASES])


def _polish_level_minimum(
    level: Callable,
    values: np.ndarray,
    d_axis: np.ndarray,
    theta_axis: np.ndarray,
    spec: GridSpec,
) -> List[Tuple[float, float]]:
    """Decide a grid without sign changes from its polished minimum of |level|."""
    k, j = np.unravel_index(int(np.argmin(np.abs(values))), values.shape)
    sign = float(np.sign(values[k, j])) or 1.0
    best = optimize.minimize(
        lambda p: sign * float(level(p[0], p[1])),
        x0=np.array([d_axis[k], theta_axis[j]]),
        method="L-BFGS-B",
        bounds=[(0.0, np.pi / 2), (None, None)],
        options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 500},
    )
    d, theta = (float(c) for c in best.x)
    value = float(level(d, theta))
    if abs(value) <= spec.tolerance:
        return [(d, theta)]
    if sign * value < 0:
        return [(d, float(t)) for t in _circle_roots(partial(level, d), len(theta_axis), spec)]
    if abs(value) < spec.near_miss:
        raise OracleResolutionError(
            f"level minimum {value:.2e} at d={d:.6f} is too close to zero to call"
        )
    return []


def max_pairwise_angle(points: np.ndarray, metric: str = "sphere") -> float:
    """Largest pairwise angle among rows, computed in chunks."""
    best = 0.0
    conj = points.conj().T
    for start in range(0, len(points), CHUNK):
        block = points[start : start + CHUNK] @ conj
        if metric == "line":
            smallest = float(np.min(np.abs(block)))
            best = max(best, math.acos(min(1.0, smallest)))
        else:
            smallest = float(np.min(block.real))
            best = max(best, math.acos(max(-1.0, min(1.0, smallest))))
    return best


def mc_diam(desc: SampleableSet, spec: GridSpec) -> OracleReport:
    """
    Lower estimate of a set's diameter from materialized samples.

    Raises:
        DomainError: If the set materializes no points
    """
    points = desc.sample(spec.resolution)
    if len(points) == 0:
        raise DomainError("cannot estimate the diameter of an empty set")
    estimate = max_pairwise_angle(points, desc.metric)
    residual = desc.membership_residual(points)
    logger.debug(f"diameter oracle: {len(points)} samples, estimate {estimate:.6f}")
    return OracleReport(
        estimate=estimate,
        samples_used=len(points),
        max_residual=residual,
        tolerance=spec.tolerance,
    )
