"""
Angle-closure calculus.

Starting from one preserved angle, rules derive further angles that every bijection preserving
the seed in both directions must also preserve. A run stops at a rigidity terminal (arbitrarily
small preserved angles, or orthogonality) and emits a certificate that replay() re-checks from
scratch.

Domains of a derived angle:
    sphere: angle between unit vectors of a real space
    line:   angle between lines of a real or complex space
    ball:   the relation "angle <= a" between unit vectors
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .angle_calculus import (
    beta,
    case4_gamma,
    dim3_three_element_angle,
    ordering_sphere_angle,
    proj_gamma0,
    restricted_sphere_angle,
)
from .config import DEDUP_TOL, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD
from .errors import DomainError
from .models import Angle, Context, Field, StepRecord, Verdict
from .utils import format_angle

logger = logging.getLogger(__name__)

PI = math.pi
HALF_PI = math.pi / 2
EXACT_TOL = 1e-12
REPLAY_TOL = 1e-10

SPHERE = "sphere"
LINE = "line"
BALL = "ball"

Inputs = Sequence[float]
Params = Dict[str, float]


@dataclass(frozen=True)
class Space:
    """Field and dimension a rule is applied in."""

    field: Field
    dim: int


def _eq(a: float, b: float) -> bool:
    return abs(a - b) <= EXACT_TOL


@dataclass(frozen=True)
class RuleSpec:
    """
    One derivation rule.

    formula maps input angles (and integer params such as j) to the derived angle; conditions
    evaluates every side condition of the underlying lemma by name.
    """

    name: str
    input_domains: Tuple[str, ...]
    output_domain: str
    formula: Callable[[Inputs, Params, Space], float]
    conditions: Callable[[Inputs, Params, Space], Dict[str, bool]]

    @property
    def arity(self) -> int:
        return len(self.input_domains)


def _multiple_conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
    a, j = x[0], p["j"]
    return {
        "0<a<pi/2": 0 < a < HALF_PI,
        "j>=2": j >= 2 and float(j).is_integer(),
        "j<pi/a": j * a < PI,
        "real dim>=3": s.field is Field.REAL and s.dim >= 3,
    }


def _sum_diff_conditions(strict_sum: bool) -> Callable[[Inputs, Params, Space], Dict[str, bool]]:
    def conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
        a, b = x
        key = "a+b<pi" if strict_sum else "a+b<=pi"
        return {
            "0<a<b<pi": 0 < a < b < PI,
            key: a + b < PI if strict_sum else a + b <= PI + EXACT_TOL,
            "real dim>=3": s.field is Field.REAL and s.dim >= 3,
        }

    return conditions


def _wrap_diff_conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
    a, b = x
    return {
        "0<a<b<pi": 0 < a < b < PI,
        "a+b>pi": a + b > PI,
        "b-a<2a": b - a < 2 * a,
        "2pi-a-b>=2a": 2 * PI - a - b >= 2 * a - EXACT_TOL,
        "real dim>=3": s.field is Field.REAL and s.dim >= 3,
    }


def _pair_complement_conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
    a, b, c = x
    return {
        "0<a<b<pi": 0 < a < b < PI,
        "a+b>pi": a + b > PI,
        "c in {b-a, 2pi-a-b}": _eq(c, b - a) or _eq(c, 2 * PI - a - b),
        "pair distinct": not _eq(b - a, 2 * PI - a - b),
        "real dim>=3": s.field is Field.REAL and s.dim >= 3,
    }


def _range(
    lo: float, hi: float, label: str, fld: Optional[Field] = None, dims: Tuple[int, int] = (3, 0)
) -> Callable[[Inputs, Params, Space], Dict[str, bool]]:
    """Single-input rule valid for lo < a < hi in the given field and dimension range."""

    def conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
        return {label: lo < x[0] < hi, **_space_conditions(s, fld, dims)}

    return conditions


def _at(
    value: float, label: str, fld: Optional[Field] = None, dims: Tuple[int, int] = (3, 0)
) -> Callable[[Inputs, Params, Space], Dict[str, bool]]:
    """Single-input rule valid only at one angle."""

    def conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
        return {label: _eq(x[0], value), **_space_conditions(s, fld, dims)}

    return conditions


def _space_conditions(s: Space, fld: Optional[Field], dims: Tuple[int, int]) -> Dict[str, bool]:
    lo, hi = dims
    out: Dict[str, bool] = {}
    if fld is not None:
        out[f"field={fld.value}"] = s.field is fld
    if hi == lo:
        out[f"dim={lo}"] = s.dim == lo
    elif hi == 0:
        out[f"dim>={lo}"] = s.dim >= lo
    return out


def _proj_multiple_conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
    a, j = x[0], p["j"]
    return {
        "0<a<pi/4": 0 < a < PI / 4,
        "j>=2": j >= 2 and float(j).is_integer(),
        "j<pi/(2a)": 2 * j * a < PI,
        "dim>=3": s.dim >= 3,
    }


def _proj_pair_conditions(strict_sum: bool) -> Callable[[Inputs, Params, Space], Dict[str, bool]]:
    def conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
        a, b = x
        out = {"0<a<b<pi/2": 0 < a < b < HALF_PI, "dim>=3": s.dim >= 3}
        if strict_sum:
            out["a+b<pi/2"] = a + b < HALF_PI
        return out

    return conditions


def _reflect4_conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
    a, b = x
    return {
        "pi/4<a<pi/2": PI / 4 < a < HALF_PI,
        "b=2a": _eq(b, 2 * a),
        "real dim>=3": s.field is Field.REAL and s.dim >= 3,
    }


def _supplement_conditions(x: Inputs, p: Params, s: Space) -> Dict[str, bool]:
    a, b = x
    return {
        "a=pi": _eq(a, PI),
        "0<b<pi": 0 < b < PI,
        "real dim>=3": s.field is Field.REAL and s.dim >= 3,
    }


def _total(x: Inputs, p: Params, s: Space) -> float:
    return x[0] + x[1]


def _difference(x: Inputs, p: Params, s: Space) -> float:
    return x[1] - x[0]


_REAL3 = (Field.REAL, (3, 0))
_SPHERE2 = (SPHERE, SPHERE)
_LINE2 = (LINE, LINE)

RULES: Dict[str, RuleSpec] = {
    spec.name: spec
    for spec in (
        RuleSpec(
            "Multiple", (SPHERE,), SPHERE, lambda x, p, s: p["j"] * x[0], _multiple_conditions
        ),
        RuleSpec(
            "LeqMultiple", (SPHERE,), BALL, lambda x, p, s: p["j"] * x[0], _multiple_conditions
        ),
        RuleSpec(
            "DoubleAngle",
            (BALL,),
            SPHERE,
            lambda x, p, s: 2 * x[0],
            _range(0, HALF_PI, "0<a<pi/2", *_REAL3),
        ),
        RuleSpec("Sum", _SPHERE2, SPHERE, _total, _sum_diff_conditions(True)),
        RuleSpec("Diff", _SPHERE2, SPHERE, _difference, _sum_diff_conditions(False)),
        RuleSpec("WrapDiff", _SPHERE2, SPHERE, _difference, _wrap_diff_conditions),
        RuleSpec(
            "PairComplement",
            (SPHERE, SPHERE, SPHERE),
            SPHERE,
            lambda x, p, s: 2 * PI - 2 * x[0] - x[2],
            _pair_complement_conditions,
        ),
        RuleSpec(
            "Gamma0",
            (SPHERE,),
            SPHERE,
            lambda x, p, s: beta(x[0]),
            _range(0, HALF_PI, "0<a<pi/2", *_REAL3),
        ),
        RuleSpec(
            "Reflect2Pi2Alpha",
            (SPHERE,),
            SPHERE,
            lambda x, p, s: 2 * PI - 2 * x[0],
            _range(HALF_PI, PI, "pi/2<a<pi", *_REAL3),
        ),
        RuleSpec(
            "Reflect2Pi4Alpha",
            (SPHERE, SPHERE),
            SPHERE,
            lambda x, p, s: 2 * PI - 4 * x[0],
            _reflect4_conditions,
        ),
        RuleSpec(
            "TildeAntipode",
            (SPHERE,),
            SPHERE,
            lambda x, p, s: PI,
            _at(2 * PI / 3, "a=2pi/3", *_REAL3),
        ),
        RuleSpec("Supplement", _SPHERE2, SPHERE, lambda x, p, s: PI - x[1], _supplement_conditions),
        RuleSpec(
            "ProjMultiple", (LINE,), LINE, lambda x, p, s: p["j"] * x[0], _proj_multiple_conditions
        ),
        RuleSpec("ProjSum", _LINE2, LINE, _total, _proj_pair_conditions(True)),
        RuleSpec("ProjDiff", _LINE2, LINE, _difference, _proj_pair_conditions(False)),
        RuleSpec(
            "ProjGamma0",
            (LINE,),
            LINE,
            lambda x, p, s: proj_gamma0(x[0]),
            _range(0, PI / 4, "0<a<pi/4", Field.COMPLEX),
        ),
        RuleSpec(
            "OrthoCircle",
            (LINE,),
            LINE,
            lambda x, p, s: HALF_PI,
            _at(PI / 4, "a=pi/4", Field.COMPLEX),
        ),
        RuleSpec(
            "Restrict",
            (LINE,),
            SPHERE,
            lambda x, p, s: restricted_sphere_angle(x[0]),
            _range(0, PI / 3, "0<a<pi/3", Field.REAL, (4, 0)),
        ),
        RuleSpec(
            "RestrictThird",
            (LINE,),
            SPHERE,
            lambda x, p, s: math.acos(1 / 3),
            _at(PI / 3, "a=pi/3", Field.REAL, (4, 0)),
        ),
        RuleSpec(
            "BetaOrdering",
            (LINE,),
            SPHERE,
            lambda x, p, s: ordering_sphere_angle(x[0], s.dim),
            _range(PI / 3, HALF_PI, "pi/3<a<pi/2", Field.REAL, (4, 0)),
        ),
        RuleSpec(
            "Case4Gamma",
            (LINE,),
            LINE,
            lambda x, p, s: case4_gamma(x[0]),
            _range(0, PI / 3, "0<a<pi/3", Field.REAL, (3, 3)),
        ),
        RuleSpec(
            "Dim3ThreeElement",
            (LINE,),
            LINE,
            lambda x, p, s: dim3_three_element_angle(x[0]),
            _range(PI / 3, HALF_PI, "pi/3<a<pi/2", Field.REAL, (3, 3)),
        ),
        RuleSpec(
            "Dim3Cross",
            (LINE,),
            LINE,
            lambda x, p, s: HALF_PI,
            _at(PI / 3, "a=pi/3", Field.REAL, (3, 3)),
        ),
        RuleSpec(
            "BlochDouble",
            (LINE,),
            SPHERE,
            lambda x, p, s: 2 * x[0],
            _range(0, HALF_PI, "0<a<pi/2", Field.COMPLEX, (2, 2)),
        ),
    )
}


def domain_spaces(context: Context, dim: int) -> Dict[str, Space]:
    """
    Space each domain's angles live in.

    Sphere angles of a real projective run live on the unit sphere of the complement of a line;
    those of a qubit run live on the Bloch sphere.
    """
    if context is Context.SPHERE_REAL:
        line = sphere = Space(Field.REAL, dim)
    elif context is Context.PROJ_REAL:
        line, sphere = Space(Field.REAL, dim), Space(Field.REAL, dim - 1)
    elif context is Context.PROJ_COMPLEX_DIM2:
        line, sphere = Space(Field.COMPLEX, 2), Space(Field.REAL, 3)
    else:
        line = sphere = Space(Field.COMPLEX, dim)
    return {SPHERE: sphere, BALL: sphere, LINE: line}


def rule_label(name: str, params: Params) -> str:
    """Display name, e.g. Multiple(2)."""
    if "j" in params:
        return f"{name}({int(params['j'])})"
    return name


def apply_rule(name: str, inputs: Inputs, space: Space, params: Optional[Params] = None) -> float:
    """
    Evaluate one rule after checking its side conditions.

    Raises:
        DomainError: Unknown rule, wrong arity or a failing side condition
    """
    spec = RULES.get(name)
    if spec is None:
        raise DomainError(f"unknown rule {name!r}")
    params = params or {}
    if len(inputs) != spec.arity:
        raise DomainError(f"{name} takes {spec.arity} angles, got {len(inputs)}")
    failed = [k for k, ok in spec.conditions(inputs, params, space).items() if not ok]
    if failed:
        raise DomainError(f"{rule_label(name, params)} side conditions fail: {', '.join(failed)}")
    return float(spec.formula(inputs, params, space))


@dataclass(frozen=True)
class Step:
    """One application of a rule."""

    rule: str
    inputs: Tuple[float, ...]
    input_domains: Tuple[str, ...]
    output: float
    domain: str
    case: str
    conditions: Dict[str, bool] = field(default_factory=dict)
    params: Dict[str, float] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return rule_label(self.rule, self.params)

    def to_record(self) -> StepRecord:
        return StepRecord(
            rule=self.rule,
            params=dict(self.params),
            inputs=list(self.inputs),
            input_domains=list(self.input_domains),
            output=self.output,
            domain=self.domain,
            case=self.case,
            conditions=dict(self.conditions),
        )

    @classmethod
    def from_record(cls, record: StepRecord) -> "Step":
        return cls(
            rule=record["rule"],
            inputs=tuple(float(x) for x in record["inputs"]),
            input_domains=tuple(record["input_domains"]),
            output=float(record["output"]),
            domain=record["domain"],
            case=record["case"],
            conditions={k: bool(v) for k, v in record["conditions"].items()},
            params={k: float(v) for k, v in record.get("params", {}).items()},
        )


@dataclass(frozen=True)
class RigidityCertificate:
    """Derivation trace of preserved angles and the verdict it supports."""

    seed: Angle
    context: Context
    dim: int
    steps: Tuple[Step, ...]
    verdict: Verdict
    terminal_threshold: float = DEFAULT_TERMINAL_THRESHOLD
    note: str = ""

    @property
    def seed_domain(self) -> str:
        return SPHERE if self.context is Context.SPHERE_REAL else LINE

    @property
    def spaces(self) -> Dict[str, Space]:
        return domain_spaces(self.context, self.dim)

    @property
    def derived(self) -> List[float]:
        return [step.output for step in self.steps]

    def to_dict(self) -> Dict[str, object]:
        return {
            "seed": self.seed,
            "context": self.context.value,
            "dim": self.dim,
            "verdict": self.verdict.value,
            "terminal_threshold": self.terminal_threshold,
            "note": self.note,
            "steps": [step.to_record() for step in self.steps],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "RigidityCertificate":
        steps = tuple(Step.from_record(rec) for rec in data["steps"])  # type: ignore[union-attr]
        return cls(
            seed=float(data["seed"]),  # type: ignore[arg-type]
            context=Context(data["context"]),
            dim=int(data["dim"]),  # type: ignore[call-overload]
            steps=steps,
            verdict=Verdict(data["verdict"]),
            terminal_threshold=float(
                data.get("terminal_threshold", DEFAULT_TERMINAL_THRESHOLD)  # type: ignore[arg-type]
            ),
            note=str(data.get("note", "")),
        )

    def to_frame(self) -> pd.DataFrame:
        """One row per step, nested fields as JSON text."""
        rows = [
            {
                "step": idx,
                "rule": step.label,
                "inputs": json.dumps(list(step.inputs)),
                "input_domains": ";".join(step.input_domains),
                "output": step.output,
                "domain": step.domain,
                "case": step.case,
                "conditions_ok": all(step.conditions.values()),
                "conditions": json.dumps(step.conditions),
            }
            for idx, step in enumerate(self.steps)
        ]
        columns = [
            "step",
            "rule",
            "inputs",
            "input_domains",
            "output",
            "domain",
            "case",
            "conditions_ok",
            "conditions",
        ]
        return pd.DataFrame(rows, columns=columns)


class _Abort(Exception):
    """A rule could not be applied; the run ends Inconclusive."""


class _Derivation:
    """Mutable state of one closure run."""

    def __init__(
        self, seed: float, seed_domain: str, spaces: Dict[str, Space], max_steps: int
    ):
        self.spaces = spaces
        self.max_steps = max_steps
        self.steps: List[Step] = []
        self.known: Dict[str, List[float]] = {SPHERE: [], LINE: [], BALL: []}
        self.known[seed_domain].append(seed)

    def derive(
        self, rule: str, inputs: Sequence[float], case: str, params: Optional[Params] = None
    ) -> float:
        spec = RULES[rule]
        params = params or {}
        space = self.spaces[spec.input_domains[0]]
        conditions = spec.conditions(inputs, params, space)
        if not all(conditions.values()):
            failed = [k for k, ok in conditions.items() if not ok]
            logger.warning(
                f"{rule_label(rule, params)} on {list(inputs)} fails {failed} ({case}); "
                "closure is inconclusive"
            )
            raise _Abort(f"{rule_label(rule, params)} side conditions fail: {', '.join(failed)}")
        output = float(spec.formula(inputs, params, space))
        for seen in self.known[spec.output_domain]:
            if abs(seen - output) <= DEDUP_TOL:
                logger.debug(f"{rule_label(rule, params)} -> {output!r} already known")
                return seen
        if len(self.steps) >= self.max_steps:
            raise _Abort(f"step budget of {self.max_steps} exhausted")
        self.steps.append(
            Step(
                rule=rule,
                inputs=tuple(float(x) for x in inputs),
                input_domains=spec.input_domains,
                output=output,
                domain=spec.output_domain,
                case=case,
                conditions=conditions,
                params=dict(params),
            )
        )
        self.known[spec.output_domain].append(output)
        logger.debug(f"[{case}] {rule_label(rule, params)}{tuple(inputs)} -> {output!r}")
        return output


def _sphere_chain(run: _Derivation, alpha: float, threshold: float) -> Verdict:
    """Drive a preserved sphere angle in (0, pi), other than pi/2, down to a small one."""
    a = alpha
    while a >= threshold:
        if a <= PI / 4 + EXACT_TOL:
            case = "sphere/alpha<=pi/4"
            double = run.derive("Multiple", [a], case, {"j": 2})
            b = run.derive("Gamma0", [a], case)
            first = run.derive("Diff", [a, b], case)
            second = run.derive("Diff", [b, double], case)
            a = min(first, second)
        elif a < HALF_PI:
            case = "sphere/pi/4<alpha<pi/2"
            b = run.derive("Gamma0", [a], case)
            if a + b <= PI:
                a = run.derive("Diff", [a, b], case)
            elif 2 * PI - a - b >= 2 * a:
                a = run.derive("WrapDiff", [a, b], case)
            else:
                double = run.derive("Multiple", [a], case, {"j": 2})
                a = run.derive("Reflect2Pi4Alpha", [a, double], case)
        elif _eq(a, HALF_PI):
            raise _Abort("derived pi/2 has no continuation outside the 3pi/4 case")
        elif _eq(a, 3 * PI / 4):
            case = "sphere/alpha=3pi/4"
            right = run.derive("Reflect2Pi2Alpha", [a], case)
            a = run.derive("PairComplement", [right, a, a], case)
        elif _eq(a, 2 * PI / 3):
            case = "sphere/alpha=2pi/3"
            straight = run.derive("TildeAntipode", [a], case)
            a = run.derive("Supplement", [straight, a], case)
        elif a < 3 * PI / 4:
            a = run.derive("Reflect2Pi2Alpha", [a], "sphere/pi/2<alpha<3pi/4")
        elif a < PI:
            a = run.derive("Reflect2Pi2Alpha", [a], "sphere/3pi/4<alpha<pi")
        else:
            raise _Abort(f"sphere angle {a!r} is outside (0, pi)")
    return Verdict.SMALL_ANGLES


def _proj_iterate(run: _Derivation, alpha: float, threshold: float, gamma_rule: str) -> Verdict:
    """
    Shrink a preserved line angle below pi/4 by repeated differences.

    gamma_rule supplies a preserved angle g in (a, 2a): Case4Gamma (real, dim 3) or ProjGamma0
    (complex). Case4Gamma reaching pi/2 ends the run on orthogonality.
    """
    prefix = "proj-real/dim=3" if gamma_rule == "Case4Gamma" else "proj-complex"
    a = alpha
    while a >= threshold:
        case = f"{prefix}/alpha<pi/4" if a < PI / 4 else f"{prefix}/pi/4<=alpha<pi/3"
        g = run.derive(gamma_rule, [a], case)
        if _eq(g, HALF_PI):
            return Verdict.ORTHOGONALITY
        if a < PI / 4:
            double = run.derive("ProjMultiple", [a], case, {"j": 2})
            first = run.derive("ProjDiff", [a, g], case)
            second = run.derive("ProjDiff", [g, double], case)
            a = min(first, second)
        else:
            a = run.derive("ProjDiff", [a, g], case)
    return Verdict.SMALL_ANGLES


def _run(run: _Derivation, seed: float, context: Context, dim: int, thr: float) -> Verdict:
    if context is Context.SPHERE_REAL:
        if _eq(seed, HALF_PI):
            return Verdict.ORTHOGONALITY
        return _sphere_chain(run, seed, thr)

    if context is Context.PROJ_COMPLEX_DIM2:
        doubled = run.derive("BlochDouble", [seed], "qubit")
        if _eq(doubled, HALF_PI):
            return Verdict.QUBIT_AMBIGUITY
        return _sphere_chain(run, doubled, thr)

    if context is Context.PROJ_COMPLEX:
        if _eq(seed, PI / 4):
            run.derive("OrthoCircle", [seed], "proj-complex/alpha=pi/4")
            return Verdict.ORTHOGONALITY
        return _proj_iterate(run, seed, thr, "ProjGamma0")

    if dim == 3:
        if _eq(seed, PI / 3):
            run.derive("Dim3Cross", [seed], "proj-real/dim=3/alpha=pi/3")
            return Verdict.ORTHOGONALITY
        start = seed
        if seed > PI / 3:
            start = run.derive("Dim3ThreeElement", [seed], "proj-real/dim=3/pi/3<alpha<pi/2")
        return _proj_iterate(run, start, thr, "Case4Gamma")

    if _eq(seed, PI / 3):
        sphere = run.derive("RestrictThird", [seed], "proj-real/dim>=4/alpha=pi/3")
    elif seed < PI / 3:
        sphere = run.derive("Restrict", [seed], "proj-real/dim>=4/alpha<pi/3")
    else:
        sphere = run.derive("BetaOrdering", [seed], "proj-real/dim>=4/pi/3<alpha<pi/2")
    return _sphere_chain(run, sphere, thr)


def _scope_problem(seed: float, context: Context, dim: int) -> Optional[str]:
    """Reason the seed lies outside the theorem for its context, if any."""
    if not math.isfinite(seed):
        return "seed is not finite"
    if context is Context.SPHERE_REAL:
        if dim < 3:
            return "sphere rigidity needs dim >= 3"
        if not 0 < seed < PI:
            return "sphere seeds must lie in (0, pi)"
        return None
    if context is Context.PROJ_COMPLEX_DIM2:
        if dim != 2:
            return "the qubit context has dim 2"
    elif dim < 3:
        return "projective rigidity needs dim >= 3; use the qubit context for C^2"
    if not 0 < seed < HALF_PI:
        return "line seeds must lie in (0, pi/2)"
    if context is Context.PROJ_COMPLEX and seed > PI / 4 + EXACT_TOL:
        return "complex projective rigidity is only established for seeds in (0, pi/4]"
    return None


def closure(
    seed: Angle,
    context: Context,
    dim: int = 3,
    max_steps: int = DEFAULT_MAX_STEPS,
    terminal_threshold: float = DEFAULT_TERMINAL_THRESHOLD,
) -> RigidityCertificate:
    """
    Derive preserved angles from a seed until a rigidity terminal is reached.

    Args:
        seed: Angle preserved in both directions
        context: Which space the map acts on
        dim: Dimension of the underlying space (forced to 2 for the qubit context)
        max_steps: Upper bound on recorded derivation steps
        terminal_threshold: Small-angle terminal: the run stops once a derived angle is below it

    Returns:
        Certificate whose verdict is Inconclusive whenever the seed is out of scope or a rule
        cannot be applied
    """
    if context is Context.PROJ_COMPLEX_DIM2:
        dim = 2
    seed = float(seed)
    note = ""
    problem = _scope_problem(seed, context, dim)
    if problem is not None:
        logger.info(f"closure({format_angle(seed)}, {context.value}, dim {dim}): {problem}")
        return RigidityCertificate(
            seed, context, dim, (), Verdict.INCONCLUSIVE, terminal_threshold, problem
        )

    seed_domain = SPHERE if context is Context.SPHERE_REAL else LINE
    run = _Derivation(seed, seed_domain, domain_spaces(context, dim), max_steps)
    try:
        verdict = _run(run, seed, context, dim, terminal_threshold)
    except _Abort as exc:
        verdict, note = Verdict.INCONCLUSIVE, str(exc)
    except DomainError as exc:
        logger.warning(f"closure aborted on a domain error: {exc}")
        verdict, note = Verdict.INCONCLUSIVE, str(exc)

    if verdict is Verdict.ORTHOGONALITY and context is Context.SPHERE_REAL:
        note = "psi(x) is determined only up to sign: psi(x) in {Rx, -Rx}"
    elif verdict is Verdict.QUBIT_AMBIGUITY:
        note = "phi([v]) in {[Uv], [Uv]^perp} with U unitary or antiunitary"

    logger.info(
        f"closure({format_angle(seed)}, {context.value}, dim {dim}) -> {verdict.value} "
        f"after {len(run.steps)} steps"
    )
    return RigidityCertificate(
        seed, context, dim, tuple(run.steps), verdict, terminal_threshold, note
    )


@dataclass
class ReplayReport:
    """Outcome of independently re-checking a certificate."""

    ok: bool
    steps_checked: int
    failures: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "steps_checked": self.steps_checked, "failures": list(self.failures)}


def _terminal_failure(cert: RigidityCertificate) -> Optional[str]:
    if cert.verdict is Verdict.SMALL_ANGLES:
        angles = [cert.seed] + [s.output for s in cert.steps if s.domain != BALL]
        if min(angles) >= cert.terminal_threshold:
            return f"no derived angle below {cert.terminal_threshold}"
    elif cert.verdict is Verdict.ORTHOGONALITY:
        seed_right = cert.context is Context.SPHERE_REAL and _eq(cert.seed, HALF_PI)
        derived_right = any(s.domain == LINE and _eq(s.output, HALF_PI) for s in cert.steps)
        if not (seed_right or derived_right):
            return "orthogonality verdict without pi/2"
    elif cert.verdict is Verdict.QUBIT_AMBIGUITY:
        if not any(s.rule == "BlochDouble" and _eq(s.output, HALF_PI) for s in cert.steps):
            return "qubit ambiguity verdict without a doubled angle of pi/2"
    return None


def replay(cert: RigidityCertificate) -> ReplayReport:
    """
    Re-check a certificate without trusting anything it records.

    Every step is recomputed from its inputs, every side condition is re-evaluated, every input
    must be the seed or an earlier output of the same domain, and the verdict's terminal
    condition must hold.
    """
    failures: List[str] = []
    spaces = cert.spaces
    available: Dict[str, List[float]] = {SPHERE: [], LINE: [], BALL: []}
    available[cert.seed_domain].append(cert.seed)

    for idx, step in enumerate(cert.steps):
        spec = RULES.get(step.rule)
        where = f"step {idx} ({step.label})"
        if spec is None:
            failures.append(f"{where}: unknown rule")
            continue
        if tuple(step.input_domains) != spec.input_domains or step.domain != spec.output_domain:
            failures.append(f"{where}: domains do not match the rule")
            continue
        if len(step.inputs) != spec.arity:
            failures.append(f"{where}: expected {spec.arity} inputs")
            continue
        for value, dom in zip(step.inputs, spec.input_domains):
            if not any(abs(value - seen) <= DEDUP_TOL for seen in available[dom]):
                failures.append(f"{where}: input {value!r} was never derived in domain {dom}")
        space = spaces[spec.input_domains[0]]
        conditions = spec.conditions(step.inputs, step.params, space)
        failed = [k for k, ok in conditions.items() if not ok]
        if failed:
            failures.append(f"{where}: side conditions fail: {', '.join(failed)}")
        else:
            try:
                expected = float(spec.formula(step.inputs, step.params, space))
            except DomainError as exc:
                failures.append(f"{where}: {exc}")
            else:
                if abs(expected - step.output) > REPLAY_TOL:
                    failures.append(f"{where}: output {step.output!r} != {expected!r}")
        available[spec.output_domain].append(step.output)

    terminal = _terminal_failure(cert)
    if terminal is not None:
        failures.append(terminal)
    report = ReplayReport(ok=not failures, steps_checked=len(cert.steps), failures=failures)
    if failures:
        logger.warning(f"replay found {len(failures)} problems: {failures[0]}")
    return report
