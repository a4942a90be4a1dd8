"""Tests for the angle-closure engine and certificate replay."""

import dataclasses
import json
import math

import pytest

from angleforge.closure_engine import (
    RULES,
    RigidityCertificate,
    Space,
    apply_rule,
    closure,
    domain_spaces,
    replay,
)
from angleforge.errors import DomainError
from angleforge.models import Context, Field, Verdict


@pytest.mark.parametrize(
    "seed, context, dim, verdict",
    [
        (math.pi / 7, Context.SPHERE_REAL, 3, Verdict.SMALL_ANGLES),
        (math.pi / 2, Context.SPHERE_REAL, 3, Verdict.ORTHOGONALITY),
        (math.pi, Context.SPHERE_REAL, 3, Verdict.INCONCLUSIVE),
        (math.pi / 4, Context.PROJ_COMPLEX, 3, Verdict.ORTHOGONALITY),
        (1.0, Context.PROJ_COMPLEX, 3, Verdict.INCONCLUSIVE),
        (math.pi / 4, Context.PROJ_COMPLEX_DIM2, 2, Verdict.QUBIT_AMBIGUITY),
        (math.pi / 3, Context.PROJ_REAL, 3, Verdict.ORTHOGONALITY),
        (math.pi / 2, Context.PROJ_REAL, 3, Verdict.INCONCLUSIVE),
    ],
)
def test_closure_verdicts(seed, context, dim, verdict):
    """Each context reaches the terminal its theorem predicts."""
    cert = closure(seed, context, dim)
    assert cert.verdict is verdict
    assert replay(cert).ok


def test_small_angle_terminal_reached():
    """A sphere seed of pi/7 is driven below the terminal threshold."""
    cert = closure(math.pi / 7, Context.SPHERE_REAL, 3)
    assert len(cert.steps) > 0
    assert min(cert.derived) < cert.terminal_threshold
    assert cert.derived[-1] > 0


def test_right_angle_seed_is_orthogonality_up_to_sign():
    """pi/2 on the sphere needs no derivation and only fixes the map up to sign."""
    cert = closure(math.pi / 2, Context.SPHERE_REAL, 3)
    assert cert.steps == ()
    assert "sign" in cert.note


def test_qubit_pi_over_four_is_ambiguous():
    """pi/4 on the qubit doubles to a right angle on the Bloch sphere."""
    cert = closure(math.pi / 4, Context.PROJ_COMPLEX_DIM2, 5)
    assert cert.dim == 2
    assert cert.steps[-1].rule == "BlochDouble"
    assert cert.note.startswith("phi")
    assert not cert.verdict.is_rigid


def test_out_of_scope_seeds_have_no_steps():
    """Seeds outside every theorem's range come back Inconclusive with a reason."""
    for seed, context, dim in (
        (1.0, Context.PROJ_COMPLEX, 3),
        (math.pi, Context.SPHERE_REAL, 3),
        (0.3, Context.PROJ_COMPLEX, 2),
        (float("nan"), Context.SPHERE_REAL, 3),
    ):
        cert = closure(seed, context, dim)
        assert cert.verdict is Verdict.INCONCLUSIVE
        assert cert.steps == ()
        assert cert.note


@pytest.mark.parametrize(
    "context, dim, seeds",
    [
        (Context.SPHERE_REAL, 3, [0.05, 0.5, 1.0, 1.4, 1.7, 2.0 * math.pi / 3, 2.3, 2.6, 3.0]),
        (Context.SPHERE_REAL, 5, [0.3, 3 * math.pi / 4]),
        (Context.PROJ_REAL, 3, [0.2, 0.7, 1.0, 1.2, 1.5]),
        (Context.PROJ_REAL, 4, [0.3, 0.9, math.pi / 3, 1.2, 1.5]),
        (Context.PROJ_COMPLEX, 3, [0.1, 0.5, 0.7]),
        (Context.PROJ_COMPLEX_DIM2, 2, [0.3, 0.6, 1.0]),
    ],
)
def test_rigid_seeds_replay_cleanly(context, dim, seeds):
    """Seeds across each theorem's range certify rigidity and survive replay."""
    for seed in seeds:
        cert = closure(seed, context, dim)
        assert cert.verdict.is_rigid, (seed, cert.note)
        report = replay(cert)
        assert report.ok, (seed, report.failures)
        assert report.steps_checked == len(cert.steps)


def test_certificate_survives_json_round_trip():
    """A certificate read back from JSON replays and matches the original."""
    cert = closure(math.pi / 7, Context.SPHERE_REAL, 3)
    restored = RigidityCertificate.from_dict(json.loads(cert.to_json()))
    assert restored.verdict is cert.verdict
    assert restored.derived == cert.derived
    assert [s.label for s in restored.steps] == [s.label for s in cert.steps]
    assert replay(restored).ok


def test_replay_rejects_tampered_output():
    """Nudging one recorded output by 1e-6 is caught."""
    cert = closure(math.pi / 7, Context.SPHERE_REAL, 3)
    bad_step = dataclasses.replace(cert.steps[0], output=cert.steps[0].output + 1e-6)
    tampered = dataclasses.replace(cert, steps=(bad_step,) + cert.steps[1:])
    report = replay(tampered)
    assert not report.ok
    assert any("step 0" in failure for failure in report.failures)


def test_replay_rejects_unsupported_verdict():
    """Claiming orthogonality without a derived right angle fails replay."""
    cert = closure(math.pi / 7, Context.SPHERE_REAL, 3)
    forged = dataclasses.replace(cert, verdict=Verdict.ORTHOGONALITY)
    assert not replay(forged).ok


def test_replay_rejects_underived_inputs():
    """Dropping the first step leaves later steps with inputs nobody derived."""
    cert = closure(math.pi / 7, Context.SPHERE_REAL, 3)
    truncated = dataclasses.replace(cert, steps=cert.steps[1:])
    report = replay(truncated)
    assert not report.ok
    assert any("never derived" in failure for failure in report.failures)


def test_step_budget_ends_inconclusive():
    """Running out of steps is reported, not hidden."""
    cert = closure(math.pi / 7, Context.SPHERE_REAL, 3, max_steps=3)
    assert cert.verdict is Verdict.INCONCLUSIVE
    assert len(cert.steps) == 3
    assert "step budget" in cert.note


def test_apply_rule_checks_side_conditions():
    """Rules evaluate only when every side condition holds."""
    real3 = Space(Field.REAL, 3)
    assert apply_rule("Diff", [0.3, 0.5], real3) == pytest.approx(0.2, abs=1e-15)
    assert apply_rule("Multiple", [0.5], real3, {"j": 3}) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        apply_rule("Sum", [0.3, 0.5], Space(Field.COMPLEX, 3))
    with pytest.raises(DomainError):
        apply_rule("Sum", [2.0, 2.5], real3)
    with pytest.raises(DomainError):
        apply_rule("Multiple", [1.0], real3, {"j": 4})
    with pytest.raises(DomainError):
        apply_rule("NoSuchRule", [0.1], real3)
    with pytest.raises(DomainError):
        apply_rule("Diff", [0.3], real3)


@pytest.mark.parametrize(
    "name, inputs, space, params, failing",
    [
        ("LeqMultiple", [0.4], Space(Field.REAL, 3), {"j": 1}, "j>=2"),
        ("LeqMultiple", [0.4], Space(Field.REAL, 3), {"j": 8}, "j<pi/a"),
        ("LeqMultiple", [0.4], Space(Field.COMPLEX, 3), {"j": 3}, "real dim>=3"),
        ("DoubleAngle", [1.7], Space(Field.REAL, 3), {}, "0<a<pi/2"),
        ("DoubleAngle", [0.6], Space(Field.COMPLEX, 3), {}, "field=real"),
        ("DoubleAngle", [0.6], Space(Field.REAL, 2), {}, "dim>=3"),
        ("ProjSum", [0.7, 0.9], Space(Field.COMPLEX, 3), {}, "a+b<pi/2"),
        ("ProjSum", [0.5, 0.3], Space(Field.COMPLEX, 3), {}, "0<a<b<pi/2"),
        ("ProjSum", [0.3, 0.5], Space(Field.COMPLEX, 2), {}, "dim>=3"),
    ],
)
def test_ball_and_projective_rules_name_failing_conditions(name, inputs, space, params, failing):
    """A failing side condition is named in the error."""
    with pytest.raises(DomainError) as info:
        apply_rule(name, inputs, space, params)
    assert failing in str(info.value)


def test_ball_and_projective_rules_evaluate():
    """Multiples reach the ball, doubling returns to the sphere, projective sums add."""
    real3 = Space(Field.REAL, 3)
    assert apply_rule("LeqMultiple", [0.4], real3, {"j": 3}) == pytest.approx(1.2)
    assert apply_rule("DoubleAngle", [0.6], real3) == pytest.approx(1.2)
    assert apply_rule("ProjSum", [0.3, 0.5], Space(Field.COMPLEX, 3)) == pytest.approx(0.8)
    assert apply_rule("ProjSum", [0.3, 0.5], Space(Field.REAL, 4)) == pytest.approx(0.8)


def test_every_rule_declares_domains():
    """Rule input and output domains are drawn from the three known ones."""
    for spec in RULES.values():
        assert spec.arity >= 1
        assert set(spec.input_domains) | {spec.output_domain} <= {"sphere", "line", "ball"}


def test_domain_spaces_per_context():
    """Real projective sphere angles live one dimension down; qubit ones on the Bloch sphere."""
    proj = domain_spaces(Context.PROJ_REAL, 4)
    assert proj["line"] == Space(Field.REAL, 4)
    assert proj["sphere"] == Space(Field.REAL, 3)
    qubit = domain_spaces(Context.PROJ_COMPLEX_DIM2, 2)
    assert qubit["line"] == Space(Field.COMPLEX, 2)
    assert qubit["sphere"] == Space(Field.REAL, 3)


def test_certificate_frame_columns():
    """The tabular form has one row per step."""
    cert = closure(0.5, Context.PROJ_COMPLEX, 3)
    frame = cert.to_frame()
    assert len(frame) == len(cert.steps)
    assert list(frame.columns)[:3] == ["step", "rule", "inputs"]
    assert frame["conditions_ok"].all()
