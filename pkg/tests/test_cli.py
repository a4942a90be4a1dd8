"""Tests for the command-line front end."""

import io
import json
import math

import pandas as pd
import pytest

from angleforge.cli import build_parser, main
from angleforge.linalg_core import lines_from_rows, random_units
from angleforge.models import Field, LineMapSample
from angleforge.sample_io import dump_line_map_sample
from angleforge.symmetry_fit import random_wigner, wigner_sample


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parser_has_subcommands():
    """All four subcommands are registered."""
    args = build_parser().parse_args(["closure", "--alpha", "3pi/8"])
    assert args.command == "closure"
    assert args.alpha == pytest.approx(3 * math.pi / 8)


def test_version_exits_cleanly(capsys):
    """--version prints and returns success."""
    code, out, _ = _run(capsys, "--version")
    assert code == 0
    assert "angleforge" in out


def test_bad_angle_is_usage_error(capsys):
    """Unparseable angles exit with 2."""
    code, _, err = _run(capsys, "closure", "--alpha", "pie/7")
    assert code == 2
    assert "pie/7" in err


def test_verify_constants(capsys):
    """A passing lemma check exits 0 and prints its JSON report."""
    code, out, _ = _run(capsys, "verify", "constants")
    assert code == 0
    report = json.loads(out)
    assert report["lemma"] == "constants"
    assert report["ok"] is True


def test_verify_unknown_lemma(capsys):
    """Unknown lemma ids are usage errors."""
    code, _, err = _run(capsys, "verify", "unknown-lemma")
    assert code == 2
    assert "unknown lemma" in err


def test_closure_sphere_small_angles(capsys):
    """pi/7 on the 2-sphere certifies rigidity via small angles."""
    code, out, _ = _run(capsys, "closure", "--alpha", "pi/7", "--space", "sphere-real")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "IsometryViaSmallAngles"
    assert payload["replay"]["ok"] is True
    assert payload["steps"]


def test_closure_qubit_ambiguity(capsys):
    """pi/4 on the qubit ends on the antipodal ambiguity."""
    code, out, _ = _run(
        capsys, "closure", "--alpha", "pi/4", "--space", "proj-complex", "--dim", "2"
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "QubitAntipodalAmbiguity"


def test_closure_inconclusive_exits_one(capsys):
    """Seeds above pi/4 in complex spaces are outside the theorem."""
    code, out, err = _run(
        capsys, "closure", "--alpha", "1.0", "--space", "proj-complex", "--dim", "3"
    )
    assert code == 1
    assert json.loads(out)["verdict"] == "Inconclusive"
    assert "inconclusive:" in err


def test_closure_needs_alpha(capsys):
    """closure without --alpha is a usage error."""
    code, _, _ = _run(capsys, "closure")
    assert code == 2


def test_closure_csv_to_file(tmp_path, capsys):
    """--out writes the step table and leaves stdout empty."""
    target = tmp_path / "cert.csv"
    argv = ["closure", "--alpha", "0.5", "--space", "proj-complex", "--format", "csv"]
    code, out, _ = _run(capsys, *argv, "--out", str(target))
    assert code == 0
    assert out == ""
    frame = pd.read_csv(target)
    assert list(frame.columns)[:2] == ["step", "rule"]
    assert len(frame) > 0


def test_fit_wigner_sample(tmp_path, capsys):
    """A forward-generated sample fits with a tiny residual."""
    truth = random_wigner(3, Field.COMPLEX, seed=4)
    lines = lines_from_rows(random_units(10, 3, Field.COMPLEX, seed=5), Field.COMPLEX)
    path = tmp_path / "sample.json"
    dump_line_map_sample(wigner_sample(truth, lines), path)
    code, out, _ = _run(capsys, "fit", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["residual"] < 1e-8
    assert report["pairs"] == 10


def test_fit_permuted_sample_exits_one(tmp_path, capsys):
    """An angle-inconsistent sample names the offending pair."""
    lines = lines_from_rows(random_units(6, 3, Field.REAL, seed=6), Field.REAL)
    path = tmp_path / "perm.json"
    dump_line_map_sample(LineMapSample(Field.REAL, 3, list(zip(lines, lines[::-1]))), path)
    code, _, err = _run(capsys, "fit", str(path))
    assert code == 1
    assert "inconsistent sample: pair" in err


def test_fit_truncated_file_exits_two(tmp_path, capsys):
    """Malformed sample files are usage errors."""
    path = tmp_path / "broken.json"
    path.write_text('{"field": "real", "dim": 3, "pairs": [', encoding="utf-8")
    code, _, err = _run(capsys, "fit", str(path))
    assert code == 2
    assert "line 1" in err


def test_fit_repeated_input_exits_two(tmp_path, capsys):
    """A sample listing one input line twice is a usage error."""
    path = tmp_path / "repeated.json"
    pairs = [{"in": [1, 0, 0], "out": [1, 0, 0]}, {"in": [1, 0, 0], "out": [0, 1, 0]}]
    path.write_text(json.dumps({"field": "real", "dim": 3, "pairs": pairs}), encoding="utf-8")
    code, _, err = _run(capsys, "fit", str(path))
    assert code == 2
    assert "repeats the input line of pair 0" in err


def test_fit_missing_file_exits_two(tmp_path, capsys):
    """A missing input file is a usage error, not a crash."""
    code, _, _ = _run(capsys, "fit", str(tmp_path / "absent.json"))
    assert code == 2


def test_curves_beta(capsys):
    """beta on [0, pi/2] is increasing from 0 to pi."""
    code, out, _ = _run(capsys, "curves", "beta", "0", "pi/2", "100")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ["alpha", "beta"]
    assert len(frame) == 100
    assert frame["beta"].is_monotonic_increasing
    assert frame["beta"].iloc[-1] == pytest.approx(math.pi, abs=1e-12)


def test_curves_case5_sequence(capsys):
    """The case-5 recursion converges to 2pi/3 and matches its explicit formula."""
    code, out, _ = _run(capsys, "curves", "case5", "--", "40")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert len(frame) == 40
    assert frame["alpha"].iloc[-1] == pytest.approx(2 * math.pi / 3, abs=1e-9)
    assert (frame["alpha"] - frame["explicit"]).abs().max() < 1e-12


def test_curves_gamma0_bracket(capsys):
    """alpha < gamma0 < 2 alpha along the whole range."""
    code, out, _ = _run(capsys, "curves", "gamma0", "0.01", "1.5", "50")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert ((frame["alpha"] < frame["gamma0"]) & (frame["gamma0"] < 2 * frame["alpha"])).all()


def test_curves_json_format(capsys):
    """--format json wraps the rows with the curve name."""
    code, out, _ = _run(capsys, "curves", "case2", "--format", "json", "--", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["curve"] == "case2"
    assert len(payload["rows"]) == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["curves", "h", "0.1", "0.5", "10"],
        ["curves", "beta", "1", "0", "10"],
        ["curves", "beta", "0", "1"],
        ["curves", "case5", "--", "1"],
        ["curves", "case5", "--", "many"],
    ],
)
def test_curves_usage_errors(argv, capsys):
    """Missing --alpha, empty ranges and bad counts exit with 2."""
    code, _, _ = _run(capsys, *argv)
    assert code == 2
