"""
Command-line front end.

    angleforge verify <lemma-id> [--grid N] [--resolution N] [--seed S]
    angleforge closure --alpha pi/7 --space sphere-real --dim 3
    angleforge fit sample.json
    angleforge curves beta 0 pi/2 100
    angleforge curves case5 -- 40

Exit codes: 0 success, 1 negative verdict (Inconclusive closure, lemma disagreement, angle-
inconsistent sample), 2 usage or parse error.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from . import __version__
from .angle_calculus import beta, case2_recursion, case4_gamma, case5_explicit, case5_recursion
from .angle_sets import beta_pair, gamma0, proj_diam, sphere_cap_diam
from .closure_engine import closure, replay
from .config import SPACES, RunConfig
from .errors import (
    AngleForgeError,
    AngleInconsistentSampleError,
    DomainError,
    RankDeficientError,
    SampleFormatError,
)
from .models import Verdict
from .sample_io import load_line_map_sample
from .symmetry_fit import fit_isometry, fit_report
from .utils import format_angle, parse_angle
from .verification import CHECKS, run_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

RANGE_CURVES = ("beta", "h", "gamma0", "proj-diam", "case4-gamma", "beta-pair")
SEQUENCE_CURVES = ("case2", "case5")


class UsageError(AngleForgeError):
    """Arguments parse but do not make sense together."""


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_angle, help="Angle in radians, e.g. 0.7 or 3pi/8")
    common.add_argument("--beta", type=_angle, help="Second angle")
    common.add_argument("--gamma", type=_angle, help="Third angle")
    common.add_argument("--space", choices=SPACES, default="sphere-real")
    common.add_argument("--dim", type=int, default=3, help="Dimension of the space (default: 3)")
    common.add_argument("--grid", type=int, default=8, help="Points per axis of sweeps")
    common.add_argument(
        "--resolution", type=int, default=200, help="Oracle grid resolution (default: 200)"
    )
    common.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    common.add_argument("--tol", type=float, default=1e-9, help="Angle tolerance")
    common.add_argument("--out", help="Output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="Logging level for stderr (default: WARNING)",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the verify, closure, fit and curves subcommands."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="angleforge",
        description="Rigidity certificates and lemma checks for angle-preserving maps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="Check a lemma against its oracle")
    verify.add_argument("lemma", help=f"One of: {', '.join(CHECKS)}")

    sub.add_parser("closure", parents=[common], help="Derive a rigidity certificate")

    fit = sub.add_parser("fit", parents=[common], help="Fit a Wigner symmetry to a sample file")
    fit.add_argument("input", help="Line-map sample (JSON)")

    curves = sub.add_parser("curves", parents=[common], help="Emit a plot-ready data series")
    curves.add_argument("which", choices=RANGE_CURVES + SEQUENCE_CURVES)
    curves.add_argument("bounds", nargs="+", help="lo hi n, or -- n for sequences")
    return parser


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV with a header row and 17 significant digits, independent of locale."""
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def _emit(cfg: RunConfig, payload: Dict[str, Any], frame: pd.DataFrame) -> None:
    if cfg.fmt == "csv":
        text = frame_to_csv(frame)
    else:
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
        logger.info(f"wrote {cfg.command} output to {cfg.out}")
    else:
        sys.stdout.write(text)


def cmd_verify(lemma: str, cfg: RunConfig) -> int:
    """Run one registered lemma check and write its report."""
    report = run_check(lemma, cfg)
    _emit(cfg, report.to_dict(), report.rows)
    if not report.ok:
        logger.error(f"{lemma}: {report.disagreements} disagreements outside boundary zones")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_closure(cfg: RunConfig) -> int:
    """Run the closure engine on --alpha and write the certificate."""
    if cfg.alpha is None:
        raise UsageError("closure needs --alpha")
    cert = closure(cfg.alpha, cfg.context, cfg.dim)
    replayed = replay(cert)
    payload = cert.to_dict()
    payload["replay"] = replayed.to_dict()
    _emit(cfg, payload, cert.to_frame())
    if cert.verdict is Verdict.INCONCLUSIVE:
        print(f"inconclusive: {cert.note}", file=sys.stderr)
        return EXIT_NEGATIVE
    if not replayed.ok:
        logger.error(f"certificate failed replay: {replayed.failures}")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_fit(path: str, cfg: RunConfig) -> int:
    """Fit the operator implementing a sampled line map."""
    sample = load_line_map_sample(path)
    try:
        fitted = fit_isometry(sample, tol=cfg.tol)
    except AngleInconsistentSampleError as exc:
        logger.error(str(exc))
        print(f"inconsistent sample: pair {exc.pair[0]},{exc.pair[1]}", file=sys.stderr)
        return EXIT_NEGATIVE
    except RankDeficientError as exc:
        logger.error(str(exc))
        print(f"cannot fit: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    report = fit_report(fitted, sample)
    frame = pd.DataFrame(report["matrix"])
    frame.columns = [f"c{j}" for j in range(frame.shape[1])]
    frame.insert(0, "row", range(len(frame)))
    frame["kind"] = fitted.kind.value
    frame["residual"] = fitted.residual
    _emit(cfg, report, frame)
    return EXIT_OK


def _needs_alpha(cfg: RunConfig, which: str) -> float:
    if cfg.alpha is None:
        raise UsageError(f"curve {which} needs --alpha")
    return cfg.alpha


def _range_curve(which: str, xs: np.ndarray, cfg: RunConfig) -> pd.DataFrame:
    if which == "beta":
        return pd.DataFrame({"alpha": xs, "beta": [beta(x) for x in xs]})
    if which == "gamma0":
        return pd.DataFrame({"alpha": xs, "gamma0": [gamma0(x) for x in xs]})
    if which == "case4-gamma":
        return pd.DataFrame({"alpha": xs, "case4_gamma": [case4_gamma(x) for x in xs]})
    if which == "beta-pair":
        pairs = [beta_pair(x) for x in xs]
        return pd.DataFrame(
            {"alpha": xs, "beta1": [p[0] for p in pairs], "beta2": [p[1] for p in pairs]}
        )
    alpha = _needs_alpha(cfg, which)
    func: Callable[[float, float], float] = sphere_cap_diam if which == "h" else proj_diam
    column = "h" if which == "h" else "proj_diam"
    return pd.DataFrame({"gamma": xs, column: [func(alpha, x) for x in xs], "alpha": alpha})


def _sequence_curve(which: str, n: int) -> pd.DataFrame:
    index = np.arange(1, n + 1)
    if which == "case2":
        return pd.DataFrame({"n": index, "alpha": case2_recursion(n)})
    return pd.DataFrame(
        {
            "n": index,
            "alpha": case5_recursion(n),
            "explicit": [case5_explicit(k) for k in index],
        }
    )


def _count(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise UsageError(f"point count must be an integer, got {text!r}") from exc
    if n < 2:
        raise UsageError(f"need at least 2 points, got {n}")
    return n


def cmd_curves(which: str, bounds: Sequence[str], cfg: RunConfig) -> int:
    """Tabulate one closed-form curve or recursion."""
    args = [b for b in bounds if b != "--"]
    if which in SEQUENCE_CURVES:
        if len(args) != 1:
            raise UsageError(f"usage: curves {which} -- n")
        frame = _sequence_curve(which, _count(args[0]))
    else:
        if len(args) != 3:
            raise UsageError(f"usage: curves {which} lo hi n")
        try:
            lo, hi = parse_angle(args[0]), parse_angle(args[1])
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if not lo < hi:
            raise UsageError(f"empty range [{format_angle(lo)}, {format_angle(hi)}]")
        frame = _range_curve(which, np.linspace(lo, hi, _count(args[2])), cfg)
    _emit(cfg, {"curve": which, "rows": frame.to_dict(orient="records")}, frame)
    return EXIT_OK


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler()],
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    _configure_logging(args.log_level)
    if args.format is None:
        args.format = "csv" if args.command == "curves" else "json"
    cfg = RunConfig.from_args(args)
    if cfg.alpha is not None and not math.isfinite(cfg.alpha):
        print("error: --alpha must be finite", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "verify":
            return cmd_verify(args.lemma, cfg)
        if args.command == "closure":
            return cmd_closure(cfg)
        if args.command == "fit":
            return cmd_fit(args.input, cfg)
        return cmd_curves(args.which, args.bounds, cfg)
    except (SampleFormatError, UsageError, DomainError) as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        logger.error(f"cannot access file: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AngleForgeError as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
