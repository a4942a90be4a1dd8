"""Reading and writing line-map sample files."""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from .config import MAX_DIM
from .errors import AngleForgeError, SampleFormatError
from .models import Field, Line, LineMapSample

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_BLANK = re.compile(r"[ \t\n\r]*")


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def _skip(text: str, pos: int) -> int:
    return _BLANK.match(text, pos).end()


def _element_lines(text: str, pos: int, decoder: json.JSONDecoder) -> List[int]:
    """1-based start line of each element of the array opening at pos."""
    found = []
    pos = _skip(text, pos + 1)
    if text.startswith("]", pos):
        return found
    while True:
        found.append(_line_of(text, pos))
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip(text, pos)
        if not text.startswith(",", pos):
            return found
        pos = _skip(text, pos + 1)


def _pair_lines(text: str) -> List[int]:
    """
    Line numbers of the entries of the top-level "pairs" array.

    Expects text that already decodes as a JSON object. Duplicate keys resolve to the last
    occurrence, as json.loads does.
    """
    decoder = json.JSONDecoder()
    found: List[int] = []
    pos = _skip(text, 0)
    if not text.startswith("{", pos):
        return found
    pos = _skip(text, pos + 1)
    while text.startswith('"', pos):
        key, pos = decoder.raw_decode(text, pos)
        pos = _skip(text, _skip(text, pos) + 1)
        if key == "pairs" and text.startswith("[", pos):
            found = _element_lines(text, pos, decoder)
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip(text, pos)
        if not text.startswith(",", pos):
            break
        pos = _skip(text, pos + 1)
    return found


def _vector(raw: Any, fld: Field, dim: int) -> np.ndarray:
    if not isinstance(raw, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
    ):
        raise ValueError("a vector must be a flat array of numbers")
    width = 2 * dim if fld is Field.COMPLEX else dim
    if len(raw) != width:
        raise ValueError(f"expected {width} numbers, got {len(raw)}")
    arr = np.asarray(raw, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    if fld is Field.COMPLEX:
        return arr[0::2] + 1j * arr[1::2]
    return arr


def parse_line_map_sample(text: str) -> LineMapSample:
    """
    Parse the JSON sample format.

    {"field": "real"|"complex", "dim": n, "pairs": [{"in": [...], "out": [...]}, ...]} with
    complex vectors given as 2n numbers, (re, im) interleaved. Vectors are normalized on load.

    Raises:
        SampleFormatError: Malformed JSON or content, or a repeated input line, with the line
            number where known
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SampleFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from exc

    if not isinstance(data, dict):
        raise SampleFormatError("top level must be an object", 1)
    try:
        fld = Field(data.get("field"))
    except ValueError as exc:
        got = data.get("field")
        raise SampleFormatError(f"field must be 'real' or 'complex', got {got!r}") from exc
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or not 2 <= dim <= MAX_DIM:
        raise SampleFormatError(f"dim must be an integer in [2, {MAX_DIM}], got {dim!r}")
    pairs = data.get("pairs")
    if not isinstance(pairs, list):
        raise SampleFormatError("pairs must be an array")

    lines = _pair_lines(text)
    parsed = []
    for idx, entry in enumerate(pairs):
        where = lines[idx] if idx < len(lines) else None
        if not isinstance(entry, dict) or "in" not in entry or "out" not in entry:
            raise SampleFormatError(f"pair {idx} needs 'in' and 'out'", where)
        try:
            src = Line.from_vector(_vector(entry["in"], fld, dim), fld)
            dst = Line.from_vector(_vector(entry["out"], fld, dim), fld)
        except (ValueError, AngleForgeError) as exc:
            raise SampleFormatError(f"pair {idx}: {exc}", where) from exc
        for prev, (earlier, _) in enumerate(parsed):
            if earlier.same_as(src):
                raise SampleFormatError(f"pair {idx} repeats the input line of pair {prev}", where)
        parsed.append((src, dst))

    logger.debug(f"parsed {len(parsed)} pairs over {fld.value} dim {dim}")
    return LineMapSample(field=fld, dim=dim, pairs=parsed)


def load_line_map_sample(path: PathLike) -> LineMapSample:
    """Read a sample file."""
    text = Path(path).read_text(encoding="utf-8")
    sample = parse_line_map_sample(text)
    logger.info(f"loaded {len(sample)} pairs from {path}")
    return sample


def _flatten(vec: np.ndarray, fld: Field) -> List[float]:
    if fld is Field.COMPLEX:
        return [float(x) for z in vec for x in (z.real, z.imag)]
    return [float(x) for x in np.real(vec)]


def sample_to_dict(sample: LineMapSample) -> Dict[str, Any]:
    return {
        "field": sample.field.value,
        "dim": sample.dim,
        "pairs": [
            {"in": _flatten(src.vector, sample.field), "out": _flatten(dst.vector, sample.field)}
            for src, dst in sample.pairs
        ],
    }


def dump_line_map_sample(sample: LineMapSample, path: PathLike) -> None:
    """Write a sample in the JSON format read by load_line_map_sample."""
    Path(path).write_text(json.dumps(sample_to_dict(sample), indent=2) + "\n", encoding="utf-8")
    logger.info(f"wrote {len(sample)} pairs to {path}")
