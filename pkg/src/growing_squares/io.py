"""Reading glyph records, writing dendrograms and stats, generating instances."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .arith import EXACT, Arithmetic
from .clustering import Dendrogram, RunStats
from .geometry import WeightedPoint

HEADER = ["id", "x", "y", "weight"]
GENERATORS = ("uniform", "blobs")
COORD_MAX = 10**6


class InputError(ValueError):
    """Malformed input; the message names the offending line."""


def _number(text, arith: Arithmetic, where: str):
    try:
        value = arith.num(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError(f"{where}: not a number: {text!r}") from None
    if isinstance(value, float) and not math.isfinite(value):
        raise InputError(f"{where}: not a finite number: {text!r}")
    return value


def _record(pid, x, y, w, arith, where) -> WeightedPoint:
    x = _number(x, arith, where)
    y = _number(y, arith, where)
    w = _number(w, arith, where)
    if not w > 0:
        raise InputError(f"{where}: weight must be positive, got {w}")
    return WeightedPoint(pid, x, y, w)


def _is_header(row) -> bool:
    return [c.strip().lower() for c in row] in (HEADER, ["id", "x", "y", "w"], ["x", "y", "weight"], ["x", "y", "w"])


def parse_csv(text: str, arith: Arithmetic = EXACT) -> list[WeightedPoint]:
    """Rows of ``id,x,y,weight`` or ``x,y,weight`` (ids then follow row order)."""
    rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text)), start=1) if r and any(c.strip() for c in r)]
    if rows and _is_header(rows[0][1]):
        rows = rows[1:]
    points = []
    seen = set()
    width = None
    for line, row in rows:
        if width is None:
            width = len(row)
            if width not in (3, 4):
                raise InputError(f"line {line}: expected 3 or 4 columns, got {width}")
        elif len(row) != width:
            raise InputError(f"line {line}: expected {width} columns, got {len(row)}")
        if width == 4:
            try:
                pid = int(row[0])
            except ValueError:
                raise InputError(f"line {line}: id must be an integer: {row[0]!r}") from None
            x, y, w = row[1:]
        else:
            pid = len(points)
            x, y, w = row
        if pid in seen:
            raise InputError(f"line {line}: duplicate id {pid}")
        seen.add(pid)
        points.append(_record(pid, x, y, w, arith, f"line {line}"))
    return points


def parse_json(text: str, arith: Arithmetic = EXACT) -> list[WeightedPoint]:
    """A JSON array of ``{"id"?, "x", "y", "weight"|"w"}`` objects."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno}: invalid JSON: {e.msg}") from None
    if not isinstance(data, list):
        raise InputError("line 1: expected a JSON array of records")
    points = []
    seen = set()
    for i, rec in enumerate(data):
        where = f"record {i}"
        if not isinstance(rec, dict):
            raise InputError(f"{where}: expected an object")
        try:
            pid = int(rec.get("id", i))
            x, y = rec["x"], rec["y"]
            w = rec["weight"] if "weight" in rec else rec["w"]
        except (KeyError, ValueError, TypeError) as e:
            raise InputError(f"{where}: missing or bad field {e}") from None
        if pid in seen:
            raise InputError(f"{where}: duplicate id {pid}")
        seen.add(pid)
        # json floats go through their text form so 0.1 stays 1/10
        x, y, w = (repr(v) if isinstance(v, float) else v for v in (x, y, w))
        points.append(_record(pid, x, y, w, arith, where))
    return points


def read_points(path, arith: Arithmetic = EXACT) -> list[WeightedPoint]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    if text.lstrip().startswith(("[", "{")):
        return parse_json(text, arith)
    return parse_csv(text, arith)


# -- output -------------------------------------------------------------------


def _num(value, arith: Arithmetic):
    return arith.fmt(value) if arith.exact else float(value)


def dendrogram_to_dict(d: Dendrogram, arith: Arithmetic = EXACT) -> dict:
    return {
        "leaves": [{"id": p.id, "x": _num(p.x, arith), "y": _num(p.y, arith), "w": _num(p.w, arith)} for p in d.leaves],
        "merges": [
            {"t": _num(m.time, arith), "left": m.left, "right": m.right, "result": m.result,
             "x": _num(m.x, arith), "y": _num(m.y, arith), "w": _num(m.w, arith)}
            for m in d.merges
        ],
        "roots": list(d.roots),
    }


def dumps_dendrogram(d: Dendrogram, arith: Arithmetic = EXACT) -> str:
    return json.dumps(dendrogram_to_dict(d, arith), indent=1) + "\n"


def stats_to_dict(stats: RunStats) -> dict:
    return asdict(stats)


def load_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("dendrogram.schema.json").read_text())


# -- generators ---------------------------------------------------------------


def generate(n: int, kind: str = "uniform", weight_ratio: float = 1e4, seed: int = 0,
             blobs: int = 8, spread: float = 2e4) -> list[tuple[int, int, int, int]]:
    """Synthetic glyphs with distinct integer positions in ``[0, 10^6]^2``.

    Weights are log-uniform on ``[1, weight_ratio]`` and rounded to integers,
    so a ratio of 10^4 gives max/min near 10^4 once n is in the hundreds.
    """
    if kind not in GENERATORS:
        raise ValueError(f"unknown generator {kind!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    centers = rng.integers(0, COORD_MAX + 1, size=(blobs, 2))
    seen = set()
    out = []
    while len(out) < n:
        if kind == "uniform":
            x, y = (int(v) for v in rng.integers(0, COORD_MAX + 1, size=2))
        else:
            c = centers[rng.integers(0, blobs)]
            x, y = (int(np.clip(round(v), 0, COORD_MAX)) for v in rng.normal(c, spread))
        if (x, y) in seen:
            continue
        seen.add((x, y))
        w = max(1, int(round(weight_ratio ** rng.random())))
        out.append((len(out), x, y, w))
    return out


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(rows)
    return buf.getvalue()


def write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        import sys

        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
