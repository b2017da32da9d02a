"""Coloring and factor files.

Coloring, JSON::

    {"format": "rainbow-coloring", "version": 1, "r": 2, "n": 3,
     "color_count": 5, "colors": [...]}   # one id per edge, colex order

Coloring, CSV: first line ``r,n`` (the two values), then one color id per
line in colex edge order.

Factor, JSON::

    {"format": "rainbow-factor", "version": 1, "r": 2, "n": 3,
     "edges": [[0, 1], ...], "colors": [...], "method": "...",
     "certificate": {...}}                 # certificate only from solve_k3r

Trace dumps are JSON lines, one :meth:`AugmentationTrace.to_dict` per line.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .core import OneFactor, Params, ProperColoring, ValidationError, validate_edge

COLORING_TAG = "rainbow-coloring"
FACTOR_TAG = "rainbow-factor"
VERSION = 1


def coloring_to_dict(coloring: ProperColoring) -> dict:
    return {
        "format": COLORING_TAG,
        "version": VERSION,
        "r": coloring.params.r,
        "n": coloring.params.n,
        "color_count": coloring.color_count,
        "colors": coloring.colors.tolist(),
    }


def coloring_from_dict(data: Any, normalize: bool = False) -> ProperColoring:
    if not isinstance(data, dict) or data.get("format") != COLORING_TAG:
        raise ValidationError(f"not a {COLORING_TAG} document")
    if data.get("version") != VERSION:
        raise ValidationError("unsupported coloring file version", data.get("version"))
    try:
        params = Params(data["r"], data["n"])
        colors = data["colors"]
    except KeyError as exc:
        raise ValidationError("coloring file is missing a field", exc.args[0]) from exc
    if not isinstance(colors, list) or not all(
        isinstance(c, int) and not isinstance(c, bool) for c in colors
    ):
        raise ValidationError("colors must be a list of integers")
    coloring = ProperColoring(params, np.array(colors, dtype=np.int64))
    if "color_count" in data and data["color_count"] != coloring.color_count:
        raise ValidationError(
            "color_count does not match the number of distinct colors",
            data["color_count"],
        )
    return coloring.normalized() if normalize else coloring


def coloring_to_csv(coloring: ProperColoring) -> str:
    lines = [f"{coloring.params.r},{coloring.params.n}"]
    lines.extend(str(c) for c in coloring.colors.tolist())
    return "\n".join(lines) + "\n"


def coloring_from_csv(text: str, normalize: bool = False) -> ProperColoring:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty coloring file")
    try:
        r, n = (int(v) for v in lines[0].split(","))
        colors = np.array([int(v) for v in lines[1:]], dtype=np.int64)
    except ValueError as exc:
        raise ValidationError("malformed CSV coloring", str(exc)) from exc
    coloring = ProperColoring(Params(r, n), colors)
    return coloring.normalized() if normalize else coloring


def read_coloring(path: str | Path, normalize: bool = False) -> ProperColoring:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError("cannot read coloring file", str(path)) from exc
    if path.suffix.lower() == ".csv":
        return coloring_from_csv(text, normalize)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("coloring file is not valid JSON", str(exc)) from exc
    return coloring_from_dict(data, normalize)


def write_coloring(coloring: ProperColoring, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(coloring_to_csv(coloring))
    else:
        path.write_text(json.dumps(coloring_to_dict(coloring)) + "\n")


def factor_to_dict(
    factor: OneFactor,
    coloring: ProperColoring,
    method: str | None = None,
    certificate: dict | None = None,
) -> dict:
    out = {
        "format": FACTOR_TAG,
        "version": VERSION,
        "r": factor.params.r,
        "n": factor.params.n,
        "edges": factor.to_list(),
        "colors": [coloring.color(e) for e in factor.edges],
    }
    if method is not None:
        out["method"] = method
    if certificate is not None:
        out["certificate"] = certificate
    return out


def factor_edges_from_dict(data: Any) -> tuple[Params, list[tuple[int, ...]], dict]:
    """Parse a factor document without judging it.

    Returns the params, the validated edges (each a sorted tuple) and the raw
    document; whether the edges form a rainbow 1-factor is left to the caller.
    """
    if not isinstance(data, dict) or data.get("format") != FACTOR_TAG:
        raise ValidationError(f"not a {FACTOR_TAG} document")
    try:
        params = Params(data["r"], data["n"])
        raw = data["edges"]
    except KeyError as exc:
        raise ValidationError("factor file is missing a field", exc.args[0]) from exc
    if not isinstance(raw, list):
        raise ValidationError("edges must be a list")
    return params, [validate_edge(e, params) for e in raw], data


def read_factor(path: str | Path) -> tuple[Params, list[tuple[int, ...]], dict]:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError("cannot read factor file", str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("factor file is not valid JSON", str(exc)) from exc
    return factor_edges_from_dict(data)


def write_jsonl(records: Iterable[dict], path: str | Path) -> int:
    count = 0
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
            count += 1
    return count
