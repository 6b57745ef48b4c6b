"""Deterministic CSV and JSON emission.

All numbers are written with 17 significant digits and '.' as the decimal
separator; JSON carries numeric data as decimal strings so the rendered
bytes are identical across platforms and runs.  Every file embeds the
resolved parameter set that produced it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "1"


def fmt(x) -> str:
    """17-significant-digit decimal rendering of one real number."""
    return format(float(x), ".17g")


def _provenance_value(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, complex):
        return {"re": fmt(v.real), "im": fmt(v.imag)}
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_provenance_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _provenance_value(x) for k, x in sorted(v.items())}
    return str(v)


def _provenance_comment_lines(params: dict) -> list[str]:
    lines = [f"# schema_version = {SCHEMA_VERSION}"]
    for key, value in sorted(params.items()):
        rendered = json.dumps(_provenance_value(value), sort_keys=True)
        lines.append(f"# {key} = {rendered}")
    return lines


def write_csv(path: Path, columns: list[str], rows, params: dict) -> None:
    """Write a provenance-headed CSV with deterministic formatting."""
    lines = _provenance_comment_lines(params)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else fmt(cell)
                              for cell in row))
    _write_text(path, "\n".join(lines) + "\n")


def write_json(path: Path, payload: dict, params: dict) -> None:
    """Write a JSON document with numbers rendered as decimal strings."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "parameters": _provenance_value(params),
        **{k: _provenance_value(v) for k, v in payload.items()},
    }
    _write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _write_text(path: Path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write output file {path}: {exc}") from exc
