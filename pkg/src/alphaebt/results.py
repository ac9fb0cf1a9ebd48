"""Serialisation of experiment tables (CSV and JSON)."""

from __future__ import annotations

import csv
import io
import json
import os

from .experiments import ExperimentRow

__all__ = ["HEADER", "read_results", "rows_to_records", "write_results"]

HEADER = ("scenario_id", "D", "n", "k", "kl", "method", "alpha", "rejection_rate", "mc_reps", "seed")

_FIELDS = {
    "scenario_id": "scenario_id",
    "D": "D",
    "n": "n",
    "k": "k",
    "kl": "kl_divergence",
    "method": "method",
    "alpha": "alpha",
    "rejection_rate": "rejection_rate",
    "mc_reps": "mc_reps",
    "seed": "seed",
}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def rows_to_records(rows):
    return [{h: getattr(r, _FIELDS[h]) for h in HEADER} for r in rows]


def _render(rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEADER)
        for rec in rows_to_records(rows):
            w.writerow([_fmt(rec[h]) for h in HEADER])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(rows_to_records(rows), indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_results(rows, path, format: str = "csv") -> str:
    """Write experiment rows to `path`; returns the path.

    Floats carry 17 significant digits so they read back bit-exactly, and
    the same rows always produce the same bytes.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    text = _render(rows, format)
    d = os.path.dirname(os.fspath(path))
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return os.fspath(path)


def _row(rec):
    alpha = rec["alpha"]
    return ExperimentRow(
        scenario_id=int(rec["scenario_id"]),
        D=int(rec["D"]),
        n=int(rec["n"]),
        k=float(rec["k"]),
        kl_divergence=float(rec["kl"]),
        method=str(rec["method"]),
        alpha=None if alpha in ("", None) else float(alpha),
        rejection_rate=float(rec["rejection_rate"]),
        mc_reps=int(rec["mc_reps"]),
        seed=int(rec["seed"]),
    )


def read_results(path):
    """Read rows written by :func:`write_results` in either format."""
    with open(path, newline="") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return [_row(rec) for rec in json.loads(text)]
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != HEADER:
        raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
    return [_row(rec) for rec in reader]
