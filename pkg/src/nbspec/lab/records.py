"""Trial records and their CSV / JSON serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import EmitError

SCHEMA = "nbspec.trial-records"
SCHEMA_VERSION = 1

SCALAR_COLUMNS = (
    "experiment", "stream", "seed", "trial", "n", "p",
    "e_opnorm", "kappa", "spectral_variation", "bl_distance", "ks_statistic", "error",
)
SCATTER_COLUMNS = ("re_H", "im_H", "re_H0", "im_H0", "matched_distance")


@dataclass
class TrialRecord:
    experiment: str
    stream: int
    seed: int
    trial: int
    n: int
    p: float
    eig_H: list = field(default_factory=list)
    eig_H0: list = field(default_factory=list)
    e_opnorm: float | None = None
    kappa: float | None = None
    spectral_variation: float | None = None
    bl_distance: float | None = None
    ks_statistic: float | None = None
    bounds: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def fmt17(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    return x


def record_to_dict(rec: TrialRecord) -> dict:
    d = asdict(rec)
    d["eig_H"] = [[float(z.real), float(z.imag)] for z in rec.eig_H]
    d["eig_H0"] = [[float(z.real), float(z.imag)] for z in rec.eig_H0]
    return _jsonable(d)


def record_from_dict(d: dict) -> TrialRecord:
    d = dict(d)
    d["eig_H"] = [complex(a, b) for a, b in d.get("eig_H", [])]
    d["eig_H0"] = [complex(a, b) for a, b in d.get("eig_H0", [])]
    return TrialRecord(**d)


def records_to_json(records, config: dict | None = None) -> str:
    doc = {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "config": _jsonable(config or {}),
        "records": [record_to_dict(r) for r in records],
    }
    # json writes floats with repr, which round-trips exactly
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def records_from_json(text: str) -> list[TrialRecord]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r} v{doc.get('schema_version')!r}")
    return [record_from_dict(d) for d in doc["records"]]


def _flat_columns(records) -> list[str]:
    extra = set()
    for r in records:
        extra.update(f"bounds.{k}" for k in r.bounds)
        extra.update(f"metrics.{k}" for k in r.metrics)
        extra.update(f"flags.{k}" for k in r.flags)
    return list(SCALAR_COLUMNS) + sorted(extra)


def records_to_csv(records) -> str:
    cols = _flat_columns(records)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        row = []
        for c in cols:
            if "." in c:
                group, key = c.split(".", 1)
                val = getattr(r, group).get(key)
            else:
                val = getattr(r, c)
            if isinstance(val, (list, tuple)):
                val = " ".join(fmt17(v) for v in val)
            row.append(fmt17(val))
        w.writerow(row)
    return buf.getvalue()


def emit(records, fmt: str, out_dir, stem: str, config: dict | None = None) -> list[Path]:
    """Write ``<stem>.json`` and/or ``<stem>.csv`` under ``out_dir``."""
    records = list(records)
    if not records:
        raise EmitError("no records to emit")
    if fmt not in ("csv", "json", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    out_dir = Path(out_dir)
    payloads = []
    if fmt in ("json", "both"):
        payloads.append((out_dir / f"{stem}.json", records_to_json(records, config)))
    if fmt in ("csv", "both"):
        payloads.append((out_dir / f"{stem}.csv", records_to_csv(records)))
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for path, text in payloads:
            path.write_text(text)
    except OSError as exc:
        raise EmitError(str(exc)) from exc
    return [p for p, _ in payloads]


def scatter_rows(eig_H, eig_H0, matched) -> list[tuple[float, ...]]:
    return [(a.real, a.imag, b.real, b.imag, float(d)) for a, b, d in zip(eig_H, eig_H0, matched)]


def write_scatter_csv(path, eig_H, eig_H0, matched) -> Path:
    """One row per eigenvalue pair: ``re_H, im_H, re_H0, im_H0, matched_distance``."""
    if len(eig_H) == 0 or len(eig_H0) == 0:
        raise EmitError("empty eigenvalue list")
    if not len(eig_H) == len(eig_H0) == len(matched):
        raise EmitError("eigenvalue lists differ in length")
    lines = [",".join(SCATTER_COLUMNS)]
    lines += [",".join(f"{v:.17g}" for v in row) for row in scatter_rows(eig_H, eig_H0, matched)]
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise EmitError(str(exc)) from exc
    return path


def read_scatter_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != SCATTER_COLUMNS:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    return np.array([[float(v) for v in r] for r in rows[1:]])
