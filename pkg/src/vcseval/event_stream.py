"""Canonical event stream: parsing, validation, splitting, thresholding.

A stream is a chronologically ordered sequence of timestamped binary
predictions. Two text formats are supported:

* JSONL: one object per line with keys ``t`` (number), ``y`` (0 or 1),
  ``p`` (number in [0,1]) and optional ``id`` (string). Unknown keys are
  ignored.
* CSV: required header exactly ``t,y,p`` (optionally ``t,y,p,id``),
  comma separated, ``.`` decimal point.

Records with equal timestamps keep input order everywhere. Unsorted
input is rejected unless the caller explicitly opts into a stable sort.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSplit,
    EmptyInput,
    MalformedRecord,
    UnsortedInput,
)


@dataclass(frozen=True)
class PredictionRecord:
    """One timestamped test event with ground truth and predicted score."""

    t: float
    y: int
    p: float
    id: str


class EvalStream:
    """Ordered prediction records over the test period [t_start, t_end]."""

    def __init__(self, records):
        records = tuple(records)
        if not records:
            raise EmptyInput("stream must contain at least one record")
        t = np.array([r.t for r in records], dtype=np.float64)
        if np.any(np.diff(t) < 0):
            raise UnsortedInput("timestamps must be nondecreasing")
        self.records = records
        self.t = t
        self.y = np.array([r.y for r in records], dtype=np.int64)
        self.p = np.array([r.p for r in records], dtype=np.float64)
        self.ids = tuple(r.id for r in records)
        self.t_start = float(t[0])
        self.t_end = float(t[-1])

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


class DisagreementSet:
    """The (id, t) entries where the thresholded prediction differs from y."""

    def __init__(self, entries):
        self.entries = tuple(entries)
        self.ids = tuple(e[0] for e in self.entries)
        self.times = np.array([e[1] for e in self.entries], dtype=np.float64)

    @property
    def size(self):
        return len(self.entries)

    def __len__(self):
        return len(self.entries)


def _validate_fields(t, y, p, line):
    try:
        t = float(t)
        y = float(y)
        p = float(p)
    except (TypeError, ValueError):
        raise MalformedRecord(line, "t, y, p must be numeric") from None
    if not np.isfinite(t) or t < 0:
        raise MalformedRecord(line, f"t must be finite and >= 0, got {t!r}")
    if y not in (0.0, 1.0):
        raise MalformedRecord(line, f"y must be 0 or 1, got {y!r}")
    if not np.isfinite(p) or not 0.0 <= p <= 1.0:
        raise MalformedRecord(line, f"p must be in [0,1], got {p!r}")
    return t, int(y), p


def _parse_jsonl(text):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(lineno, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise MalformedRecord(lineno, "each line must be a JSON object")
        missing = [k for k in ("t", "y", "p") if k not in obj]
        if missing:
            raise MalformedRecord(lineno, f"missing keys: {', '.join(missing)}")
        rec_id = obj.get("id")
        if rec_id is not None and not isinstance(rec_id, str):
            raise MalformedRecord(lineno, "id must be a string")
        rows.append((lineno, obj["t"], obj["y"], obj["p"], rec_id))
    return rows


def _parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("no CSV header") from None
    header = [h.strip() for h in header]
    if header not in (["t", "y", "p"], ["t", "y", "p", "id"]):
        raise MalformedRecord(1, f"header must be 't,y,p' or 't,y,p,id', got {','.join(header)!r}")
    has_id = len(header) == 4
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise MalformedRecord(lineno, f"expected {len(header)} fields, got {len(row)}")
        rec_id = row[3].strip() if has_id else None
        rows.append((lineno, row[0], row[1], row[2], rec_id or None))
    return rows


def parse_records(data, format, sort=False):
    """Parse bytes or text in the given format into an EvalStream.

    Parameters
    ----------
    data : bytes or str
        Raw JSONL or CSV content.
    format : {"jsonl", "csv"}
    sort : bool
        When true, records are stably sorted by timestamp instead of
        rejecting unsorted input.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if format == "jsonl":
        rows = _parse_jsonl(data)
    elif format == "csv":
        rows = _parse_csv(data)
    else:
        raise ValueError(f"unknown format {format!r}")
    if not rows:
        raise EmptyInput("no records in input")
    records = []
    for index, (lineno, t, y, p, rec_id) in enumerate(rows):
        t, y, p = _validate_fields(t, y, p, lineno)
        records.append(PredictionRecord(t, y, p, rec_id if rec_id is not None else str(index)))
    if sort:
        order = np.argsort([r.t for r in records], kind="stable")
        records = [records[i] for i in order]
    return EvalStream(records)


def serialize_records(stream, format):
    """Render a stream back to JSONL or CSV text (inverse of parse_records)."""
    if format == "jsonl":
        lines = [
            json.dumps({"t": r.t, "y": r.y, "p": r.p, "id": r.id})
            for r in stream.records
        ]
        return "\n".join(lines) + "\n"
    if format == "csv":
        lines = ["t,y,p,id"]
        for r in stream.records:
            lines.append(f"{r.t!r},{r.y},{r.p!r},{r.id}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def chronological_split(stream, ratios):
    """Split a stream into (train, val, test) by time order.

    Boundaries sit at floor(r_train*M) and floor((r_train+r_val)*M) so
    split sizes are reproducible exactly across implementations.
    """
    r_train, r_val, r_test = ratios
    if min(r_train, r_val, r_test) <= 0:
        raise ValueError("split ratios must be positive")
    if abs(r_train + r_val + r_test - 1.0) > 1e-9:
        raise ValueError("split ratios must sum to 1")
    m = len(stream)
    i1 = int(np.floor(r_train * m))
    i2 = int(np.floor((r_train + r_val) * m))
    if i1 < 1 or i2 - i1 < 1 or m - i2 < 1:
        raise DegenerateSplit(f"split of {m} records by {ratios} leaves an empty part")
    parts = (stream.records[:i1], stream.records[i1:i2], stream.records[i2:])
    return tuple(EvalStream(p) for p in parts)


def threshold_labels(stream, threshold=0.5):
    """Predicted labels: 1 where p >= threshold, else 0."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    return (stream.p >= threshold).astype(np.int64)


def disagreement_set(stream, threshold=0.5):
    """Entries where the thresholded prediction disagrees with ground truth."""
    y_hat = threshold_labels(stream, threshold)
    mask = y_hat != stream.y
    entries = [(stream.ids[i], float(stream.t[i])) for i in np.flatnonzero(mask)]
    return DisagreementSet(entries)
