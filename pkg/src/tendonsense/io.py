"""File formats: JSONL trace corpora, CSV feature tables, JSON reports.

Floats are serialized as their shortest round-trip decimal representation
(Python's repr), lines end with LF, and files are written atomically via a
temp file and rename, so equal in-memory values always produce byte-identical
files.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile

import numpy as np

from .core import (
    STIFFNESS,
    TEXTURE,
    ClassLabel,
    Dataset,
    FeatureVector,
    StrainTrace,
    build_dataset,
    label_for,
)
from .errors import FormatError, UnknownLabelError
from .features import STIFFNESS_FEATURE_NAMES
from .stats import SignificanceProfile

TRACE_FIELDS = ("id", "kind", "mode", "label", "fs_hz", "samples")


def atomic_write_text(path: str, text: str) -> None:
    """Write text through a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# trace corpora (JSONL, one record per trial)

def trace_to_record(trace: StrainTrace) -> dict:
    record = {
        "id": trace.trial_id,
        "kind": trace.trial_kind,
        "mode": trace.contact_mode,
        "label": trace.label.name if trace.label else None,
        "fs_hz": float(trace.sample_rate_hz),
        "samples": [float(v) for v in trace.samples],
    }
    if trace.seed is not None:
        record["seed"] = int(trace.seed)
    return record


def record_to_trace(record: dict) -> StrainTrace:
    missing = [f for f in TRACE_FIELDS if f not in record]
    if missing:
        raise FormatError(f"trace record missing fields: {missing}")
    kind = record["kind"]
    if kind not in (TEXTURE, STIFFNESS):
        raise FormatError(f"unknown trial kind {kind!r}")
    if record["mode"] not in ("FC", "AC"):
        raise FormatError(f"unknown contact mode {record['mode']!r}")
    label = None
    if record["label"] is not None:
        try:
            label = label_for(kind, record["label"])
        except UnknownLabelError as err:
            raise FormatError(str(err)) from err
    if not isinstance(record["samples"], list) or not record["samples"]:
        raise FormatError(f"record {record['id']!r} has no samples")
    fs = record["fs_hz"]
    if not (isinstance(fs, (int, float)) and fs > 0):
        raise FormatError(f"record {record['id']!r} has invalid fs_hz {fs!r}")
    return StrainTrace(
        samples=np.asarray(record["samples"], dtype=np.float64),
        sample_rate_hz=float(fs),
        trial_kind=kind,
        contact_mode=record["mode"],
        label=label,
        trial_id=str(record["id"]),
        seed=record.get("seed"),
    )


def traces_to_jsonl(traces) -> str:
    return "".join(json.dumps(trace_to_record(t)) + "\n" for t in traces)


def write_traces(path: str, traces) -> int:
    traces = list(traces)
    atomic_write_text(path, traces_to_jsonl(traces))
    return len(traces)


def read_traces(path: str) -> list[StrainTrace]:
    traces = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as err:
                raise FormatError(f"{path}:{lineno}: invalid JSON ({err.msg})") from err
            try:
                traces.append(record_to_trace(record))
            except FormatError as err:
                raise FormatError(f"{path}:{lineno}: {err}") from err
    if not traces:
        raise FormatError(f"{path}: empty corpus")
    return traces


# ---------------------------------------------------------------------------
# feature tables (CSV: feature columns + trailing label column)

def write_features(path: str, ds: Dataset) -> None:
    lines = [",".join([*ds.feature_names, "label"])]
    for fv, lab in ds.rows:
        lines.append(",".join([*(repr(v) for v in fv.values), lab.name]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _infer_task(names: tuple[str, ...]) -> str:
    if names == STIFFNESS_FEATURE_NAMES:
        return STIFFNESS
    if names and all(n.startswith("freq_") for n in names):
        return TEXTURE
    raise FormatError(
        "cannot infer task from feature columns; expected freq_* columns "
        f"or {list(STIFFNESS_FEATURE_NAMES)}"
    )


def read_features(path: str, mode: str = "unknown") -> Dataset:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty feature file") from None
        if len(header) < 2 or header[-1] != "label":
            raise FormatError(f"{path}: header must end with a 'label' column")
        names = tuple(header[:-1])
        task = _infer_task(names)
        rows: list[tuple[FeatureVector, ClassLabel]] = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise FormatError(
                    f"{path}:{lineno}: {len(record)} columns, expected {len(header)}"
                )
            try:
                values = tuple(float(v) for v in record[:-1])
            except ValueError as err:
                raise FormatError(f"{path}:{lineno}: {err}") from err
            try:
                label = label_for(task, record[-1])
            except UnknownLabelError as err:
                raise FormatError(f"{path}:{lineno}: {err}") from err
            rows.append((FeatureVector(values=values, names=names), label))
    if not rows:
        raise FormatError(f"{path}: no feature rows")
    return build_dataset(rows, task=task, mode=mode)


# ---------------------------------------------------------------------------
# evaluation reports (JSON)

def report_to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_report(path: str, doc: dict) -> None:
    atomic_write_text(path, report_to_json(doc))


def read_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as err:
            raise FormatError(
                f"{path}:{err.lineno}:{err.colno}: invalid JSON ({err.msg})"
            ) from err
    for key in ("task", "mode", "tool_version", "config", "labels", "models"):
        if key not in doc:
            raise FormatError(f"{path}: report missing {key!r}")
    if not isinstance(doc["models"], list) or not doc["models"]:
        raise FormatError(f"{path}: report has no model entries")
    for entry in doc["models"]:
        for key in ("name", "mean_accuracy", "run_accuracies", "confusion", "seed"):
            if key not in entry:
                raise FormatError(f"{path}: model entry missing {key!r}")
    return doc


# ---------------------------------------------------------------------------
# significance tables (CSV)

def write_significance(path: str, profile: SignificanceProfile) -> None:
    labels = profile.matrices[0].labels
    pairs = [
        (i, j) for i in range(len(labels)) for j in range(i + 1, len(labels))
    ]
    header = ["feature_name", "avg_p"] + [
        f"p_{labels[i].name}|{labels[j].name}" for i, j in pairs
    ]
    lines = [",".join(header)]
    for f, name in enumerate(profile.feature_names):
        matrix = profile.matrices[f].p
        cells = [name, repr(profile.average_p[f])]
        cells += [repr(float(matrix[i, j])) for i, j in pairs]
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_significance(path: str) -> tuple[list[str], list[str], np.ndarray]:
    """Returns (pair column names, feature names, value matrix incl. avg_p)."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[:2] != ["feature_name", "avg_p"]:
            raise FormatError(f"{path}: not a significance table")
        names = []
        values = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise FormatError(
                    f"{path}:{lineno}: {len(record)} columns, expected {len(header)}"
                )
            names.append(record[0])
            try:
                values.append([float(v) for v in record[1:]])
            except ValueError as err:
                raise FormatError(f"{path}:{lineno}: {err}") from err
    return header[1:], names, np.asarray(values)
