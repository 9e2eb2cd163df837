"""Flat-file artifacts: CSV with ``#`` metadata lines, JSON with a meta/data split.

Floats are written with ``repr`` so every value reads back bit-for-bit.
Nothing time- or host-dependent goes into the metadata, so identical
inputs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json

import numpy as np

from . import __version__

TOOL = "sfarates"


def _plain(obj):
    """Convert numpy scalars/arrays and tuples to JSON-native types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def metadata(task, config, field_params=None, **extra) -> dict:
    meta = {
        "tool": TOOL,
        "version": __version__,
        "task": task,
        "config_hash": config_hash(config),
        "config": config,
        "field_params": None if field_params is None else field_params.as_dict(),
    }
    meta.update(extra)
    return _plain(meta)


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def csv_text(columns, rows, meta) -> str:
    buf = io.StringIO()
    for key in meta:
        buf.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def json_text(meta, data) -> str:
    return json.dumps({"meta": _plain(meta), "data": _plain(data)}, indent=1, sort_keys=False) + "\n"


def read_csv(text):
    """Parse :func:`csv_text` output into ``(meta, columns, rows)``.

    Numeric cells come back as ``int`` or ``float``; everything else as text.
    """
    meta = {}
    lines = text.splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        key, _, value = line[2:].partition(": ")
        meta[key] = json.loads(value)
    else:
        body_start = len(lines)
    reader = csv.reader(lines[body_start:])
    columns = next(reader, [])
    rows = [[_cell(c) for c in r] for r in reader]
    return meta, columns, rows


def _cell(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_json(text):
    doc = json.loads(text)
    return doc["meta"], doc["data"]

