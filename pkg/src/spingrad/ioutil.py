"""Serialization helpers shared by the analysis and CLI layers.

All floats are written with 17 significant digits so that every emitted
value round-trips exactly; file writes are atomic (temp file + rename).
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

SCHEMA_COMMENT = "# schema_version={version}"


def format_value(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header: list[str], rows, schema_version: int) -> None:
    lines = [SCHEMA_COMMENT.format(version=schema_version), ",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_csv(path: Path) -> tuple[int, list[str], list[list[str]]]:
    lines = Path(path).read_text().splitlines()
    version = int(lines[0].split("=", 1)[1])
    header = lines[1].split(",")
    return version, header, [line.split(",") for line in lines[2:] if line]


def canonical_checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
