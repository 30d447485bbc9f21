"""Configuration files, canonical JSON and CSV tables with metadata headers.

Configs are JSON objects with an integer ``schema_version``.  CSV output is
UTF-8 with RFC-4180 quoting, preceded by ``# key: value`` comment lines that
record the tool version and the SHA-256 of the canonical config.  Floats are
written with ``repr`` (shortest round-trip form), so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import __version__
from .errors import ValidationError

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "canonical_json",
    "config_hash",
    "load_config",
    "parse_config",
    "format_value",
    "csv_text",
    "read_csv",
    "write_text",
]

SCHEMA_VERSION = 1


class ConfigError(ValidationError):
    """Malformed configuration; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def canonical_json(obj: Any) -> str:
    """Sorted-key, compact JSON used for hashing."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(config: Mapping) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse and check the envelope of a JSON config."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(source, f"invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigError(source, "top level must be an object")
    if "schema_version" not in data:
        raise ConfigError("schema_version", "missing")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {data['schema_version']!r}, expected {SCHEMA_VERSION}")
    return data


def load_config(path: str | Path) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(p), f"cannot read config ({exc.strerror})") from None
    return parse_config(text, str(p))


def format_value(v: Any) -> str:
    """Deterministic text form of a table cell."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(float(v))
    if hasattr(v, "item"):
        return format_value(v.item())
    return str(v)


def csv_text(rows: Iterable[Mapping], columns: Sequence[str], metadata: Mapping[str, Any] | None = None) -> str:
    """Render rows as CSV, preceded by a ``#`` metadata block."""
    buf = io.StringIO()
    meta = {"tool": f"hyperloc {__version__}"}
    meta.update(metadata or {})
    for k, v in meta.items():
        buf.write(f"# {k}: {format_value(v)}\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Split CSV text into its metadata block and rows (string cells)."""
    meta, body = {}, []
    for line in text.splitlines(keepends=True):
        if line.startswith("#") and not body:
            key, _, val = line[1:].strip().partition(":")
            meta[key.strip()] = val.strip()
        else:
            body.append(line)
    reader = csv.DictReader(io.StringIO("".join(body)))
    return meta, list(reader)


def write_text(path: str | Path, text: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
