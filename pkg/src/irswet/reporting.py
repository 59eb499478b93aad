"""Deterministic result emission: CSV tables and JSON experiment manifests.

Outputs carry no wall-clock state, so the same resolved configuration and
seed produce byte-identical files; reproducibility is then checkable with a
plain hash. Writes go through a temp file and os.replace so a crashed run
never leaves a partial table behind.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _pkg_version
from .backend import active_backend

MANIFEST_SCHEMA_VERSION = 1


def format_cell(value) -> str:
    """Canonical text for one CSV cell; floats use shortest round-trip.

    numpy scalars are normalized first so a cell never renders as 'True' or
    'np.float64(0.5)' depending on which code path produced it.
    """
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, columns: list[str], rows, meta: dict | None = None) -> int:
    """Write a table with '# key=value' preamble lines; returns the row count.

    Cells containing separators or quotes are not expected from any
    experiment here, so cells are joined directly; an embedded comma or
    newline is a programming error and raises.
    """
    lines = []
    for key in sorted(meta or {}):
        lines.append(f"# {key}={format_cell((meta or {})[key])}")
    lines.append(",".join(columns))
    count = 0
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row width {len(row)} != {len(columns)} columns")
        cells = [format_cell(v) for v in row]
        for c in cells:
            if "," in c or "\n" in c or '"' in c:
                raise ValueError(f"cell {c!r} needs quoting; widen format_cell")
        lines.append(",".join(cells))
        count += 1
    _atomic_write(path, "\n".join(lines) + "\n")
    return count


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass
class ManifestBuilder:
    """Collects everything one experiment run should record."""

    subcommand: str
    seed: int
    config_hash: str
    config_flat: dict
    parameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    def add_output(self, path: str, rows: int) -> None:
        self.outputs.append({
            "file": os.path.basename(path),
            "rows": rows,
            "sha256": file_sha256(path),
        })

    def write(self, path: str) -> dict:
        doc = {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "package_version": _pkg_version,
            "backend": active_backend(),
            "subcommand": self.subcommand,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "config": self.config_flat,
            "parameters": self.parameters,
            "diagnostics": self.diagnostics,
            "outputs": self.outputs,
        }
        _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True,
                                       default=_json_default) + "\n")
        return doc


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def load_manifest(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("schema_version")
    if version != MANIFEST_SCHEMA_VERSION:
        raise ValueError(f"manifest schema {version} unsupported "
                         f"(expected {MANIFEST_SCHEMA_VERSION})")
    return doc
