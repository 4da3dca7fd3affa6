"""Discovery and validation of experiment artifacts.

An artifact is a CSV file plus a JSON sidecar at <path>.json recording
its kind, column order, metadata, a config echo, and library versions.
The header must match the fixed schema for the kind exactly; any
disagreement is a SchemaError naming the column.  Cells are kept as the
exact strings read from the file, so downstream rendering can echo them
without reformatting; numeric parsing happens only where geometry needs
it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError, SchemaError

_GRID = ["epsilon_or_delta", "estimate", "ci_low", "ci_high", "trials"]

#: expected CSV header per artifact kind
SCHEMAS = {
    "tail": _GRID,
    "grid": _GRID,
    "small_ball": _GRID,
    "tensorization": _GRID,
    "corollary_events": ["event"] + _GRID,
    "opnorm_scaling": ["n", "d", "trial", "value"],
    "compressible": ["trial", "infimum_sq", "infimum_sq_over_n"],
    "example1": ["quantity", "estimate", "ci_low", "ci_high", "trials"],
}


@dataclass(frozen=True)
class Artifact:
    """One validated artifact: raw string cells, column-major."""

    name: str
    kind: str
    columns: dict
    sidecar: dict
    rows: int


def _check_header(name: str, header: list, expected: list) -> None:
    for col in expected:
        if col not in header:
            raise SchemaError(f"{name}: missing column '{col}'")
    for col in header:
        if col not in expected:
            raise SchemaError(f"{name}: unexpected column '{col}'")
    if header != expected:
        first = next(c for c, e in zip(header, expected) if c != e)
        raise SchemaError(f"{name}: column '{first}' out of order, expected header {expected}")


def load_artifact(path) -> Artifact:
    """Validate and load one CSV + sidecar pair."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"{path.name}: artifact file not found")
    sidecar_path = path.with_name(path.name + ".json")
    if not sidecar_path.is_file():
        raise SchemaError(f"{path.name}: missing sidecar {sidecar_path.name}")
    try:
        sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{sidecar_path.name}: malformed JSON sidecar") from exc
    kind = sidecar.get("kind")
    if kind not in SCHEMAS:
        raise SchemaError(f"{path.name}: unknown artifact kind {kind!r}")

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty CSV, no header row") from None
        rows = list(reader)

    _check_header(path.name, header, SCHEMAS[kind])
    if sidecar.get("columns") != header:
        raise SchemaError(
            f"{path.name}: sidecar columns {sidecar.get('columns')} disagree with CSV header"
        )
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(
                f"{path.name}: row {i + 1} has {len(row)} cells, expected {len(header)}"
            )
    columns = {col: [row[j] for row in rows] for j, col in enumerate(header)}
    return Artifact(
        name=path.stem, kind=kind, columns=columns, sidecar=sidecar, rows=len(rows)
    )


def _lcd_payload(path: Path) -> dict | None:
    """A standalone JSON with found/lcd keys is an LCD scan result."""
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError, OSError):
        return None
    if not isinstance(obj, dict) or not {"found", "lcd"} <= set(obj):
        return None
    return {"name": path.stem, **obj}


def discover(in_dir) -> tuple[list, list]:
    """Collect every renderable input under in_dir.

    A manifest.json (written by the harness's report-data command) fixes
    the artifact order and cross-checks kinds; without one, every *.csv
    in the directory is taken in sorted order.  Standalone LCD payload
    JSONs become table rows.  Nothing renderable is an error, not an
    empty report.
    """
    in_dir = Path(in_dir)
    if not in_dir.is_dir():
        raise InputError(f"input directory {in_dir} does not exist")

    artifacts = []
    manifest_path = in_dir / "manifest.json"
    if manifest_path.is_file():
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise SchemaError("manifest.json: malformed JSON") from exc
        for entry in manifest.get("artifacts", []):
            art = load_artifact(in_dir / entry["csv"])
            if art.kind != entry.get("kind"):
                raise SchemaError(
                    f"{entry['csv']}: manifest kind {entry.get('kind')!r} "
                    f"disagrees with sidecar kind {art.kind!r}"
                )
            artifacts.append(art)
    else:
        for path in sorted(in_dir.glob("*.csv")):
            artifacts.append(load_artifact(path))

    lcd_rows = []
    for path in sorted(in_dir.glob("*.json")):
        if path.name == "manifest.json" or path.name.endswith(".csv.json"):
            continue
        payload = _lcd_payload(path)
        if payload is not None:
            lcd_rows.append(payload)

    if not artifacts and not lcd_rows:
        raise InputError(f"nothing to render: no artifacts found in {in_dir}")
    return artifacts, lcd_rows
