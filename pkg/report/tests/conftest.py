"""Shared fixtures: hand-written artifact files and SVG parse-back helpers.

Artifacts are written as literal CSV/JSON text so the suite exercises
the file-format contract itself and never depends on the producing
package.
"""

import csv
import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

GRID = ["epsilon_or_delta", "estimate", "ci_low", "ci_high", "trials"]
EVENTS = ["event"] + GRID
OPNORM = ["n", "d", "trial", "value"]
EXAMPLE1 = ["quantity", "estimate", "ci_low", "ci_high", "trials"]

TAIL_ROWS = [
    ["0.001", "0.0", "0.0", "0.0461", "80"],
    ["0.01", "0.25", "0.1675", "0.3566", "80"],
    ["0.1", "0.8", "0.7004", "0.8728", "80"],
    ["1.0", "1.0", "0.9539", "1.0", "80"],
]

SVG_NS = "{http://www.w3.org/2000/svg}"


def write_artifact(dirpath, name, kind, columns, rows,
                   config=None, metadata=None, sidecar_columns=None):
    """Write a CSV plus sidecar exactly as the harness format specifies."""
    path = Path(dirpath) / f"{name}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)
    sidecar = {
        "kind": kind,
        "columns": columns if sidecar_columns is None else sidecar_columns,
        "metadata": metadata or {},
        "config": config,
        "versions": {"polycond": "0.1.0", "numpy": "2.2.6", "python": "3.10.12"},
    }
    path.with_name(path.name + ".json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8"
    )
    return path


@pytest.fixture
def tail_dir(tmp_path):
    d = tmp_path / "in"
    d.mkdir()
    write_artifact(d, "tail_small", "tail", GRID, TAIL_ROWS,
                   config={"trials": 80, "seeds": {"master_seed": 7}})
    return d


def series_points(svg_path, name):
    """(data-x, data-y, data-ci-low, data-ci-high, data-trials) per point."""
    root = ET.parse(svg_path).getroot()
    for g in root.iter(f"{SVG_NS}g"):
        if g.get("data-name") == name:
            return [
                (c.get("data-x"), c.get("data-y"), c.get("data-ci-low"),
                 c.get("data-ci-high"), c.get("data-trials"))
                for c in g.findall(f"{SVG_NS}circle")
            ]
    raise AssertionError(f"no series {name!r} in {svg_path}")


def series_pixels(svg_path, name):
    """The polyline's (x, y) pixel pairs for one series."""
    root = ET.parse(svg_path).getroot()
    for g in root.iter(f"{SVG_NS}g"):
        if g.get("data-name") == name:
            line = g.find(f"{SVG_NS}polyline")
            return [tuple(float(v) for v in pt.split(","))
                    for pt in line.get("points").split()]
    raise AssertionError(f"no series {name!r} in {svg_path}")
