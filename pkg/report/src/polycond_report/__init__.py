"""Static SVG reports from experiment CSV artifacts.

Consumes the CSV + JSON-sidecar files the polycond harness writes (and
nothing else: the two packages share only the file formats), validates
them against the fixed per-kind schemas, and renders deterministic
figures plus a single summary page.  Plotted points embed the exact CSV
cell strings, so rendering is verifiable by parsing the output.
"""

from .artifacts import SCHEMAS, Artifact, discover, load_artifact
from .errors import InputError, ReportError, SchemaError
from .render import figure_for, render_bundle

__all__ = [
    "Artifact",
    "InputError",
    "ReportError",
    "SCHEMAS",
    "SchemaError",
    "discover",
    "figure_for",
    "load_artifact",
    "render_bundle",
]
