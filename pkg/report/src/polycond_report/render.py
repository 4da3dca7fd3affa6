"""Figures and the summary page, rendered from validated artifacts.

Each grid-shaped artifact becomes a log-log curve with its Wilson band;
opnorm scaling tables plot value / n against n; compressible runs get a
linear scatter.  Every plotted point carries the exact CSV cell strings
in data-x / data-y attributes (plus the band cells on curve points), so
a golden test can parse the figure and recover the inputs verbatim.
Pixel positions are pure axis mapping on top of those values.

The summary is a single static HTML page embedding every figure, the
small-ball and sign-pattern tables, any standalone LCD payloads, and
the config echo from each sidecar.  Inputs are only ever read.
"""

from __future__ import annotations

import json
from pathlib import Path
from xml.sax.saxutils import escape

from .artifacts import SCHEMAS, discover
from .errors import InputError
from .svg import PALETTE, PLOT, Scale, axes, document, el, linear_range, log_range, px

#: kinds plotted as log-log curves with CI bands
_CURVE_KINDS = ("tail", "grid", "small_ball", "tensorization")
#: kinds additionally tabulated on the summary page
_TABLE_KINDS = ("small_ball", "example1")


def _floats(cells) -> list:
    return [float(c) for c in cells]


def _band(xs: Scale, ys: Scale, xv: list, lov: list, hiv: list, color: str) -> str:
    forward = [f"{px(xs(x))},{px(ys(h))}" for x, h in zip(xv, hiv)]
    back = [f"{px(xs(x))},{px(ys(l))}" for x, l in zip(reversed(xv), reversed(lov))]
    return el("polygon", {
        "points": " ".join(forward + back),
        "fill": color,
        "fill-opacity": "0.18",
        "stroke": "none",
        "class": "band",
    })


def _series(name: str, xs: Scale, ys: Scale, x_raw: list, y_raw: list,
            xv: list, yv: list, color: str, point_data=None) -> str:
    pts = " ".join(f"{px(xs(x))},{px(ys(y))}" for x, y in zip(xv, yv))
    parts = [el("polyline", {
        "points": pts, "fill": "none", "stroke": color, "stroke-width": "1.5",
    })]
    for i in range(len(xv)):
        attrs = {
            "cx": px(xs(xv[i])), "cy": px(ys(yv[i])), "r": "3", "fill": color,
            "data-x": x_raw[i], "data-y": y_raw[i],
        }
        if point_data is not None:
            for key, cells in point_data.items():
                attrs[f"data-{key}"] = cells[i]
        parts.append(el("circle", attrs))
    return el("g", {"class": "series", "data-name": name}, "".join(parts))


def _curve_figure(art) -> str:
    cols = art.columns
    x_raw, y_raw = cols["epsilon_or_delta"], cols["estimate"]
    xv, yv = _floats(x_raw), _floats(y_raw)
    lov, hiv = _floats(cols["ci_low"]), _floats(cols["ci_high"])
    xs = Scale(*log_range(xv), PLOT[0], PLOT[2], log=True)
    ys = Scale(*log_range(yv + lov + hiv), PLOT[3], PLOT[1], log=True)
    body = axes(xs, ys, "epsilon_or_delta", "estimate", f"{art.name} ({art.kind})")
    body.append(_band(xs, ys, xv, lov, hiv, PALETTE[0]))
    body.append(_series(
        "estimate", xs, ys, x_raw, y_raw, xv, yv, PALETTE[0],
        point_data={"ci-low": cols["ci_low"], "ci-high": cols["ci_high"],
                    "trials": cols["trials"]},
    ))
    return document(body)


def _events_figure(art) -> str:
    cols = art.columns
    order = []
    for ev in cols["event"]:
        if ev not in order:
            order.append(ev)
    rows_of = {ev: [i for i, e in enumerate(cols["event"]) if e == ev] for ev in order}
    xv_all = _floats(cols["epsilon_or_delta"])
    yv_all = _floats(cols["estimate"])
    lov_all = _floats(cols["ci_low"])
    hiv_all = _floats(cols["ci_high"])
    xs = Scale(*log_range(xv_all), PLOT[0], PLOT[2], log=True)
    ys = Scale(*log_range(yv_all + lov_all + hiv_all), PLOT[3], PLOT[1], log=True)
    body = axes(xs, ys, "epsilon_or_delta", "estimate", f"{art.name} ({art.kind})")
    for k, ev in enumerate(order):
        idx = rows_of[ev]
        color = PALETTE[k % len(PALETTE)]
        body.append(_band(xs, ys, [xv_all[i] for i in idx],
                          [lov_all[i] for i in idx], [hiv_all[i] for i in idx], color))
        body.append(_series(
            ev, xs, ys,
            [cols["epsilon_or_delta"][i] for i in idx],
            [cols["estimate"][i] for i in idx],
            [xv_all[i] for i in idx], [yv_all[i] for i in idx], color,
            point_data={"ci-low": [cols["ci_low"][i] for i in idx],
                        "ci-high": [cols["ci_high"][i] for i in idx],
                        "trials": [cols["trials"][i] for i in idx]},
        ))
    return document(body)


def _opnorm_figure(art) -> str:
    cols = art.columns
    nv = _floats(cols["n"])
    vv = _floats(cols["value"])
    # the y position encodes value / n, matching the axis label; the data
    # attributes keep the untouched value cells
    ratio = [v / n for v, n in zip(vv, nv)]
    xs = Scale(*linear_range(nv), PLOT[0], PLOT[2])
    ys = Scale(*linear_range(ratio + [0.0]), PLOT[3], PLOT[1])
    body = axes(xs, ys, "n", "value / n", f"{art.name} ({art.kind})")
    body.append(_series(
        "value_over_n", xs, ys, cols["n"], cols["value"], nv, ratio, PALETTE[0],
        point_data={"trial": cols["trial"], "d": cols["d"]},
    ))
    return document(body)


def _compressible_figure(art) -> str:
    cols = art.columns
    tv = _floats(cols["trial"])
    yv = _floats(cols["infimum_sq_over_n"])
    xs = Scale(*linear_range(tv), PLOT[0], PLOT[2])
    ys = Scale(*linear_range(yv + [0.0]), PLOT[3], PLOT[1])
    body = axes(xs, ys, "trial", "infimum_sq_over_n", f"{art.name} ({art.kind})")
    body.append(_series(
        "infimum_sq_over_n", xs, ys, cols["trial"], cols["infimum_sq_over_n"],
        tv, yv, PALETTE[0],
    ))
    return document(body)


def figure_for(art) -> str | None:
    """The figure for one artifact, or None for table-only kinds."""
    if art.kind in _CURVE_KINDS:
        return _curve_figure(art)
    if art.kind == "corollary_events":
        return _events_figure(art)
    if art.kind == "opnorm_scaling":
        return _opnorm_figure(art)
    if art.kind == "compressible":
        return _compressible_figure(art)
    return None


def _table_html(columns: dict, order: list) -> str:
    head = "".join(f"<th>{escape(c)}</th>" for c in order)
    rows = len(next(iter(columns.values()), []))
    body = "".join(
        "<tr>" + "".join(f"<td>{escape(columns[c][i])}</td>" for c in order) + "</tr>"
        for i in range(rows)
    )
    return f"<table><thead><tr>{head}</tr></thead><tbody>{body}</tbody></table>"


def _lcd_table_html(lcd_rows: list) -> str:
    order = ["name", "found", "lcd", "lattice_dist", "threshold"]
    columns = {c: [] for c in order}
    for row in lcd_rows:
        cert = row.get("certificate") or {}
        columns["name"].append(str(row["name"]))
        columns["found"].append(str(row["found"]))
        columns["lcd"].append("" if row.get("lcd") is None else str(row["lcd"]))
        columns["lattice_dist"].append(
            "" if cert.get("lattice_dist") is None else str(cert["lattice_dist"]))
        columns["threshold"].append(
            "" if cert.get("threshold") is None else str(cert["threshold"]))
    return _table_html(columns, order)


_STYLE = (
    "body{font-family:sans-serif;max-width:72em;margin:1em auto;padding:0 1em;"
    "color:#222}h1{font-size:1.5em}h2{font-size:1.2em;margin-top:2em;"
    "border-bottom:1px solid #ccc}table{border-collapse:collapse;margin:0.5em 0}"
    "th,td{border:1px solid #bbb;padding:0.25em 0.6em;font-size:0.9em;"
    "text-align:right}th{background:#f0f0f0}pre{background:#f6f6f6;"
    "padding:0.6em;overflow-x:auto;font-size:0.85em}p.versions{color:#666;"
    "font-size:0.85em}"
)


def _summary_html(artifacts: list, lcd_rows: list, figures: dict) -> str:
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8"/>',
        "<title>Experiment report</title>",
        f"<style>{_STYLE}</style></head><body>",
        "<h1>Experiment report</h1>",
        f"<p>{len(artifacts)} artifact(s), {len(lcd_rows)} LCD payload(s).</p>",
    ]
    for art in artifacts:
        parts.append(f"<h2>{escape(art.name)} <small>({escape(art.kind)})</small></h2>")
        if art.name in figures:
            parts.append(figures[art.name])
        if art.kind in _TABLE_KINDS:
            parts.append(_table_html(art.columns, SCHEMAS[art.kind]))
        config = art.sidecar.get("config")
        if config is not None:
            parts.append("<h3>config</h3>")
            parts.append(f"<pre>{escape(json.dumps(config, indent=2, sort_keys=True))}</pre>")
        else:
            parts.append("<p>no config echoed</p>")
        versions = art.sidecar.get("versions")
        if versions:
            parts.append(
                '<p class="versions">versions: '
                f"{escape(json.dumps(versions, sort_keys=True))}</p>"
            )
    if lcd_rows:
        parts.append("<h2>LCD scans</h2>")
        parts.append(_lcd_table_html(lcd_rows))
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def render_bundle(in_dir, out_dir) -> list:
    """Render everything under in_dir into out_dir.

    Writes one SVG per plottable artifact plus summary.html, returning
    the written paths in order.  The output directory must not be the
    input directory; input files are never touched.
    """
    in_p, out_p = Path(in_dir), Path(out_dir)
    artifacts, lcd_rows = discover(in_p)
    if out_p.resolve() == in_p.resolve():
        raise InputError("output directory must differ from the input directory")
    out_p.mkdir(parents=True, exist_ok=True)
    written = []
    figures = {}
    for art in artifacts:
        fig = figure_for(art)
        if fig is None:
            continue
        figures[art.name] = fig
        path = out_p / f"{art.name}.svg"
        path.write_text(fig, encoding="utf-8")
        written.append(path)
    summary = out_p / "summary.html"
    summary.write_text(_summary_html(artifacts, lcd_rows, figures), encoding="utf-8")
    written.append(summary)
    return written
