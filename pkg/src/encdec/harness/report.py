"""CSV, manifest and SVG output for study reports."""

from __future__ import annotations

import csv
import math
import os
from xml.sax.saxutils import escape

from .study import HEADER, StudyReport

WIDTH, HEIGHT = 800, 600
MARGIN = {"left": 80, "right": 200, "top": 40, "bottom": 60}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def write_report_csv(report: StudyReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for row in report.rows:
            w.writerow(row.cells())


def read_report_csv(path) -> list:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return repr(v)
    if v is None:
        return '""'
    return '"' + str(v).replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_manifest(config: dict, path, notes=()) -> None:
    """``key = value`` lines, sorted, plus one ``warning_i`` entry per note."""
    with open(path, "w") as fh:
        for k in sorted(config):
            fh.write(f"{k} = {_toml_value(config[k])}\n")
        for i, note in enumerate(notes):
            fh.write(f"warning_{i} = {_toml_value(note)}\n")


def _nice_decades(lo: float, hi: float):
    a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
    if a == b:
        b += 1
    return a, b


def render_svg(report: StudyReport, title: str = "sup error vs n") -> str:
    """Line chart of log10(sup_error) against n, one series per (arch, family)."""
    series = {}
    for r in report.rows:
        series.setdefault((r.arch_id, r.family), []).append((r.n, r.sup_error))
    pts = [(n, e) for s in series.values() for n, e in s]
    pos = [e for _, e in pts if e > 0]
    floor = min(pos) if pos else 1e-16
    ns = sorted({n for n, _ in pts}) or [1]
    lo_d, hi_d = _nice_decades(floor, max(pos) if pos else 1.0)
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    nlo, nhi = math.log2(ns[0]), math.log2(ns[-1])
    span = (nhi - nlo) or 1.0

    def px(n):
        return x0 + (math.log2(n) - nlo) / span * (x1 - x0) if nhi > nlo else 0.5 * (x0 + x1)

    def py(e):
        v = math.log10(max(e, floor))
        return y0 - (v - lo_d) / (hi_d - lo_d) * (y0 - y1)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for d in range(lo_d, hi_d + 1):
        y = py(10.0**d)
        out.append(f'<line x1="{x0 - 5}" y1="{y:.2f}" x2="{x1}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{x0 - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="12">1e{d}</text>')
    for n in ns:
        x = px(n)
        out.append(f'<text x="{x:.2f}" y="{y0 + 20}" text-anchor="middle" font-size="12">{n}</text>')
    out.append(f'<text x="{(x0 + x1) // 2}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13">n</text>')
    out.append(f'<text x="20" y="{(y0 + y1) // 2}" font-size="13" transform="rotate(-90 20 {(y0 + y1) // 2})" '
               f'text-anchor="middle">log10 sup error</text>')
    for i, ((arch, fam), s) in enumerate(sorted(series.items())):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(n):.2f},{py(e):.2f}" for n, e in sorted(s))
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for n, e in sorted(s):
            out.append(f'<circle cx="{px(n):.2f}" cy="{py(e):.2f}" r="3" fill="{color}"/>')
        ly = MARGIN["top"] + 20 * i
        out.append(f'<line x1="{x1 + 15}" y1="{ly}" x2="{x1 + 35}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x1 + 40}" y="{ly + 4}" font-size="11">{escape(arch)} / {escape(fam)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(report: StudyReport, path, title: str = "sup error vs n") -> None:
    with open(path, "w") as fh:
        fh.write(render_svg(report, title))


def write_outputs(report: StudyReport, out_dir, svg: bool = False, extra_config=None) -> None:
    os.makedirs(out_dir, exist_ok=True)
    write_report_csv(report, os.path.join(out_dir, "report.csv"))
    cfg = dict(report.config)
    cfg.update(extra_config or {})
    write_manifest(cfg, os.path.join(out_dir, "run.toml"), report.warnings)
    if svg:
        write_svg(report, os.path.join(out_dir, "report.svg"))
