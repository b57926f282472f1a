"""CSV / JSON / SVG emission.

Every writer formats floats deterministically (17 significant digits in
CSV, ``repr`` in JSON) so identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

CSV_HEADER = ("detuning_thz", "re_r", "im_r", "reflectivity", "phase_rad", "phase_unwrapped_rad")


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_spectrum_csv(grid, path) -> Path:
    path = Path(path)
    cols = (
        grid.detunings,
        grid.r.real,
        grid.r.imag,
        grid.reflectivity,
        grid.phase,
        grid.phase_unwrapped,
    )
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])
    return path


def read_spectrum_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        rows = np.array([[float(v) for v in row] for row in reader], dtype=np.float64).reshape(-1, len(CSV_HEADER))
    return {name: rows[:, i] for i, name in enumerate(CSV_HEADER)}


def write_json(data, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path


# ---------------------------------------------------------------------- SVG

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_plot_svg(series, *, title="", xlabel="", ylabel="", width=640, height=420) -> str:
    """Render ``series = [(label, x, y), ...]`` as a standalone SVG line chart."""
    ml, mr, mt, mb = 70, 150, 40, 55
    pw, ph = width - ml - mr, height - mt - mb
    xs = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, float) for _, _, y in series])
    xs, ys = xs[np.isfinite(xs)], ys[np.isfinite(ys)]
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    pad = 0.05 * (y1 - y0) if y1 > y0 else 1.0
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return mt + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{mt + ph}" x2="{px:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{mt + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{ml - 5}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{py + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 12}" text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2})">{_esc(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{ml + pw / 2}" y="{mt - 14}" text-anchor="middle" font-size="14">{_esc(title)}</text>')
    out.append(f'<clipPath id="plot"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath>')
    for i, (label, x, y) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(np.asarray(x, float), np.asarray(y, float)) if np.isfinite(b)
        )
        out.append(f'<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = mt + 10 + 18 * i
        out.append(f'<line x1="{ml + pw + 12}" y1="{ly}" x2="{ml + pw + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw + 38}" y="{ly + 4}">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(svg: str, path) -> Path:
    path = Path(path)
    path.write_text(svg)
    return path
