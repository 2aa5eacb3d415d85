"""Static SVG charts written by hand; no plotting dependency."""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


class _Axes:
    def __init__(self, xs, ys, logx=False, logy=False, ylim=None):
        self.logx, self.logy = logx, logy
        fx = [self._fx(x) for x in xs]
        fy = [self._fy(y) for y in ys]
        self.x0, self.x1 = min(fx), max(fx)
        self.y0, self.y1 = ylim if ylim is not None else (min(fy), max(fy))
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 0.5, self.x1 + 0.5
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 0.5, self.y1 + 0.5

    def _fx(self, x):
        return math.log10(x) if self.logx else float(x)

    def _fy(self, y):
        return math.log10(y) if self.logy else float(y)

    def px(self, x):
        return LEFT + (self._fx(x) - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)

    def py(self, y):
        return H - BOTTOM - (self._fy(y) - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)

    def ticks(self, lo, hi, log):
        if log:
            return [10 ** e for e in range(math.floor(lo), math.ceil(hi) + 1)
                    if lo - 1e-9 <= e <= hi + 1e-9] or [10 ** lo, 10 ** hi]
        return list(np.linspace(lo, hi, 5))


def _frame(title, xlabel, ylabel, axes: _Axes) -> list[str]:
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<text x="{W / 2 - RIGHT / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
           f'<line x1="{LEFT}" y1="{H - BOTTOM}" x2="{W - RIGHT}" y2="{H - BOTTOM}" stroke="black"/>',
           f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{H - BOTTOM}" stroke="black"/>',
           f'<text x="{(LEFT + W - RIGHT) / 2:.1f}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>',
           f'<text x="16" y="{(TOP + H - BOTTOM) / 2:.1f}" text-anchor="middle" '
           f'transform="rotate(-90 16 {(TOP + H - BOTTOM) / 2:.1f})">{escape(ylabel)}</text>']
    for x in axes.ticks(axes.x0, axes.x1, axes.logx):
        px = axes.px(x)
        out.append(f'<line x1="{px:.1f}" y1="{H - BOTTOM}" x2="{px:.1f}" y2="{H - BOTTOM + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.1f}" y="{H - BOTTOM + 18}" text-anchor="middle">{_fmt(x)}</text>')
    for y in axes.ticks(axes.y0, axes.y1, axes.logy):
        py = axes.py(y)
        out.append(f'<line x1="{LEFT - 5}" y1="{py:.1f}" x2="{LEFT}" y2="{py:.1f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{py + 4:.1f}" text-anchor="end">{_fmt(y)}</text>')
    return out


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-2:
        return f"{v:.0e}"
    return f"{v:.3g}"


def _lines(series: dict[str, list[tuple[float, float]]], axes: _Axes) -> list[str]:
    out = []
    for i, (label, pts) in enumerate(sorted(series.items())):
        color = COLORS[i % len(COLORS)]
        path = " ".join(f"{axes.px(x):.1f},{axes.py(y):.1f}" for x, y in sorted(pts))
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in pts:
            out.append(f'<circle cx="{axes.px(x):.1f}" cy="{axes.py(y):.1f}" r="3" fill="{color}"/>')
        ly = TOP + 10 + 18 * i
        out.append(f'<line x1="{W - RIGHT + 12}" y1="{ly}" x2="{W - RIGHT + 32}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{W - RIGHT + 38}" y="{ly + 4}">{escape(label)}</text>')
    return out


def line_chart(series, title, xlabel, ylabel, logx=False, logy=False, ylim=None) -> str:
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    axes = _Axes(xs, ys, logx, logy, ylim)
    return "\n".join(_frame(title, xlabel, ylabel, axes) + _lines(series, axes) + ["</svg>"]) + "\n"


def histogram(values, title, xlabel, bins=20) -> str:
    values = np.asarray(values, dtype=np.float64)
    counts, edges = np.histogram(values, bins=bins)
    axes = _Axes([edges[0], edges[-1]], [0, max(1, counts.max())])
    out = _frame(title, xlabel, "count", axes)
    for c, lo, hi in zip(counts, edges[:-1], edges[1:]):
        x0, x1, y = axes.px(lo), axes.px(hi), axes.py(c)
        out.append(f'<rect x="{x0:.1f}" y="{y:.1f}" width="{max(x1 - x0 - 1, 1):.1f}" '
                   f'height="{H - BOTTOM - y:.1f}" fill="{COLORS[0]}"/>')
    return "\n".join(out + ["</svg>"]) + "\n"


def _label(alg, k, delta, multi):
    return f"{alg} k={k} d={delta:g}" if multi else alg


def emit_plots(rows, out_dir, baif_pulls=None) -> dict:
    """Write queries_vs_n.svg, recovery_vs_delta.svg and (given pulls)
    baif_pulls.svg.  Returns {"written": [...], "notes": [...]}."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written, notes = [], []
    rows = [r for r in rows if r.algorithm != "baif_lab"]
    if not rows:
        notes.append("no clustering rows: query and recovery plots omitted")
    else:
        combos = {(r.k, r.delta) for r in rows}
        multi = len(combos) > 1
        by_n: dict[str, dict[int, list[int]]] = {}
        by_d: dict[str, dict[float, list[bool]]] = {}
        for r in rows:
            by_n.setdefault(_label(r.algorithm, r.k, r.delta, multi), {}).setdefault(r.n, []).append(r.distinct_pairs)
            lab = f"{r.algorithm} n={r.n} k={r.k}" if len({(x.n, x.k) for x in rows}) > 1 else r.algorithm
            by_d.setdefault(lab, {}).setdefault(r.delta, []).append(r.exact_recovery)
        series = {lab: [(n, float(np.mean(v))) for n, v in pts.items()] for lab, pts in by_n.items()}
        if all(len(p) >= 2 for p in series.values()):
            (out / "queries_vs_n.svg").write_text(
                line_chart(series, "Distinct pairs queried", "n", "mean distinct pairs", True, True),
                encoding="utf-8")
            written.append("queries_vs_n.svg")
        else:
            notes.append("fewer than two n values: queries_vs_n.svg omitted")
        series = {lab: [(d, float(np.mean(v))) for d, v in pts.items()] for lab, pts in by_d.items()}
        (out / "recovery_vs_delta.svg").write_text(
            line_chart(series, "Exact recovery rate", "delta", "rate", ylim=(0.0, 1.0)), encoding="utf-8")
        written.append("recovery_vs_delta.svg")
    if baif_pulls:
        (out / "baif_pulls.svg").write_text(
            histogram(baif_pulls, "Queries touching the special vertex", "pulls"), encoding="utf-8")
        written.append("baif_pulls.svg")
    else:
        notes.append("no BAIF pulls: baif_pulls.svg omitted")
    return {"written": written, "notes": notes}
