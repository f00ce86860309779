"""Static SVG figures: clustered heatmaps, CEDA-binned histogram, Q-Q plot, dendrogram.

Everything is written by hand with fixed-precision coordinates so the bytes
are deterministic and need no plotting library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .binning import BinIntervals, count_bins
from .classical import QQData
from .hcluster import Dendrogram, leaf_order
from .ingest import Sample

SIGN_COLORS = {-1: "#ff8c00", 0: "#ffffff", 1: "#d62728"}
HIGHLIGHT = "#1f5fd6"


@dataclass(frozen=True)
class FigureSpec:
    kind: str  # heatmap-p0 | heatmap-signs | histogram | qq | dendrogram
    width: int = 720
    height: int = 560
    highlight_row: int | None = 0
    title: str = ""
    sign_colors: tuple[tuple[int, str], ...] = tuple(SIGN_COLORS.items())


def _f(x: float) -> str:
    return f"{x:.2f}"


class _Svg:
    def __init__(self, width: int, height: int, title: str = ""):
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
            f'<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        ]
        if title:
            self.text(width / 2, 18, title, anchor="middle", size=14)

    def add(self, s: str) -> None:
        self.parts.append(s)

    def text(self, x, y, s, anchor="start", size=11, rotate=None, cls=None) -> None:
        tr = f' transform="rotate({rotate} {_f(x)} {_f(y)})"' if rotate is not None else ""
        c = f' class="{cls}"' if cls else ""
        self.add(f'<text{c} x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}" font-size="{size}"{tr}>{escape(str(s))}</text>')

    def done(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _p0_color(v: float) -> str:
    # white -> dark blue
    v = min(max(v, 0.0), 1.0)
    r = round(255 - v * (255 - 8))
    g = round(255 - v * (255 - 48))
    b = round(255 - v * (255 - 107))
    return f"#{r:02x}{g:02x}{b:02x}"


def _dendro_paths(t: Dendrogram, pos: dict[int, float], x0: float, x1: float, vertical_leaves: bool) -> list[str]:
    """One U-shaped path per merge.

    With ``vertical_leaves`` the leaves sit on the right edge at ``x1`` and
    the root extends left toward ``x0`` (row dendrogram beside a heatmap);
    otherwise leaves sit on the bottom edge and height grows upward.
    """
    M = t.n_leaves
    hmax = float(t.height.max()) if t.height.size else 0.0
    # all-zero heights: fall back to merge rank so the tree is still visible
    use_rank = hmax <= 0
    level = {i: 0.0 for i in range(M)}
    out = []
    for step, (a, b, h, _) in enumerate(t.merges()):
        node = M + step
        lv = (step + 1) / (M - 1) if use_rank else h / hmax
        level[node] = lv
        pos[node] = 0.5 * (pos[a] + pos[b])

        def coord(p, l):
            depth = x1 - l * (x1 - x0)
            return (depth, p) if vertical_leaves else (p, depth)

        pa, pb = coord(pos[a], level[a]), coord(pos[a], lv)
        qa, qb = coord(pos[b], level[b]), coord(pos[b], lv)
        d = f"M{_f(pa[0])},{_f(pa[1])} L{_f(pb[0])},{_f(pb[1])} L{_f(qb[0])},{_f(qb[1])} L{_f(qa[0])},{_f(qa[1])}"
        out.append(f'<path class="junction" d="{d}" fill="none" stroke="#333333" stroke-width="1"/>')
    return out


def render_heatmap(matrix, row_tree: Dendrogram, spec: FigureSpec, col_labels: list[str] | None = None) -> str:
    """Heatmap with rows in dendrogram order and the tree drawn on the left.

    ``spec.kind`` selects the palette: three discrete colors for
    ``heatmap-signs``, a continuous white-to-blue ramp for ``heatmap-p0``.
    """
    mat = np.asarray(matrix)
    rows, K = mat.shape
    if row_tree.n_leaves != rows:
        raise ValueError(f"tree has {row_tree.n_leaves} leaves but matrix has {rows} rows")
    if spec.highlight_row is not None and not 0 <= spec.highlight_row < rows:
        raise ValueError("highlight row outside the matrix")
    discrete = spec.kind == "heatmap-signs"
    colors = dict(spec.sign_colors)

    top, bottom, left = 60.0, 30.0, 20.0
    tree_w = 160.0
    legend_w = 130.0
    gx = left + tree_w + 10
    gw = spec.width - gx - legend_w - 20
    gh = spec.height - top - bottom
    cw, ch = gw / K, gh / rows

    order = leaf_order(row_tree)
    ypos = {leaf: top + (r + 0.5) * ch for r, leaf in enumerate(order)}

    svg = _Svg(spec.width, spec.height, spec.title)
    svg.add('<g class="dendrogram">')
    for p in _dendro_paths(row_tree, dict(ypos), left, left + tree_w, vertical_leaves=True):
        svg.add(p)
    svg.add("</g>")

    svg.add('<g class="cells">')
    for r, leaf in enumerate(order):
        y = top + r * ch
        for k in range(K):
            v = mat[leaf, k]
            fill = colors[int(v)] if discrete else _p0_color(float(v))
            svg.add(
                f'<rect class="cell" data-row="{leaf}" data-col="{k}" x="{_f(gx + k * cw)}" y="{_f(y)}" '
                f'width="{_f(cw)}" height="{_f(ch)}" fill="{fill}" stroke="#dddddd" stroke-width="0.3"/>'
            )
    svg.add("</g>")

    labels = col_labels or [f"bin {k + 1}" for k in range(K)]
    for k, lab in enumerate(labels):
        svg.text(gx + (k + 0.5) * cw, top - 6, lab, anchor="start", size=9, rotate=-45)

    if spec.highlight_row is not None:
        r = order.index(spec.highlight_row)
        svg.add(
            f'<rect class="highlight" x="{_f(gx - 1)}" y="{_f(top + r * ch)}" width="{_f(gw + 2)}" '
            f'height="{_f(ch)}" fill="none" stroke="{HIGHLIGHT}" stroke-width="2"/>'
        )
        svg.text(gx + gw + 4, top + (r + 0.5) * ch + 3, "observed", size=9, cls="highlight-label")

    lx = spec.width - legend_w + 10
    svg.add('<g class="legend">')
    if discrete:
        names = {-1: "sim < obs", 0: "equal", 1: "sim > obs"}
        for i, v in enumerate((1, 0, -1)):
            y = top + i * 18
            svg.add(f'<rect x="{_f(lx)}" y="{_f(y)}" width="12" height="12" fill="{colors[v]}" stroke="#333333" stroke-width="0.5"/>')
            svg.text(lx + 16, y + 10, f"{v:+d} {names[v]}" if v else f"0 {names[v]}", size=9)
    else:
        for i in range(11):
            v = i / 10
            y = top + (10 - i) * 12
            svg.add(f'<rect x="{_f(lx)}" y="{_f(y)}" width="12" height="12" fill="{_p0_color(v)}"/>')
            if i % 5 == 0:
                svg.text(lx + 16, y + 10, f"{v:.1f}", size=9)
    svg.add("</g>")
    return svg.done()


def _display_edges(s: Sample, b: BinIntervals) -> list[tuple[float, float]]:
    pairs = b.as_pairs()
    lo0 = min(float(s.values[0]), pairs[0][1]) if b.K > 1 else float(s.values[0])
    hiK = max(float(s.values[-1]), pairs[-1][0]) if b.K > 1 else float(s.values[-1])
    edges = [(lo0, pairs[0][1])] + pairs[1:-1] + [(pairs[-1][0], hiK)] if b.K > 1 else [(lo0, hiK)]
    fixed = []
    for lo, hi in edges:
        if hi == lo:  # degenerate outer bin under the "left" rule
            hi = lo + 0.5
        fixed.append((lo, hi))
    return fixed


def histogram_bars(s: Sample, b: BinIntervals) -> list[tuple[float, float, float]]:
    """``(lo, hi, density)`` per bin with outer bins clipped to the data range."""
    counts = count_bins(s.values, b)
    return [(lo, hi, c / (s.n * (hi - lo))) for (lo, hi), c in zip(_display_edges(s, b), counts)]


def render_histogram(s: Sample, b: BinIntervals, mean: float, sd: float, spec: FigureSpec | None = None) -> str:
    spec = spec or FigureSpec("histogram", 640, 420)
    bars = histogram_bars(s, b)
    xlo = min(bars[0][0], mean - 3.5 * sd)
    xhi = max(bars[-1][1], mean + 3.5 * sd)
    peak = 1 / (sd * math.sqrt(2 * math.pi))
    ymax = max(max(d for _, _, d in bars), peak) * 1.08
    L, R, T, B = 60.0, 20.0, 40.0, 50.0
    W, H = spec.width - L - R, spec.height - T - B

    def X(x):
        return L + (x - xlo) / (xhi - xlo) * W

    def Y(y):
        return T + H - y / ymax * H

    svg = _Svg(spec.width, spec.height, spec.title)
    svg.add(f'<line class="axis" x1="{_f(L)}" y1="{_f(T + H)}" x2="{_f(L + W)}" y2="{_f(T + H)}" stroke="#000000"/>')
    svg.add(f'<line class="axis" x1="{_f(L)}" y1="{_f(T)}" x2="{_f(L)}" y2="{_f(T + H)}" stroke="#000000"/>')
    svg.add('<g class="bars">')
    for lo, hi, d in bars:
        svg.add(
            f'<rect class="bar" x="{_f(X(lo))}" y="{_f(Y(d))}" width="{_f(X(hi) - X(lo))}" '
            f'height="{_f(Y(0) - Y(d))}" fill="#bcd3ee" stroke="#333333" stroke-width="0.8"/>'
        )
    svg.add("</g>")
    xs = np.linspace(xlo, xhi, 241)
    ys = np.exp(-0.5 * ((xs - mean) / sd) ** 2) * peak
    pts = " ".join(f"{_f(X(x))},{_f(Y(y))}" for x, y in zip(xs, ys))
    svg.add(f'<polyline class="density" points="{pts}" fill="none" stroke="#d62728" stroke-width="1.5"/>')
    for x in np.linspace(xlo, xhi, 6):
        svg.text(X(x), T + H + 16, f"{x:.4g}", anchor="middle", size=10)
    svg.text(L + W / 2, spec.height - 10, s.label or "value", anchor="middle")
    svg.text(14, T + H / 2, "density", anchor="middle", rotate=-90)
    return svg.done()


def render_qq(q: QQData, spec: FigureSpec | None = None) -> str:
    spec = spec or FigureSpec("qq", 520, 520)
    L, R, T, B = 60.0, 20.0, 40.0, 50.0
    W, H = spec.width - L - R, spec.height - T - B
    vals = [q.theoretical, q.sample] + ([q.lo, q.hi] if q.lo is not None else [])
    lo = float(min(v.min() for v in vals))
    hi = float(max(v.max() for v in vals))
    pad = 0.04 * (hi - lo or 1.0)
    lo, hi = lo - pad, hi + pad

    def X(x):
        return L + (x - lo) / (hi - lo) * W

    def Y(y):
        return T + H - (y - lo) / (hi - lo) * H

    svg = _Svg(spec.width, spec.height, spec.title)
    if q.lo is not None:
        upper = [f"{_f(X(t))},{_f(Y(h))}" for t, h in zip(q.theoretical, q.hi)]
        lower = [f"{_f(X(t))},{_f(Y(l))}" for t, l in zip(q.theoretical[::-1], q.lo[::-1])]
        svg.add(f'<polygon class="band" points="{" ".join(upper + lower)}" fill="#c7dcef" fill-opacity="0.7" stroke="none"/>')
    svg.add(f'<line class="ref" x1="{_f(X(lo))}" y1="{_f(Y(lo))}" x2="{_f(X(hi))}" y2="{_f(Y(hi))}" stroke="#d62728" stroke-width="1"/>')
    svg.add('<g class="points">')
    for t, v in zip(q.theoretical, q.sample):
        svg.add(f'<circle class="pt" cx="{_f(X(t))}" cy="{_f(Y(v))}" r="2.2" fill="#1f1f1f"/>')
    svg.add("</g>")
    svg.text(L + W / 2, spec.height - 10, "theoretical quantile", anchor="middle")
    svg.text(14, T + H / 2, "sample quantile", anchor="middle", rotate=-90)
    return svg.done()


def render_dendrogram(t: Dendrogram, K: int | None = None, spec: FigureSpec | None = None) -> str:
    """Leaves along the bottom; an optional dashed line marks the K-cluster cut."""
    spec = spec or FigureSpec("dendrogram", 900, 420, highlight_row=None)
    L, R, T, B = 40.0, 20.0, 40.0, 30.0
    W, H = spec.width - L - R, spec.height - T - B
    M = t.n_leaves
    order = leaf_order(t)
    pos = {leaf: L + (i + 0.5) * W / M for i, leaf in enumerate(order)}
    svg = _Svg(spec.width, spec.height, spec.title)
    svg.add('<g class="dendrogram">')
    for p in _dendro_paths(t, pos, T, T + H, vertical_leaves=False):
        svg.add(p)
    svg.add("</g>")
    hmax = float(t.height.max())
    if K is not None and 2 <= K <= M and hmax > 0:
        hi_h = float(t.height[M - K])
        lo_h = float(t.height[M - K - 1]) if M - K - 1 >= 0 else 0.0
        y = T + H - 0.5 * (hi_h + lo_h) / hmax * H
        svg.add(f'<line class="cut" x1="{_f(L)}" y1="{_f(y)}" x2="{_f(L + W)}" y2="{_f(y)}" stroke="#d62728" stroke-dasharray="4,3"/>')
        svg.text(L + W, y - 4, f"K = {K}", anchor="end", size=10)
    return svg.done()
