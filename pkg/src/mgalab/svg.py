"""Self-contained SVG figures built from report rows.

Every plotted mark carries ``data-x``/``data-y`` attributes holding the
exact values it was drawn from, so figures can be audited against the CSVs.
Output is deterministic for identical inputs.
"""
from __future__ import annotations

from itertools import combinations
from xml.sax.saxutils import escape

import numpy as np

from .geometry import hull_2d

MAX_PANEL_VARS = 12
PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f", "#bcbd22")
BASE_COLOR = "#d62728"


def _f(v: float) -> str:
    return f"{v:.3f}"


class _Axes:
    def __init__(self, x0, y0, w, h, xlim, ylim):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlim = self._pad(xlim)
        self.ylim = self._pad(ylim)

    @staticmethod
    def _pad(lim):
        lo, hi = float(lim[0]), float(lim[1])
        if hi - lo <= 1e-12:
            lo, hi = lo - 0.5, hi + 0.5
        pad = 0.05 * (hi - lo)
        return lo - pad, hi + pad

    def px(self, x: float) -> float:
        return self.x0 + (x - self.xlim[0]) / (self.xlim[1] - self.xlim[0]) * self.w

    def py(self, y: float) -> float:
        return self.y0 + self.h - (y - self.ylim[0]) / (self.ylim[1] - self.ylim[0]) * self.h

    def frame(self, xlabel: str, ylabel: str) -> list[str]:
        x0, y0, w, h = self.x0, self.y0, self.w, self.h
        return [
            f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(w)}" height="{_f(h)}" '
            'fill="none" stroke="#333" stroke-width="1"/>',
            f'<text x="{_f(x0 + w / 2)}" y="{_f(y0 + h + 28)}" text-anchor="middle" '
            f'font-size="11">{escape(xlabel)}</text>',
            f'<text x="{_f(x0 - 34)}" y="{_f(y0 + h / 2)}" text-anchor="middle" font-size="11" '
            f'transform="rotate(-90 {_f(x0 - 34)} {_f(y0 + h / 2)})">{escape(ylabel)}</text>',
            f'<text x="{_f(x0)}" y="{_f(y0 + h + 14)}" font-size="9">{self.xlim[0]:.3g}</text>',
            f'<text x="{_f(x0 + w)}" y="{_f(y0 + h + 14)}" font-size="9" text-anchor="end">'
            f'{self.xlim[1]:.3g}</text>',
            f'<text x="{_f(x0 - 4)}" y="{_f(y0 + h)}" font-size="9" text-anchor="end">'
            f'{self.ylim[0]:.3g}</text>',
            f'<text x="{_f(x0 - 4)}" y="{_f(y0 + 9)}" font-size="9" text-anchor="end">'
            f'{self.ylim[1]:.3g}</text>',
        ]


def _doc(width: int, height: int, body: list[str], title: str) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif">')
    return "\n".join([head, f"<title>{escape(title)}</title>",
                      f'<rect width="{width}" height="{height}" fill="white"/>', *body,
                      "</svg>"]) + "\n"


def _legend(x: float, y: float, labels: list[str]) -> list[str]:
    out = []
    for k, lab in enumerate(labels):
        c = PALETTE[k % len(PALETTE)]
        out.append(f'<rect x="{_f(x)}" y="{_f(y + 14 * k)}" width="10" height="10" fill="{c}"/>')
        out.append(f'<text x="{_f(x + 14)}" y="{_f(y + 14 * k + 9)}" font-size="10">'
                   f'{escape(lab)}</text>')
    return out


def emit_pairwise_hulls(reports, var_subset=None, names=None, *, panel: int = 170) -> str:
    """Scatter matrix of 2-D projections with each series' hull outlined.

    The base-optimal point is drawn in red.  Collinear projections are drawn
    as a segment without fill.
    """
    reports = reports if isinstance(reports, (list, tuple)) else [reports]
    if not reports:
        raise ValueError("no reports to plot")
    dim = reports[0].dim
    if any(r.dim != dim for r in reports):
        raise ValueError("reports have different MGA dimensions")
    subset = list(range(dim)) if var_subset is None else [int(v) for v in var_subset]
    if len(subset) > MAX_PANEL_VARS:
        raise ValueError(f"at most {MAX_PANEL_VARS} variables per scatter matrix, got {len(subset)}")
    if len(subset) < 2:
        raise ValueError("need at least two variables")
    if any(not 0 <= v < dim for v in subset):
        raise ValueError("variable index out of range")
    uniq = sum(int(np.sum([r.unique for r in rep.rows])) for rep in reports)
    if uniq < 3:
        raise ValueError("need at least 3 unique solutions to plot hulls")
    names = names or [f"x{v + 1}" for v in range(dim)]
    k = len(subset)
    margin, gap = 50, 48
    grid = k - 1
    legend_h = 16 * (len(reports) + 1)
    width = margin + grid * (panel + gap) + 20
    height = margin // 2 + legend_h + grid * (panel + gap) + 10
    series = [(rep.method if len({r.method for r in reports}) == len(reports) else rep.run_id,
               rep.points()) for rep in reports]
    base = reports[0].base_point
    allpts = np.vstack([p for _, p in series])
    body = _legend(margin, 8, [s for s, _ in series] + ["base optimum"])
    body[-2] = body[-2].replace(PALETTE[len(series) % len(PALETTE)], BASE_COLOR)
    top = 8 + legend_h
    for a, b in combinations(range(k), 2):
        i, j = subset[a], subset[b]
        col, row = a, b - 1
        ax = _Axes(margin + col * (panel + gap), top + row * (panel + gap), panel, panel,
                   (allpts[:, i].min(), allpts[:, i].max()), (allpts[:, j].min(), allpts[:, j].max()))
        body.append(f'<g class="panel" data-pair="{i},{j}">')
        body += ax.frame(names[i], names[j])
        for s, (label, pts) in enumerate(series):
            color = PALETTE[s % len(PALETTE)]
            h = hull_2d(pts[:, [i, j]])
            coords = " ".join(f"{_f(ax.px(x))},{_f(ax.py(y))}" for x, y in h.vertices)
            if h.degenerate:
                body.append(f'<polyline class="hull degenerate" points="{coords}" fill="none" '
                            f'stroke="{color}" stroke-width="1.5"/>')
            else:
                body.append(f'<polygon class="hull" points="{coords}" fill="{color}" '
                            f'fill-opacity="0.15" stroke="{color}" stroke-width="1.2"/>')
            for x, y in pts[1:, [i, j]].tolist():
                body.append(f'<circle class="pt" cx="{_f(ax.px(x))}" cy="{_f(ax.py(y))}" r="2.5" '
                            f'fill="{color}" data-x="{x!r}" data-y="{y!r}"/>')
        bx, by = float(base[i]), float(base[j])
        body.append(f'<circle class="base" cx="{_f(ax.px(bx))}" cy="{_f(ax.py(by))}" r="4" '
                    f'fill="{BASE_COLOR}" data-x="{bx!r}" data-y="{by!r}"/>')
        body.append("</g>")
    return _doc(width, height, body, "Pairwise convex hulls of MGA solutions")


def emit_trajectories(reports, *, width: int = 560, height: int = 360) -> str:
    """Shadow-sum volume against iteration, one line per report."""
    reports = reports if isinstance(reports, (list, tuple)) else [reports]
    if not reports or all(not r.rows for r in reports):
        raise ValueError("nothing to plot: empty trajectory")
    n_max = max(len(r.rows) for r in reports)
    v_max = max(max(r.vesa_trajectory, default=0.0) for r in reports)
    ax = _Axes(70, 20 + 16 * len(reports), width - 100, height - 80 - 16 * len(reports),
               (1, max(n_max, 2)), (0.0, max(v_max, 1e-12)))
    body = _legend(80, 6, [r.method if len({x.method for x in reports}) == len(reports)
                           else r.run_id for r in reports])
    body += ax.frame("iteration", "VESA total")
    for s, rep in enumerate(reports):
        color = PALETTE[s % len(PALETTE)]
        pts = " ".join(f"{_f(ax.px(r.iteration))},{_f(ax.py(r.vesa_total))}" for r in rep.rows)
        body.append(f'<polyline class="series" points="{pts}" fill="none" stroke="{color}" '
                    'stroke-width="1.5"/>')
        for r in rep.rows:
            body.append(f'<circle class="pt" cx="{_f(ax.px(r.iteration))}" '
                        f'cy="{_f(ax.py(r.vesa_total))}" r="1.5" fill="{color}" '
                        f'data-x="{r.iteration}" data-y="{float(r.vesa_total)!r}"/>')
    return _doc(width, height, body, "Volume estimate trajectories")


def emit_runtime_bars(reports, *, width: int = 560, height: int = 320) -> str:
    """Mean per-iteration formulation and solve time (stacked, microseconds)."""
    reports = reports if isinstance(reports, (list, tuple)) else [reports]
    if not reports or all(not r.rows for r in reports):
        raise ValueError("nothing to plot: no iterations")
    means = [(float(np.mean([r.formulate_ns for r in rep.rows])) / 1e3,
              float(np.mean([r.solve_ns for r in rep.rows])) / 1e3) for rep in reports]
    top = max(f + s for f, s in means)
    ax = _Axes(70, 40, width - 100, height - 90, (0, len(reports)), (0.0, top))
    body = _legend(80, 6, ["formulate", "solve"])
    body += ax.frame("method", "mean time per iteration (us)")
    bw = ax.w / len(reports) * 0.5
    for k, (rep, (f, s)) in enumerate(zip(reports, means)):
        cx = ax.px(k + 0.5)
        y_f, y_s = ax.py(f), ax.py(f + s)
        y0 = ax.py(0.0)
        body.append(f'<rect class="bar formulate" x="{_f(cx - bw / 2)}" y="{_f(y_f)}" '
                    f'width="{_f(bw)}" height="{_f(y0 - y_f)}" fill="{PALETTE[0]}" '
                    f'data-y="{f!r}"/>')
        body.append(f'<rect class="bar solve" x="{_f(cx - bw / 2)}" y="{_f(y_s)}" '
                    f'width="{_f(bw)}" height="{_f(y_f - y_s)}" fill="{PALETTE[1]}" '
                    f'data-y="{s!r}"/>')
        label = rep.method if len({r.method for r in reports}) == len(reports) else rep.run_id
        body.append(f'<text x="{_f(cx)}" y="{_f(y0 + 14)}" text-anchor="middle" font-size="10">'
                    f'{escape(label)}</text>')
    return _doc(width, height, body, "Runtime decomposition")
