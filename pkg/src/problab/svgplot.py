"""Minimal deterministic SVG chart for p-series on the log-n axis.

No plotting dependency: the byte output is a pure function of the input
series, so tests can diff it. Exact/certified points get filled circles and
diamonds, Monte Carlo points get crosses with error bars (4 stderr).
"""

from __future__ import annotations

import math

WIDTH, HEIGHT = 800, 500
MARGIN = 60


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def emit_plot(series, title: str = "one-winner probability vs log n") -> str:
    entries = [e for e in sorted(series.entries, key=lambda e: e.n) if e.n >= 1]
    if not entries:
        raise ValueError("cannot plot an empty series")
    xs = [math.log(e.n) for e in entries]
    ys = [e.value for e in entries]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    y_lo = min(0.0, min(ys))
    y_hi = max(1.0, max(ys))

    def sx(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2 * MARGIN)

    def sy(y):
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{title}</text>',
        # axes
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    # x ticks at integer log n, y ticks at 0, 0.25, ..., 1
    for k in range(int(math.floor(x_lo)), int(math.ceil(x_hi)) + 1):
        if x_lo <= k <= x_hi:
            px = sx(k)
            parts.append(f'<line x1="{_fmt(px)}" y1="{HEIGHT - MARGIN}" '
                         f'x2="{_fmt(px)}" y2="{HEIGHT - MARGIN + 6}" stroke="black"/>')
            parts.append(f'<text x="{_fmt(px)}" y="{HEIGHT - MARGIN + 20}" '
                         f'text-anchor="middle" font-family="monospace" '
                         f'font-size="11">{k}</text>')
    for i in range(5):
        yv = y_lo + i * (y_hi - y_lo) / 4
        py = sy(yv)
        parts.append(f'<line x1="{MARGIN - 6}" y1="{_fmt(py)}" x2="{MARGIN}" '
                     f'y2="{_fmt(py)}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN - 10}" y="{_fmt(py + 4)}" '
                     f'text-anchor="end" font-family="monospace" '
                     f'font-size="11">{yv:.2f}</text>')
    # connecting polyline
    pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#999" '
                 f'stroke-width="1"/>')
    for e, x in zip(entries, xs):
        px, py = sx(x), sy(e.value)
        if e.provenance == "mc":
            if e.err > 0:
                lo, hi = sy(e.value - 4 * e.err), sy(e.value + 4 * e.err)
                parts.append(f'<line x1="{_fmt(px)}" y1="{_fmt(lo)}" '
                             f'x2="{_fmt(px)}" y2="{_fmt(hi)}" '
                             f'stroke="#c33" stroke-width="1"/>')
            parts.append(f'<path d="M {_fmt(px - 3)} {_fmt(py - 3)} '
                         f'L {_fmt(px + 3)} {_fmt(py + 3)} '
                         f'M {_fmt(px - 3)} {_fmt(py + 3)} '
                         f'L {_fmt(px + 3)} {_fmt(py - 3)}" '
                         f'stroke="#c33" stroke-width="1.5" class="mc"/>')
        elif e.provenance == "certified":
            parts.append(f'<path d="M {_fmt(px)} {_fmt(py - 4)} '
                         f'L {_fmt(px + 4)} {_fmt(py)} '
                         f'L {_fmt(px)} {_fmt(py + 4)} '
                         f'L {_fmt(px - 4)} {_fmt(py)} Z" '
                         f'fill="#36c" class="certified"/>')
        else:
            parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.5" '
                         f'fill="#222" class="exact"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
