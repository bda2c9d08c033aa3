"""Tiny dependency-free SVG emitters for root scatters and time traces."""

from __future__ import annotations

__all__ = ["spectrum_svg", "trace_svg"]

_W, _H, _PAD = 640, 480, 40


def _mapper(lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0

    def f(v):
        return out_lo + (v - lo) / span * (out_hi - out_lo)

    return f


def _frame(title: str, body: list[str]) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" '
        f'fill="none" stroke="#888"/>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def spectrum_svg(report) -> str:
    """Scatter of located roots; marker radius grows with multiplicity."""
    rect = report.rectangle
    fx = _mapper(rect.re_min, rect.re_max, _PAD, _W - _PAD)
    fy = _mapper(rect.im_min, rect.im_max, _H - _PAD, _PAD)
    body = []
    if rect.re_min < 0 < rect.re_max:
        x0 = fx(0.0)
        body.append(
            f'<line x1="{x0:.2f}" y1="{_PAD}" x2="{x0:.2f}" y2="{_H - _PAD}" '
            f'stroke="#ccc" stroke-dasharray="4 3"/>'
        )
    for rec in report.roots:
        cx = fx(rec.location.real)
        cy = fy(rec.location.imag)
        r = 3 + 2 * rec.multiplicity
        body.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r}" fill="none" '
            f'stroke="#c22" stroke-width="1.5"/>'
        )
        body.append(
            f'<text x="{cx + r + 2:.2f}" y="{cy:.2f}" font-size="10">'
            f"{rec.multiplicity}</text>"
        )
    return _frame(f"spectrum, {report.total_count} roots counted", body)


def trace_svg(traces, labels=None) -> str:
    """Overlaid time responses (component 0), one polyline per trace."""
    if not isinstance(traces, (list, tuple)):
        traces = [traces]
    labels = labels or [f"trace {i}" for i in range(len(traces))]
    t_max = max(float(tr.times[-1]) for tr in traces)
    y_lo = min(float(tr.y.min()) for tr in traces)
    y_hi = max(float(tr.y.max()) for tr in traces)
    fx = _mapper(0.0, t_max, _PAD, _W - _PAD)
    fy = _mapper(y_lo, y_hi, _H - _PAD, _PAD)
    colors = ["#1a6", "#36c", "#c22", "#a3a"]
    body = []
    if y_lo < 0 < y_hi:
        y0 = fy(0.0)
        body.append(
            f'<line x1="{_PAD}" y1="{y0:.2f}" x2="{_W - _PAD}" y2="{y0:.2f}" '
            f'stroke="#ccc" stroke-dasharray="4 3"/>'
        )
    for i, tr in enumerate(traces):
        pts = " ".join(
            f"{fx(float(t)):.2f},{fy(float(v)):.2f}" for t, v in zip(tr.times, tr.y)
        )
        color = colors[i % len(colors)]
        body.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        body.append(
            f'<text x="{_W - _PAD - 4}" y="{_PAD + 14 + 14 * i}" text-anchor="end" '
            f'font-size="11" fill="{color}">{labels[i]}</text>'
        )
    return _frame("time response", body)
