"""Matplotlib drawings of curve sets, faces and small report charts."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .arrangement import Arrangement  # noqa: E402
from .geometry import CurveSet  # noqa: E402

_SVG_META = {"Date": None}


def _view(cs: CurveSet, extra=()):
    xs = [float(v.x) for c in cs.curves for v in c.vertices] + [float(p[0]) for p in extra]
    ys = [float(v.y) for c in cs.curves for v in c.vertices] + [float(p[1]) for p in extra]
    if not xs:
        return (-1.0, 1.0, -1.0, 1.0)
    pad = max(max(xs) - min(xs), max(ys) - min(ys), 1.0) * 0.15
    return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)


def _polyline(c, box):
    x0, x1, y0, y1 = box
    reach = 2 * max(x1 - x0, y1 - y0)
    pts = [(float(v.x), float(v.y)) for v in c.vertices]
    if c.start is not None:
        d = _unit(c.start)
        pts.insert(0, (pts[0][0] + reach * d[0], pts[0][1] + reach * d[1]))
    if c.end is not None:
        d = _unit(c.end)
        pts.append((pts[-1][0] + reach * d[0], pts[-1][1] + reach * d[1]))
    return pts


def _unit(d):
    x, y = float(d[0]), float(d[1])
    n = (x * x + y * y) ** 0.5
    return x / n, y / n


def draw(ax, cs: CurveSet, color="0.2", width=1.0, label_curves=True, box=None, linestyle="-"):
    box = box or _view(cs)
    for c in cs.curves:
        pts = _polyline(c, box)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color=color, lw=width, ls=linestyle)
        for p in c.endpoints():
            ax.plot([float(p.x)], [float(p.y)], "o", ms=2.5, color=color)
        if label_curves:
            v = c.vertices[len(c.vertices) // 2]
            ax.annotate(c.id, (float(v.x), float(v.y)), fontsize=6, color=color)
    ax.set_xlim(box[0], box[1])
    ax.set_ylim(box[2], box[3])
    ax.set_aspect("equal", adjustable="box")


def draw_face(ax, arr: Arrangement, f: int, color="tab:red"):
    for c in arr.face_cycles(f):
        for h in arr.cycles[c]:
            if arr.he_curve[h] is None:
                continue
            path = arr.he_path[h]
            ax.plot([float(p[0]) for p in path], [float(p[1]) for p in path], color=color, lw=2.2, alpha=0.6)


def render(cs: CurveSet, out, arr: Arrangement | None = None, face: int | None = None,
           overlay: CurveSet | None = None, witness=None, title: str | None = None) -> None:
    """Write an SVG (or any format matplotlib infers from ``out``)."""
    extra = [witness] if witness is not None else []
    box = _view(overlay if overlay is not None else cs, extra)
    fig, ax = plt.subplots(figsize=(6, 6))
    if overlay is not None:
        draw(ax, cs, color="0.75", width=3.0, label_curves=False, box=box)
        draw(ax, overlay, color="tab:blue", box=box)
    else:
        draw(ax, cs, box=box)
    if arr is not None and face is not None:
        draw_face(ax, arr, face)
    if witness is not None:
        ax.plot([float(witness[0])], [float(witness[1])], "x", color="tab:green")
    if title:
        ax.set_title(title, fontsize=9)
    _save(fig, out)


def line_chart(xs, series: dict, out, xlabel: str = "", ylabel: str = "", title: str | None = None) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name, ys in series.items():
        ax.plot(xs, ys, marker="o", label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(fontsize=7)
    _save(fig, out)


def _save(fig, out) -> None:
    plt.rcParams["svg.hashsalt"] = "singleface"
    fmt = str(out).rsplit(".", 1)[-1].lower() if "." in str(out) else "svg"
    meta = _SVG_META if fmt == "svg" else None
    fig.savefig(out, format=fmt, metadata=meta, bbox_inches="tight")
    plt.close(fig)
