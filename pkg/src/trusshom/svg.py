"""Deterministic SVG rendering of form and force diagrams.

Output is a pure function of the input: no timestamps, no randomness,
fixed float formatting.  Display coordinates are conventional floats,
but every segment also carries a ``data-exact`` attribute with the exact
rational endpoint coordinates (y flipped upright), so downstream checks
like dual-edge parallelism can be performed on the SVG text itself with
no rounding.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .documents import format_coord
from .duality import ForceDiagram, FormDiagram, RelativeForceDiagram
from .errors import InputError
from .statics import Truss

Q = Fraction


def _fmt(v: Fraction) -> str:
    return f"{float(v):.6f}"


def _collect(obj, stress):
    """(segments, dots): segments are (p1, p2, tag, stress value or None)."""
    if isinstance(obj, FormDiagram):
        obj_truss = obj.truss
    elif isinstance(obj, Truss):
        obj_truss = obj
    else:
        obj_truss = None

    if obj_truss is not None:
        x, emb = obj_truss.complex, obj_truss.embedding
        if emb.dim != 2:
            raise InputError("SVG rendering needs a planar structure")
        segs = []
        for e, (t, h) in enumerate(x.edges):
            sval = Q(stress[e]) if stress is not None else None
            segs.append((emb.p(t), emb.p(h), f"e{e}", sval))
        dots = [emb.p(v) for v in range(x.nverts)]
        return segs, dots

    if isinstance(obj, ForceDiagram):
        x = obj.form.complex
        segs = []
        for e in range(x.nedges):
            a, b = obj.dual_segment(e)
            sval = Q(stress[e]) if stress is not None else None
            segs.append((a, b, f"e{e}", sval))
        return segs, list(obj.positions)

    if isinstance(obj, RelativeForceDiagram):
        x = obj.decomposition.truss.complex
        segs = []
        for e in range(x.nedges):
            if e in obj.decomposition.loop.edges:
                continue
            a, b = obj.dual_segment(e)
            segs.append((a, b, f"e{e}", Q(obj.stress[e])))
        return segs, [obj.positions[f] for f in obj.interior_faces]

    raise InputError(f"cannot render a {type(obj).__name__} as SVG")


def render_svg(obj, stress: Optional[Sequence] = None) -> str:
    """Render a truss, form diagram or (relative) force diagram.

    When a stress is supplied, stroke width is proportional to its
    magnitude and each segment is classed tension/compression/zero by
    sign (positive stress = tension)."""
    segs, dots = _collect(obj, stress)
    if not segs:
        raise InputError("empty diagram")

    pts = [p for a, b, _, _ in segs for p in (a, b)] + list(dots)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    degenerate = xmin == xmax and ymin == ymax

    def flip(p):
        return (p[0], ymin + ymax - p[1])

    extent = max(xmax - xmin, ymax - ymin)
    if degenerate:
        margin = Q(1)
    else:
        margin = extent * Q(1, 20)
    vb = (
        _fmt(xmin - margin),
        _fmt(ymin - margin),
        _fmt(xmax - xmin + 2 * margin),
        _fmt(ymax - ymin + 2 * margin),
    )

    max_s = max((abs(s) for _, _, _, s in segs if s is not None), default=Q(0))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{vb[0]} {vb[1]} {vb[2]} {vb[3]}" width="480" height="480">',
    ]
    if degenerate:
        out.append("<!-- degenerate diagram: all points coincide -->")
    out.append('<g stroke="#222222" fill="none" stroke-linecap="round">')
    for a, b, tag, s in segs:
        fa, fb = flip(a), flip(b)
        if s is None:
            cls = "member"
            width = extent / 150 if extent else Q(1, 50)
        else:
            cls = "member " + ("tension" if s > 0 else "compression" if s < 0 else "zero")
            base = extent / 200 if extent else Q(1, 50)
            width = base + (extent / 40 if extent else Q(1, 10)) * (
                abs(s) / max_s if max_s else 0
            )
        exact = " ".join(format_coord(c) for c in (fa[0], fa[1], fb[0], fb[1]))
        out.append(
            f'<line x1="{_fmt(fa[0])}" y1="{_fmt(fa[1])}" '
            f'x2="{_fmt(fb[0])}" y2="{_fmt(fb[1])}" '
            f'class="{cls}" stroke-width="{_fmt(Q(width))}" '
            f'data-edge="{tag}" data-exact="{exact}"/>'
        )
    out.append("</g>")
    out.append('<g fill="#000000" stroke="none">')
    r = _fmt(extent / 100 if extent else Q(1, 20))
    for p in dots:
        fp = flip(p)
        out.append(f'<circle cx="{_fmt(fp[0])}" cy="{_fmt(fp[1])}" r="{r}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
