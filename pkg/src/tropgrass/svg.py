"""Hive diagrams: the unit triangular lattice in each triangle, with an interior
unit edge drawn exactly when its rhombus inequality is strict.

Coordinates are exact rationals until the SVG text is written, so segment sets
can be compared structurally.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .hive import hive_check, triangle_rhombi
from .labels import FlagMonomial
from .seeds import Triangulation
from .trop import TropPoint

TRIANGLE_CORNERS = {"A": (Fraction(0), Fraction(9, 5)), "B": (Fraction(-2), Fraction(-9, 5)),
                    "C": (Fraction(2), Fraction(-9, 5))}


def polygon_layout(n: int, radius: Fraction = Fraction(7, 5)) -> dict:
    """Vertex positions on a circle (rounded to 1/100), vertex 1 at angle 0, counterclockwise."""
    out = {}
    for v in range(1, n + 1):
        ang = 2 * math.pi * (v - 1) / n
        out[v] = (Fraction(round(float(radius) * math.cos(ang) * 100), 100),
                  Fraction(round(float(radius) * math.sin(ang) * 100), 100))
    return out


def triangle_layout(tri=(1, 2, 3)) -> dict:
    """The three vertices of ``tri`` at the corners A (top), B (left), C (right)."""
    A, B, C = TRIANGLE_CORNERS["A"], TRIANGLE_CORNERS["B"], TRIANGLE_CORNERS["C"]
    return dict(zip(tri, (A, B, C)))


def _point(tri, p, layout, k):
    x = sum((Fraction(e) * layout[v][0] for v, e in zip(tri, p)), Fraction(0)) / k
    y = sum((Fraction(e) * layout[v][1] for v, e in zip(tri, p)), Fraction(0)) / k
    return (x, y)


def _unit_edges(k: int):
    pts = [(a, b, k - a - b) for a in range(k + 1) for b in range(k + 1 - a)]
    ps = set(pts)
    out = []
    for p in pts:
        for d in ((0, 1, -1), (1, 0, -1), (1, -1, 0)):
            q = tuple(x + y for x, y in zip(p, d))
            if q in ps:
                out.append((p, q))
    return out


def strict_edges(x, k: int, n: int, T: Triangulation) -> dict:
    """{triangle: set of interior unit edges (p, q) whose rhombus slack is > 0}."""
    rep = hive_check(x, k, n, T)
    out = {tuple(t): set() for t in T.triangles}
    for (_, tri, p, q), _, _, slack in rep.rows:
        if slack > 0:
            out[tuple(tri)].add((p, q))
    return out


def _merge(segments):
    """Merge collinear unit segments sharing endpoints into maximal segments."""
    segs = {frozenset(s) for s in segments}
    changed = True
    while changed:
        changed = False
        for s in list(segs):
            if s not in segs:
                continue
            a, b = tuple(s)
            for t in list(segs):
                if t == s or not (s & t):
                    continue
                c, d = tuple(t)
                shared = (s & t)
                if len(shared) != 1:
                    continue
                m = next(iter(shared))
                u = next(iter(s - shared))
                w = next(iter(t - shared))
                # collinear and on opposite sides of m
                cross = (m[0] - u[0]) * (w[1] - m[1]) - (m[1] - u[1]) * (w[0] - m[0])
                dot = (m[0] - u[0]) * (w[0] - m[0]) + (m[1] - u[1]) * (w[1] - m[1])
                if cross == 0 and dot > 0:
                    segs.discard(s)
                    segs.discard(t)
                    segs.add(frozenset((u, w)))
                    changed = True
                    break
    return segs


def hive_segments(x, k: int, n: int, T: Triangulation | None = None, layout: Mapping | None = None) -> set:
    """Maximal drawn segments (frozensets of two exact points): boundary edges of
    each triangle plus interior unit edges with strict slack."""
    T = T or Triangulation.fan(n)
    layout = layout or (triangle_layout(T.triangles[0]) if len(T.triangles) == 1 else polygon_layout(n))
    strict = strict_edges(x, k, n, T)
    unit = []
    for tri in T.triangles:
        tri = tuple(tri)
        for p, q in _unit_edges(k):
            boundary = any(a == 0 and b == 0 for a, b in zip(p, q))
            if boundary or (p, q) in strict[tri] or (q, p) in strict[tri]:
                unit.append((_point(tri, p, layout, k), _point(tri, q, layout, k)))
    return _merge(unit)


def crease_summary(x, k: int, n: int, T: Triangulation | None = None) -> dict:
    """Per triangle: (feet, branch count). Feet are the side lattice points (as edge
    labels) touched by strict interior edges; branch points have degree >= 3."""
    T = T or Triangulation.fan(n)
    out = {}
    for tri, edges in strict_edges(x, k, n, T).items():
        deg: dict = {}
        for p, q in edges:
            deg[p] = deg.get(p, 0) + 1
            deg[q] = deg.get(q, 0) + 1
        feet = set()
        for p in deg:
            if 0 in p:
                feet.add(FlagMonomial(tuple((v, e) for v, e in zip(tri, p) if e)))
        branch = sum(1 for p, d in deg.items() if d >= 3 and 0 not in p)
        out[tri] = (frozenset(feet), branch)
    return out


def _fmt(v: Fraction) -> str:
    s = f"{float(v):.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_hive_svg(x, k: int | None = None, n: int | None = None, T: Triangulation | None = None,
                    layout: Mapping | None = None, scale: int = 100, title: str | None = None) -> str:
    """SVG document of the hive diagram. The output is a pure function of the
    slack signs and the layout; segments are written in sorted order."""
    if isinstance(x, TropPoint) and x.ref is not None:
        k = k or x.ref["k"]
        n = n or x.ref["n"]
        if T is None and "triangles" in x.ref and not x.ref.get("path"):
            T = Triangulation(x.ref["n"], [tuple(t) for t in x.ref["triangles"]])
    if k is None or n is None:
        vals = x.by_label() if isinstance(x, TropPoint) else dict(x)
        k = k or next(iter(vals)).k
        n = n or max(v for lab in vals for v in lab.support)
    T = T or Triangulation.fan(n)
    segs = hive_segments(x, k, n, T, layout)
    pts = [p for s in segs for p in s]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = Fraction(1, 5)
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    w, h = (x1 - x0) * scale, (y1 - y0) * scale
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
    ]
    if title:
        lines.append(f"  <title>{title}</title>")
    lines.append('  <g stroke="black" stroke-width="2" stroke-linecap="round" fill="none">')

    def key(s):
        return tuple(sorted(s))

    for s in sorted(segs, key=key):
        (ax, ay), (bx, by) = sorted(s)
        lines.append(f'    <line x1="{_fmt((ax - x0) * scale)}" y1="{_fmt((y1 - ay) * scale)}" '
                     f'x2="{_fmt((bx - x0) * scale)}" y2="{_fmt((y1 - by) * scale)}"/>')
    lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


__all__ = ["render_hive_svg", "hive_segments", "crease_summary", "strict_edges",
           "polygon_layout", "triangle_layout", "TRIANGLE_CORNERS", "triangle_rhombi"]
