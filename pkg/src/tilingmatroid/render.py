"""SVG and ASCII pictures of tilings.

Upward cell (a, b, c) has corners (b + c/2, c*h), (b + 1 + c/2, c*h) and
(b + 1/2 + c/2, (c + 1)*h) with h = sqrt(3)/2, y pointing up and row 0 at
the bottom.  SVG flips y so the base stays at the bottom of the picture.
"""

from __future__ import annotations

import math
from collections import Counter
from xml.sax.saxutils import quoteattr

from tilingmatroid.tiler import RHOMBUS, T1, T2, UNIT_DOWN, UNIT_UP, Tiling
from tilingmatroid.trigrid import DownCell, UpCell, _down_cells, _up_cells

H = math.sqrt(3) / 2
SCALE = 40.0
MARGIN = 10.0

SVG_CLASS = {
    RHOMBUS: "rhombus",
    T1: "t1",
    T2: "t2",
    UNIT_UP: "unit-up",
    UNIT_DOWN: "unit-down",
}

STYLE = (
    ".hole{fill:#333}"
    ".rhombus{fill:#9ecae1}"
    ".t1{fill:#fdae6b}"
    ".t2{fill:#a1d99b}"
    ".unit-up{fill:#fff}"
    ".unit-down{fill:#ddd}"
    "polygon{stroke:#000;stroke-width:1;stroke-linejoin:round}"
)


def up_vertices(u: UpCell) -> list[tuple[float, float]]:
    _, b, c = u
    return [(b + c / 2, c * H), (b + 1 + c / 2, c * H), (b + 0.5 + c / 2, (c + 1) * H)]


def down_vertices(d: DownCell) -> list[tuple[float, float]]:
    _, b, c = d
    return [(b + 1 + c / 2, c * H), (b + 1.5 + c / 2, (c + 1) * H), (b + 0.5 + c / 2, (c + 1) * H)]


def _key(p):
    # round so shared corners of neighbouring triangles compare equal
    return (round(p[0] * 2), round(p[1] / H))


def outline(triangles: list[list[tuple[float, float]]]) -> list[tuple[float, float]]:
    """Boundary of a union of edge-adjacent triangles, as one vertex loop."""
    count = Counter()
    coords = {}
    for tri in triangles:
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            ka, kb = _key(a), _key(b)
            coords[ka], coords[kb] = a, b
            count[frozenset((ka, kb))] += 1
    nxt = {}
    for tri in triangles:
        for i in range(3):
            ka, kb = _key(tri[i]), _key(tri[(i + 1) % 3])
            if count[frozenset((ka, kb))] == 1:
                nxt[ka] = kb
    if not nxt:
        return []
    start = min(nxt)
    loop = [start]
    cur = nxt[start]
    while cur != start:
        loop.append(cur)
        cur = nxt[cur]
    # drop corners where the boundary runs straight on
    pts = [coords[k] for k in loop]
    out = []
    for i, p in enumerate(pts):
        a, b = pts[i - 1], pts[(i + 1) % len(pts)]
        cross = (p[0] - a[0]) * (b[1] - p[1]) - (p[1] - a[1]) * (b[0] - p[0])
        if abs(cross) > 1e-9:
            out.append(p)
    return out


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def render_svg(t: Tiling) -> str:
    n = t.region.n
    width = n * SCALE + 2 * MARGIN
    height = n * H * SCALE + 2 * MARGIN

    def pt(p):
        x = MARGIN + p[0] * SCALE
        y = height - MARGIN - p[1] * SCALE
        return f"{_fmt(x)},{_fmt(y)}"

    def poly(cls, vs):
        return f"<polygon class={quoteattr(cls)} points={quoteattr(' '.join(pt(v) for v in vs))}/>"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f"<style>{STYLE}</style>",
    ]
    holes = t.region.holes
    for u in _up_cells(n):
        if u in holes:
            lines.append(poly("hole", up_vertices(u)))
    for d in _down_cells(n):
        if d in t.region.down_holes:
            lines.append(poly("hole", down_vertices(d)))
    for tile in t.tiles:
        tris = [up_vertices(u) for u in tile.ups] + [down_vertices(d) for d in tile.downs]
        lines.append(poly(SVG_CLASS[tile.kind], outline(tris)))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_LABELS = {
    RHOMBUS: "abcdefghijklmnopqrstuvwxyz",
    T1: "ABCDEFGHIJKLMNOPQRSTUVWXYZ",
    T2: "0123456789",
}


def render_ascii(t: Tiling) -> str:
    """One text row per cell row, top row first.

    Holes are ``#``, unit triangles ``^`` (up) and ``v`` (down).  Rhombi are
    lowercase letters, type-1 trapezoids uppercase, type-2 trapezoids digits;
    all cells of one tile share its character.  Uncovered cells are ``.``.
    """
    n = t.region.n
    glyph = {}
    seen = Counter()
    for tile in t.tiles:
        if tile.kind is UNIT_UP:
            ch = "^"
        elif tile.kind is UNIT_DOWN:
            ch = "v"
        else:
            alphabet = _LABELS[tile.kind]
            ch = alphabet[seen[tile.kind] % len(alphabet)]
            seen[tile.kind] += 1
        for u in tile.ups:
            glyph[("u", u)] = ch
        for d in tile.downs:
            glyph[("d", d)] = ch
    rows = []
    for c in range(n - 1, -1, -1):
        row = []
        for b in range(n - c):
            u = UpCell(n - 1 - c - b, b, c)
            row.append("#" if u in t.region.holes else glyph.get(("u", u), "."))
            if b < n - 1 - c:
                d = DownCell(n - 2 - c - b, b, c)
                row.append("#" if d in t.region.down_holes else glyph.get(("d", d), "."))
        rows.append(" " * c + "".join(row))
    return "\n".join(rows) + "\n"


def render(t: Tiling, fmt: str = "svg") -> str:
    if fmt == "svg":
        return render_svg(t)
    if fmt == "ascii":
        return render_ascii(t)
    raise ValueError(f"unknown render format {fmt!r}")
