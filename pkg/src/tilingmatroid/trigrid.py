"""Coordinates and lattice-triangle combinatorics of the subdivided triangle T_n.

Cells are barycentric integer triples.  An upward cell ``(a, b, c)`` has
``a + b + c == n - 1``; a downward cell has ``a + b + c == n - 2``.  The
coordinate ``c`` counts rows from the bottom edge, ``b`` counts positions
from the left inside a row::

    n = 3                     row c
                 /\\
                /  \\            2      up (0,0,2)
               /____\\
              /\\    /\\
             /  \\  /  \\        1      up (1,0,1)  down (0,0,1)  up (0,1,1)
            /____\\/____\\
           /\\    /\\    /\\
          /  \\  /  \\  /  \\    0      up (2,0,0)  down (1,0,0)  up (1,1,0)
         /____\\/____\\/____\\            down (0,1,0)  up (0,2,0)

A downward cell ``(a, b, c)`` touches the upward cells ``(a+1, b, c)`` (left),
``(a, b+1, c)`` (right) and ``(a, b, c+1)`` (above, across its horizontal
edge).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Optional

from tilingmatroid.errors import EmptyInputError, InvalidParameterError


class UpCell(NamedTuple):
    a: int
    b: int
    c: int


class DownCell(NamedTuple):
    a: int
    b: int
    c: int


class LatticeTri(NamedTuple):
    """Translate of T_k inside T_n: upward cells with a >= p, b >= q, c >= r."""

    p: int
    q: int
    r: int
    k: int

    @property
    def n(self) -> int:
        return self.p + self.q + self.r + self.k


class Saturation(NamedTuple):
    count: int
    cls: str  # "under" | "saturated" | "strict"
    complete: bool


UNDER = "under"
SATURATED = "saturated"
STRICT = "strict"


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidParameterError(f"ambient size must be a positive integer, got {n!r}")


def ambient_of(cell: UpCell) -> int:
    return cell.a + cell.b + cell.c + 1


def is_up_cell(n: int, cell) -> bool:
    a, b, c = cell
    return a >= 0 and b >= 0 and c >= 0 and a + b + c == n - 1


def is_down_cell(n: int, cell) -> bool:
    a, b, c = cell
    return a >= 0 and b >= 0 and c >= 0 and a + b + c == n - 2


@lru_cache(maxsize=None)
def _up_cells(n: int) -> tuple[UpCell, ...]:
    cells = [UpCell(a, b, n - 1 - a - b) for a in range(n) for b in range(n - a)]
    return tuple(sorted(cells, reverse=True))


@lru_cache(maxsize=None)
def _down_cells(n: int) -> tuple[DownCell, ...]:
    cells = [DownCell(a, b, n - 2 - a - b) for a in range(n - 1) for b in range(n - 1 - a)]
    return tuple(sorted(cells, reverse=True))


@lru_cache(maxsize=None)
def _up_index(n: int) -> dict[UpCell, int]:
    return {u: i for i, u in enumerate(_up_cells(n))}


@lru_cache(maxsize=None)
def _down_index(n: int) -> dict[DownCell, int]:
    return {d: i for i, d in enumerate(_down_cells(n))}


def up_cells(n: int) -> list[UpCell]:
    """All upward cells of T_n, sorted lexicographically in descending order.

    The position of a cell in this list is its bit position inside a
    :class:`CellSet` mask.
    """
    _check_n(n)
    return list(_up_cells(n))


def down_cells(n: int) -> list[DownCell]:
    _check_n(n)
    return list(_down_cells(n))


def up_index(n: int, cell: UpCell) -> int:
    try:
        return _up_index(n)[cell]
    except KeyError:
        raise InvalidParameterError(f"{tuple(cell)} is not an upward cell of T_{n}") from None


def down_index(n: int, cell: DownCell) -> int:
    try:
        return _down_index(n)[cell]
    except KeyError:
        raise InvalidParameterError(f"{tuple(cell)} is not a downward cell of T_{n}") from None


def up_neighbors(d: DownCell) -> list[UpCell]:
    """Left, right and above neighbours of a downward cell, in that order."""
    a, b, c = d
    return [UpCell(a + 1, b, c), UpCell(a, b + 1, c), UpCell(a, b, c + 1)]


def above(d: DownCell) -> UpCell:
    """The upward cell sharing the horizontal edge of ``d``."""
    return UpCell(d.a, d.b, d.c + 1)


def down_neighbors(u: UpCell) -> list[DownCell]:
    a, b, c = u
    out = []
    if a > 0:
        out.append(DownCell(a - 1, b, c))
    if b > 0:
        out.append(DownCell(a, b - 1, c))
    if c > 0:
        out.append(DownCell(a, b, c - 1))
    return out


@lru_cache(maxsize=None)
def _lattice_triangles(n: int) -> tuple[LatticeTri, ...]:
    out = []
    for k in range(n, 0, -1):
        m = n - k
        for p in range(m, -1, -1):
            for q in range(m - p, -1, -1):
                out.append(LatticeTri(p, q, m - p - q, k))
    return tuple(out)


def lattice_triangles(n: int) -> list[LatticeTri]:
    """Every lattice upward triangle of T_n, largest first; n(n+1)(n+2)/6 of them."""
    _check_n(n)
    return list(_lattice_triangles(n))


def whole(n: int) -> LatticeTri:
    _check_n(n)
    return LatticeTri(0, 0, 0, n)


def check_tri(n: int, t: LatticeTri) -> None:
    p, q, r, k = t
    if k < 1 or min(p, q, r) < 0 or p + q + r + k != n:
        raise InvalidParameterError(f"{tuple(t)} is not a lattice triangle of T_{n}")


def tri_contains(t: LatticeTri, u: UpCell) -> bool:
    if t.n != ambient_of(u):
        raise InvalidParameterError(
            f"triangle {tuple(t)} lives in T_{t.n} but cell {tuple(u)} lives in T_{ambient_of(u)}"
        )
    return u.a >= t.p and u.b >= t.q and u.c >= t.r


def tri_contains_down(t: LatticeTri, d: DownCell) -> bool:
    return d.a >= t.p and d.b >= t.q and d.c >= t.r


def tri_up_cells(t: LatticeTri) -> list[UpCell]:
    return [u for u in _up_cells(t.n) if u.a >= t.p and u.b >= t.q and u.c >= t.r]


def tri_down_cells(t: LatticeTri) -> list[DownCell]:
    return [d for d in _down_cells(t.n) if d.a >= t.p and d.b >= t.q and d.c >= t.r]


@lru_cache(maxsize=None)
def tri_mask(t: LatticeTri) -> int:
    index = _up_index(t.n)
    m = 0
    for u in tri_up_cells(t):
        m |= 1 << index[u]
    return m


class CellSet:
    """Immutable subset of the upward cells of T_n, stored as a bitmask."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: int = 0):
        _check_n(n)
        if mask < 0 or mask >> len(_up_cells(n)):
            raise InvalidParameterError(f"mask {mask:#x} has bits outside T_{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("CellSet is immutable")

    @classmethod
    def from_cells(cls, n: int, cells: Iterable) -> "CellSet":
        _check_n(n)
        index = _up_index(n)
        m = 0
        for cell in cells:
            key = UpCell(*cell)
            if key not in index:
                raise InvalidParameterError(f"{tuple(cell)} is not an upward cell of T_{n}")
            m |= 1 << index[key]
        return cls(n, m)

    @classmethod
    def full(cls, n: int) -> "CellSet":
        _check_n(n)
        return cls(n, (1 << len(_up_cells(n))) - 1)

    @classmethod
    def empty(cls, n: int) -> "CellSet":
        return cls(n, 0)

    @classmethod
    def of_triangle(cls, t: LatticeTri) -> "CellSet":
        return cls(t.n, tri_mask(t))

    def __iter__(self) -> Iterator[UpCell]:
        cells = _up_cells(self.n)
        m = self.mask
        while m:
            low = m & -m
            yield cells[low.bit_length() - 1]
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, cell) -> bool:
        i = _up_index(self.n).get(UpCell(*cell))
        return i is not None and bool(self.mask >> i & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return self.n == other.n and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def _same(self, other: "CellSet") -> None:
        if self.n != other.n:
            raise InvalidParameterError(f"cell sets of T_{self.n} and T_{other.n} cannot be combined")

    def __or__(self, other: "CellSet") -> "CellSet":
        self._same(other)
        return CellSet(self.n, self.mask | other.mask)

    def __and__(self, other: "CellSet") -> "CellSet":
        self._same(other)
        return CellSet(self.n, self.mask & other.mask)

    def __sub__(self, other: "CellSet") -> "CellSet":
        self._same(other)
        return CellSet(self.n, self.mask & ~other.mask)

    def __le__(self, other: "CellSet") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def with_cell(self, cell) -> "CellSet":
        return CellSet(self.n, self.mask | 1 << up_index(self.n, UpCell(*cell)))

    def without_cell(self, cell) -> "CellSet":
        return CellSet(self.n, self.mask & ~(1 << up_index(self.n, UpCell(*cell))))

    def complement(self) -> "CellSet":
        return CellSet.full(self.n) - self

    def to_list(self) -> list[tuple[int, int, int]]:
        return [tuple(u) for u in self]

    def __repr__(self) -> str:
        return f"CellSet(n={self.n}, cells={self.to_list()})"


def triangular_hull(s: CellSet) -> LatticeTri:
    """Smallest lattice upward triangle containing every cell of ``s``."""
    if not s:
        raise EmptyInputError("the triangular hull of the empty set is undefined")
    cells = list(s)
    p = min(u.a for u in cells)
    q = min(u.b for u in cells)
    r = min(u.c for u in cells)
    return LatticeTri(p, q, r, s.n - p - q - r)


def saturation(t: LatticeTri, s: CellSet) -> Saturation:
    if t.n != s.n:
        raise InvalidParameterError(f"triangle of T_{t.n} against cell set of T_{s.n}")
    tm = tri_mask(t)
    count = (s.mask & tm).bit_count()
    if count < t.k:
        cls = UNDER
    elif count == t.k:
        cls = SATURATED
    else:
        cls = STRICT
    return Saturation(count, cls, count == t.k * (t.k + 1) // 2)


def tri_intersect(t: LatticeTri, u: LatticeTri) -> Optional[LatticeTri]:
    """Intersection of two lattice triangles, or None when it holds no upward cell."""
    if t.n != u.n:
        raise InvalidParameterError(f"triangles of T_{t.n} and T_{u.n}")
    p, q, r = max(t.p, u.p), max(t.q, u.q), max(t.r, u.r)
    k = t.n - p - q - r
    if k <= 0:
        return None
    return LatticeTri(p, q, r, k)


def tri_join(t: LatticeTri, u: LatticeTri) -> LatticeTri:
    if t.n != u.n:
        raise InvalidParameterError(f"triangles of T_{t.n} and T_{u.n}")
    p, q, r = min(t.p, u.p), min(t.q, u.q), min(t.r, u.r)
    return LatticeTri(p, q, r, t.n - p - q - r)
