"""Definition-based oracles for the tiling matroid on the upward cells of T_n.

A set is independent when no lattice upward triangle of size k holds more
than k of its cells.  Everything else (rank, closure, bases, circuits, flats)
is derived from that test.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterator, Optional

from tilingmatroid.errors import InvalidParameterError, PreconditionError, ResourceLimitError
from tilingmatroid.tiler import HoleyRegion, max_rhombi_tiling, UNIT_DOWN
from tilingmatroid.trigrid import (
    SATURATED,
    STRICT,
    CellSet,
    LatticeTri,
    _lattice_triangles,
    saturation,
    tri_mask,
)

DEFAULT_ENUM_BUDGET = 1 << 15
KINDS = ("bases", "circuits", "flats", "independents")


class MatroidContext:
    """Lattice triangles of T_n with their member bitmasks, shared by all oracles."""

    def __init__(self, n: int, budget: int = DEFAULT_ENUM_BUDGET):
        if not isinstance(n, int) or n < 1:
            raise InvalidParameterError(f"ambient size must be a positive integer, got {n!r}")
        self.n = n
        self.size = n * (n + 1) // 2
        self.budget = budget
        self.triangles: tuple[LatticeTri, ...] = _lattice_triangles(n)
        self.masks: tuple[int, ...] = tuple(tri_mask(t) for t in self.triangles)
        # scan order for independence: small triangles first, they fail fastest
        order = sorted(range(len(self.triangles)), key=lambda i: self.triangles[i].k)
        self._scan = tuple((self.triangles[i].k, self.masks[i]) for i in order)
        self._indep_table: Optional[bytearray] = None

    def cells(self, s) -> CellSet:
        if isinstance(s, CellSet):
            if s.n != self.n:
                raise InvalidParameterError(f"cell set of T_{s.n} passed to a T_{self.n} context")
            return s
        return CellSet.from_cells(self.n, s)

    def independence_table(self) -> bytearray:
        """Independence of every mask of the ground set, computed once on demand."""
        if self._indep_table is None:
            total = 1 << self.size
            if total > self.budget:
                raise ResourceLimitError(
                    f"independence table needs {total} subsets, budget is {self.budget}", self.budget
                )
            self._indep_table = bytearray(_indep_mask(self, m) for m in range(total))
        return self._indep_table


def _indep_mask(ctx: MatroidContext, mask: int) -> bool:
    size = mask.bit_count()
    for k, tm in ctx._scan:
        if k >= size:
            break
        if (mask & tm).bit_count() > k:
            return False
    return True


def violating_triangle(ctx: MatroidContext, s: CellSet) -> Optional[LatticeTri]:
    """Some lattice triangle holding more cells of ``s`` than its size, if any."""
    s = ctx.cells(s)
    for t, tm in zip(ctx.triangles, ctx.masks):
        if (s.mask & tm).bit_count() > t.k:
            return t
    return None


def is_independent(ctx: MatroidContext, s: CellSet) -> bool:
    return _indep_mask(ctx, ctx.cells(s).mask)


def _greedy_basis(ctx: MatroidContext, mask: int) -> int:
    kept = 0
    m = mask
    while m:
        low = m & -m
        m ^= low
        if _indep_mask(ctx, kept | low):
            kept |= low
    return kept


def rank(ctx: MatroidContext, s: CellSet) -> int:
    """Size of a largest independent subset, built greedily in canonical order."""
    return _greedy_basis(ctx, ctx.cells(s).mask).bit_count()


def rank_via_matching(ctx: MatroidContext, s: CellSet) -> int:
    """Rank read off a max-rhombi tiling: unmatched downward cells = |s| - r(s)."""
    s = ctx.cells(s)
    tiling = max_rhombi_tiling(HoleyRegion.of(s))
    return len(s) - tiling.count(UNIT_DOWN)


def closure(ctx: MatroidContext, s: CellSet) -> CellSet:
    """Cells x with r(s + x) = r(s).

    Tested against a fixed basis B of ``s``: r(s + x) = r(s) exactly when
    B + x is dependent.
    """
    s = ctx.cells(s)
    basis = _greedy_basis(ctx, s.mask)
    out = s.mask
    for i in range(ctx.size):
        bit = 1 << i
        if not s.mask & bit and not _indep_mask(ctx, basis | bit):
            out |= bit
    return CellSet(ctx.n, out)


def is_basis(ctx: MatroidContext, s: CellSet) -> bool:
    s = ctx.cells(s)
    return len(s) == ctx.n and is_independent(ctx, s)


def is_circuit(ctx: MatroidContext, s: CellSet) -> bool:
    s = ctx.cells(s)
    if not s or _indep_mask(ctx, s.mask):
        return False
    m = s.mask
    while m:
        low = m & -m
        m ^= low
        if not _indep_mask(ctx, s.mask ^ low):
            return False
    return True


def is_flat_closure(ctx: MatroidContext, s: CellSet) -> bool:
    s = ctx.cells(s)
    return closure(ctx, s) == s


def is_flat_geometric(ctx: MatroidContext, s: CellSet) -> bool:
    """Every lattice triangle holding at least size-many cells of ``s`` lies inside ``s``.

    This is the literal over-saturation criterion; it rejects some closed
    sets (for instance the three cells of a size-2 triangle in T_3, where the
    whole triangle holds exactly 3 cells).  Use :func:`is_flat_closure` as the
    authority.
    """
    s = ctx.cells(s)
    for t, tm in zip(ctx.triangles, ctx.masks):
        if (s.mask & tm).bit_count() >= t.k and s.mask & tm != tm:
            return False
    return True


def is_flat_rank_saturated(ctx: MatroidContext, s: CellSet) -> bool:
    """Variant of the geometric test counting rank instead of cells: every
    triangle T with r(s within T) = size(T) must lie inside ``s``.
    """
    s = ctx.cells(s)
    for t, tm in zip(ctx.triangles, ctx.masks):
        if s.mask & tm != tm and (s.mask & tm).bit_count() >= t.k:
            if rank(ctx, CellSet(ctx.n, s.mask & tm)) >= t.k:
                return False
    return True


def strictly_oversaturated(ctx: MatroidContext, s: CellSet) -> list[LatticeTri]:
    s = ctx.cells(s)
    return [t for t, tm in zip(ctx.triangles, ctx.masks) if (s.mask & tm).bit_count() > t.k]


def completely_oversaturated(ctx: MatroidContext, s: CellSet) -> list[LatticeTri]:
    s = ctx.cells(s)
    return [t for t, tm in zip(ctx.triangles, ctx.masks) if s.mask & tm == tm]


def flat_decomposition(ctx: MatroidContext, s: CellSet) -> tuple[list[LatticeTri], CellSet]:
    """Maximal lattice triangles inside the flat ``s``, plus the cells they miss.

    Returns ``(triangles, uncovered)``.  The triangles are pairwise disjoint
    for every flat checked so far; ``uncovered`` is reported rather than
    asserted empty.
    """
    s = ctx.cells(s)
    if not is_flat_closure(ctx, s):
        raise PreconditionError(f"{s.to_list()} is not a flat")
    inside = completely_oversaturated(ctx, s)
    masks = {t: tri_mask(t) for t in inside}
    maximal = [
        t for t in inside if not any(u != t and masks[t] & ~masks[u] == 0 for u in inside)
    ]
    covered = 0
    for t in maximal:
        covered |= masks[t]
    return maximal, CellSet(ctx.n, s.mask & ~covered)


def _enum_cost(ctx: MatroidContext, kind: str) -> int:
    if kind == "bases":
        return comb(ctx.size, ctx.n)
    if kind == "circuits":
        # a circuit has at most rank + 1 = n + 1 cells
        return sum(comb(ctx.size, k) for k in range(min(ctx.n + 1, ctx.size) + 1))
    return 1 << ctx.size


def _masks_by_size(size: int, sizes) -> Iterator[int]:
    for k in sizes:
        for combo in combinations(range(size), k):
            m = 0
            for i in combo:
                m |= 1 << i
            yield m


def enumerate_sets(ctx: MatroidContext, kind: str, budget: Optional[int] = None) -> Iterator[CellSet]:
    """Yield every basis / circuit / flat / independent set exactly once.

    Sets come out by increasing size, then lexicographically by the canonical
    positions of their cells.  Raises :class:`ResourceLimitError` before
    yielding anything if the subset scan would exceed ``budget``.
    """
    if kind not in KINDS:
        raise InvalidParameterError(f"unknown enumeration kind {kind!r}; expected one of {KINDS}")
    budget = ctx.budget if budget is None else budget
    cost = _enum_cost(ctx, kind)
    if cost > budget:
        raise ResourceLimitError(f"enumerating {kind} of T_{ctx.n} scans {cost} subsets, budget is {budget}", budget)
    n, size = ctx.n, ctx.size
    if kind == "bases":
        sizes = [n] if n <= size else []
    elif kind == "circuits":
        sizes = range(1, min(n + 1, size) + 1)
    else:
        sizes = range(size + 1)
    for m in _masks_by_size(size, sizes):
        s = CellSet(n, m)
        if kind == "bases":
            ok = _indep_mask(ctx, m)
        elif kind == "independents":
            ok = _indep_mask(ctx, m)
        elif kind == "circuits":
            ok = is_circuit(ctx, s)
        else:
            ok = is_flat_closure(ctx, s)
        if ok:
            yield s


def enumerate(ctx: MatroidContext, kind: str, budget: Optional[int] = None) -> list[CellSet]:
    return list(enumerate_sets(ctx, kind, budget))


def rank_table(ctx: MatroidContext) -> list[int]:
    """Rank of every mask, from the independence table by dynamic programming.

    A dependent set contains an element whose removal keeps the rank, so its
    rank is the largest rank among its one-smaller subsets.
    """
    table = ctx.independence_table()
    ranks = [0] * len(table)
    for m in range(1, len(table)):
        if table[m]:
            ranks[m] = m.bit_count()
            continue
        best = 0
        x = m
        while x:
            low = x & -x
            x ^= low
            r = ranks[m ^ low]
            if r > best:
                best = r
        ranks[m] = best
    return ranks


def saturated_triangles(ctx: MatroidContext, s: CellSet) -> list[LatticeTri]:
    s = ctx.cells(s)
    return [t for t in ctx.triangles if saturation(t, s).cls == SATURATED]


__all__ = [
    "DEFAULT_ENUM_BUDGET",
    "KINDS",
    "MatroidContext",
    "SATURATED",
    "STRICT",
    "closure",
    "completely_oversaturated",
    "enumerate",
    "enumerate_sets",
    "flat_decomposition",
    "is_basis",
    "is_circuit",
    "is_flat_closure",
    "is_flat_geometric",
    "is_flat_rank_saturated",
    "is_independent",
    "rank",
    "rank_table",
    "rank_via_matching",
    "saturated_triangles",
    "strictly_oversaturated",
    "violating_triangle",
]
