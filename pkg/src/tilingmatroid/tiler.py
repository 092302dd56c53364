"""Tilings of holey triangular regions by rhombi, trapezoids and unit triangles.

Two solver backends live here.  Tile sets in which every tile covers one
downward cell and at most one upward cell (rhombi, optionally padded with
unit triangles) reduce to bipartite matching between downward and upward
cells.  Once trapezoids are allowed that structure is gone and the region is
solved by exact-cover backtracking.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, NamedTuple, Optional

from tilingmatroid.errors import InvalidParameterError, PreconditionError, ResourceLimitError
from tilingmatroid.trigrid import (
    CellSet,
    DownCell,
    LatticeTri,
    UpCell,
    _down_cells,
    _up_cells,
    above,
    check_tri,
    down_neighbors,
    tri_contains_down,
    tri_down_cells,
    tri_mask,
    up_neighbors,
)


class TileKind(str, enum.Enum):
    RHOMBUS = "rhombus"
    TRAPEZOID1 = "trapezoid1"
    TRAPEZOID2 = "trapezoid2"
    UNIT_UP = "unit_up"
    UNIT_DOWN = "unit_down"


RHOMBUS = TileKind.RHOMBUS
T1 = TileKind.TRAPEZOID1
T2 = TileKind.TRAPEZOID2
UNIT_UP = TileKind.UNIT_UP
UNIT_DOWN = TileKind.UNIT_DOWN

# (ups, downs) covered by each kind
SHAPE = {
    RHOMBUS: (1, 1),
    T1: (2, 1),
    T2: (1, 2),
    UNIT_UP: (1, 0),
    UNIT_DOWN: (0, 1),
}

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class HoleyRegion:
    """T_n with the upward cells in ``holes`` removed.

    ``down_holes`` is empty for the holey regions of the matroid theory; it
    is only used to carve out a whole lattice triangle (see
    :func:`annulus_tiling`).
    """

    n: int
    holes: CellSet
    down_holes: frozenset = frozenset()

    def __post_init__(self):
        if self.holes.n != self.n:
            raise InvalidParameterError(f"holes belong to T_{self.holes.n}, region is T_{self.n}")
        valid = set(_down_cells(self.n))
        bad = [d for d in self.down_holes if d not in valid]
        if bad:
            raise InvalidParameterError(f"{tuple(bad[0])} is not a downward cell of T_{self.n}")

    @classmethod
    def of(cls, holes: CellSet) -> "HoleyRegion":
        return cls(holes.n, holes)

    @property
    def up(self) -> list[UpCell]:
        return [u for u in self.holes.complement()]

    @property
    def down(self) -> list[DownCell]:
        return [d for d in _down_cells(self.n) if d not in self.down_holes]


@dataclass(frozen=True)
class Tile:
    kind: TileKind
    ups: tuple[UpCell, ...] = ()
    downs: tuple[DownCell, ...] = ()

    @classmethod
    def make(cls, kind: TileKind, ups: Iterable = (), downs: Iterable = ()) -> "Tile":
        return cls(
            TileKind(kind),
            tuple(sorted(UpCell(*u) for u in ups)),
            tuple(sorted(DownCell(*d) for d in downs)),
        )


def tile_shape_error(tile: Tile) -> Optional[str]:
    """Describe why ``tile`` is not a legal tile of its kind, or None if it is."""
    try:
        want = SHAPE[tile.kind]
    except KeyError:
        return f"unknown tile kind {tile.kind!r}"
    if (len(tile.ups), len(tile.downs)) != want:
        return f"{tile.kind.value} must cover {want[0]} up and {want[1]} down cells"
    if len(set(tile.ups)) != len(tile.ups) or len(set(tile.downs)) != len(tile.downs):
        return "repeated cell"
    if tile.kind in (RHOMBUS, T1):
        d = tile.downs[0]
        if not set(tile.ups) <= set(up_neighbors(d)):
            return f"up cells not adjacent to down cell {tuple(d)}"
    elif tile.kind is T2:
        u = tile.ups[0]
        if not set(tile.downs) <= set(down_neighbors(u)):
            return f"down cells not adjacent to up cell {tuple(u)}"
    return None


@dataclass
class Tiling:
    region: HoleyRegion
    tiles: list[Tile] = field(default_factory=list)

    @property
    def counts(self) -> dict[TileKind, int]:
        c = Counter(t.kind for t in self.tiles)
        return {k: c.get(k, 0) for k in TileKind}

    def count(self, kind: TileKind) -> int:
        return sum(1 for t in self.tiles if t.kind is kind)


class Diagnostic(NamedTuple):
    problem: str  # malformed | outside | overlap | gap | count-identity
    detail: str


class TilingCheck(NamedTuple):
    ok: bool
    diagnostics: list[Diagnostic]

    def __bool__(self) -> bool:
        return self.ok


def validate_tiling(t: Tiling) -> TilingCheck:
    """Check tile shapes, disjointness and exact coverage of the region."""
    region = t.region
    n = region.n
    up_ok = set(region.up)
    down_ok = set(region.down)
    all_up = set(_up_cells(n))
    all_down = set(_down_cells(n))
    seen: dict = {}
    diags = []
    for i, tile in enumerate(t.tiles):
        err = tile_shape_error(tile)
        if err:
            diags.append(Diagnostic("malformed", f"tile {i}: {err}"))
        for cell, pool, universe in [(u, up_ok, all_up) for u in tile.ups] + [
            (d, down_ok, all_down) for d in tile.downs
        ]:
            key = (type(cell).__name__, tuple(cell))
            if cell not in universe:
                diags.append(Diagnostic("malformed", f"tile {i}: {key[0]} {key[1]} not in T_{n}"))
            elif cell not in pool:
                diags.append(Diagnostic("outside", f"tile {i}: {key[0]} {key[1]} is a hole"))
            if key in seen:
                diags.append(Diagnostic("overlap", f"tiles {seen[key]} and {i} share {key[0]} {key[1]}"))
            else:
                seen[key] = i
    for u in sorted(up_ok):
        if ("UpCell", tuple(u)) not in seen:
            diags.append(Diagnostic("gap", f"UpCell {tuple(u)} uncovered"))
    for d in sorted(down_ok):
        if ("DownCell", tuple(d)) not in seen:
            diags.append(Diagnostic("gap", f"DownCell {tuple(d)} uncovered"))
    counts = t.counts
    if not diags and counts[UNIT_UP] == 0 and counts[UNIT_DOWN] == 0:
        # cells: |U| = r + 2*t1 + t2 and |D| = r + t1 + 2*t2
        if counts[T1] - counts[T2] != len(up_ok) - len(down_ok):
            diags.append(
                Diagnostic(
                    "count-identity",
                    f"t1 - t2 = {counts[T1] - counts[T2]} but |U| - |D| = {len(up_ok) - len(down_ok)}",
                )
            )
    return TilingCheck(not diags, diags)


# -- matching backend -------------------------------------------------------


def _max_matching(region: HoleyRegion) -> dict[DownCell, UpCell]:
    """Maximum matching of downward to adjacent upward cells (augmenting paths)."""
    up_ok = set(region.up)
    adj = {d: [u for u in up_neighbors(d) if u in up_ok] for d in region.down}
    match_up: dict[UpCell, DownCell] = {}
    match_down: dict[DownCell, UpCell] = {}

    def augment(d, visited):
        for u in adj[d]:
            if u in visited:
                continue
            visited.add(u)
            if u not in match_up or augment(match_up[u], visited):
                match_up[u] = d
                match_down[d] = u
                return True
        return False

    for d in adj:
        augment(d, set())
    return match_down


def lozenge_tiling(region: HoleyRegion) -> Optional[Tiling]:
    """A tiling by rhombi only, or None when none exists."""
    if len(region.up) != len(region.down):
        return None
    matching = _max_matching(region)
    if len(matching) != len(region.down):
        return None
    tiles = [Tile.make(RHOMBUS, [u], [d]) for d, u in sorted(matching.items())]
    return Tiling(region, tiles)


def max_rhombi_tiling(region: HoleyRegion) -> Tiling:
    """Rhombi plus unit triangles with as many rhombi as possible."""
    matching = _max_matching(region)
    used = set(matching.values())
    tiles = [Tile.make(RHOMBUS, [u], [d]) for d, u in sorted(matching.items())]
    tiles += [Tile.make(UNIT_DOWN, (), [d]) for d in region.down if d not in matching]
    tiles += [Tile.make(UNIT_UP, [u]) for u in region.up if u not in used]
    return Tiling(region, tiles)


# -- exact-cover backend ----------------------------------------------------


class Objective(NamedTuple):
    mode: str  # "minimize" | "exact"
    kind: TileKind
    value: Optional[int] = None

    @classmethod
    def minimize(cls, kind: TileKind) -> "Objective":
        return cls("minimize", TileKind(kind))

    @classmethod
    def exact(cls, kind: TileKind, value: int) -> "Objective":
        return cls("exact", TileKind(kind), value)


EXACT_KINDS = (RHOMBUS, T1, T2)


def placements(region: HoleyRegion, allowed: Iterable[TileKind]) -> list[Tile]:
    """Every tile of an allowed kind lying inside the region, in canonical order."""
    allowed = {TileKind(k) for k in allowed}
    up_ok = set(region.up)
    out = []
    for d in region.down:
        nbrs = [u for u in up_neighbors(d) if u in up_ok]
        if RHOMBUS in allowed:
            out += [Tile.make(RHOMBUS, [u], [d]) for u in nbrs]
        if T1 in allowed:
            out += [Tile.make(T1, [nbrs[i], nbrs[j]], [d]) for i in range(len(nbrs)) for j in range(i + 1, len(nbrs))]
    if T2 in allowed:
        down_ok = set(region.down)
        for u in region.up:
            nbrs = [d for d in down_neighbors(u) if d in down_ok]
            out += [Tile.make(T2, [u], [nbrs[i], nbrs[j]]) for i in range(len(nbrs)) for j in range(i + 1, len(nbrs))]
    return out


class _Search:
    """Exact cover of the region's cells with fail-first branching."""

    def __init__(self, region: HoleyRegion, allowed, bounds, node_budget):
        self.region = region
        ups = region.up
        downs = region.down
        index = {("u", u): i for i, u in enumerate(ups)}
        index.update({("d", d): len(ups) + i for i, d in enumerate(downs)})
        self.n_up = len(ups)
        self.n_cells = len(ups) + len(downs)
        self.up_bits = (1 << len(ups)) - 1
        self.tiles = placements(region, allowed)
        self.masks = []
        for t in self.tiles:
            m = 0
            for u in t.ups:
                m |= 1 << index[("u", u)]
            for d in t.downs:
                m |= 1 << index[("d", d)]
            self.masks.append(m)
        self.by_cell = [[] for _ in range(self.n_cells)]
        for j, m in enumerate(self.masks):
            for i in range(self.n_cells):
                if m >> i & 1:
                    self.by_cell[i].append(j)
        self.kinds = [EXACT_KINDS.index(t.kind) for t in self.tiles]
        self.lo = [bounds.get(k, (0, None))[0] or 0 for k in EXACT_KINDS]
        self.hi = [bounds.get(k, (0, None))[1] for k in EXACT_KINDS]
        for i, k in enumerate(EXACT_KINDS):
            if k not in allowed:
                self.hi[i] = 0
        self.node_budget = node_budget
        self.nodes = 0

    def _counts_feasible(self, counts, free_up, free_down) -> bool:
        # remaining tiles must satisfy free_up = r + 2*t1 + t2, free_down = r + t1 + 2*t2
        lo = [max(0, self.lo[i] - counts[i]) for i in range(3)]
        hi = [None if self.hi[i] is None else self.hi[i] - counts[i] for i in range(3)]
        if any(h is not None and h < 0 for h in hi):
            return False
        t2_max = (2 * free_down - free_up) // 3
        if hi[2] is not None:
            t2_max = min(t2_max, hi[2])
        for t2 in range(lo[2], t2_max + 1):
            t1 = free_up - free_down + t2
            r = free_down - t1 - 2 * t2
            if t1 < lo[1] or r < lo[0] or r < 0 or t1 < 0:
                continue
            if hi[1] is not None and t1 > hi[1]:
                continue
            if hi[0] is not None and r > hi[0]:
                continue
            return True
        return False

    def run(self) -> Optional[list[int]]:
        full = (1 << self.n_cells) - 1
        chosen: list[int] = []
        counts = [0, 0, 0]

        def rec(covered: int) -> bool:
            self.nodes += 1
            if self.nodes > self.node_budget:
                raise ResourceLimitError(
                    f"exact-cover search exceeded {self.node_budget} nodes", self.node_budget
                )
            free = full & ~covered
            if not free:
                return all(counts[i] >= self.lo[i] for i in range(3))
            free_up = (free & self.up_bits).bit_count()
            free_down = free.bit_count() - free_up
            if not self._counts_feasible(counts, free_up, free_down):
                return False
            best_opts = None
            m = free
            while m:
                low = m & -m
                i = low.bit_length() - 1
                m ^= low
                opts = [
                    j
                    for j in self.by_cell[i]
                    if not self.masks[j] & covered
                    and (self.hi[self.kinds[j]] is None or counts[self.kinds[j]] < self.hi[self.kinds[j]])
                ]
                if best_opts is None or len(opts) < len(best_opts):
                    best_opts = opts
                    if not opts:
                        return False
            for j in best_opts:
                chosen.append(j)
                counts[self.kinds[j]] += 1
                if rec(covered | self.masks[j]):
                    return True
                counts[self.kinds[j]] -= 1
                chosen.pop()
            return False

        return list(chosen) if rec(0) else None


def _normalize_allowed(allowed) -> frozenset:
    allowed = frozenset(TileKind(k) for k in allowed)
    extra = allowed - set(EXACT_KINDS)
    if extra:
        raise InvalidParameterError(
            f"exact-cover tiles must be among rhombus/trapezoid1/trapezoid2, got {sorted(k.value for k in extra)}"
        )
    return allowed


def tile_exact(
    region: HoleyRegion,
    allowed: Iterable[TileKind],
    constraints: Optional[Mapping[TileKind, tuple]] = None,
    objective: Optional[Objective] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    t2_bound: Optional[int] = None,
) -> Optional[Tiling]:
    """Exact-cover tiling of ``region`` by the allowed kinds, or None if infeasible.

    ``constraints`` maps a kind to inclusive ``(lo, hi)`` count bounds (either
    end may be None).  ``Objective.exact(kind, v)`` pins a count;
    ``Objective.minimize(kind)`` searches the count upward from its lower
    bound and returns the first feasible level.  Exceeding ``node_budget``
    search nodes (or ``t2_bound`` levels while minimizing) raises
    :class:`ResourceLimitError`.
    """
    allowed = _normalize_allowed(allowed)
    bounds = {TileKind(k): tuple(v) for k, v in (constraints or {}).items()}
    if objective is None:
        return _solve(region, allowed, bounds, node_budget)
    kind = objective.kind
    if objective.mode == "exact":
        lo, hi = bounds.get(kind, (None, None))
        v = objective.value
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return None
        bounds[kind] = (v, v)
        return _solve(region, allowed, bounds, node_budget)
    if objective.mode != "minimize":
        raise InvalidParameterError(f"unknown objective {objective.mode!r}")
    if kind not in allowed:
        return _solve(region, allowed, bounds, node_budget)
    lo, hi = bounds.get(kind, (None, None))
    up, down = len(region.up), len(region.down)
    # a nonnegative rhombus count needs 2|D| - |U| >= 3*t2, and t1 = |U| - |D| + t2 >= 0
    if kind is T2:
        ceiling = (2 * down - up) // 3
    elif kind is T1:
        ceiling = (2 * up - down) // 3
    else:
        ceiling = min(up, down)
    if hi is not None:
        ceiling = min(ceiling, hi)
    level = lo or 0
    while level <= ceiling:
        if t2_bound is not None and level > t2_bound:
            raise ResourceLimitError(
                f"no tiling with {kind.value} count <= {t2_bound}; search bound reached", t2_bound
            )
        bounds[kind] = (level, level)
        found = _solve(region, allowed, bounds, node_budget)
        if found is not None:
            return found
        level += 1
    return None


def _solve(region, allowed, bounds, node_budget) -> Optional[Tiling]:
    search = _Search(region, allowed, bounds, node_budget)
    picked = search.run()
    if picked is None:
        return None
    return Tiling(region, [search.tiles[j] for j in sorted(picked)])


def min_type2(
    region: HoleyRegion, bound: Optional[int] = None, node_budget: int = DEFAULT_NODE_BUDGET
) -> Optional[int]:
    """Fewest type-2 trapezoids in a rhombus/trapezoid tiling, or None if untileable.

    Levels above ``bound`` (default ``n``) are not searched; reaching that
    bound without an answer raises :class:`ResourceLimitError`.
    """
    bound = region.n if bound is None else bound
    t = tile_exact(region, EXACT_KINDS, objective=Objective.minimize(T2), node_budget=node_budget, t2_bound=bound)
    return None if t is None else t.count(T2)


# -- constructive tilings ---------------------------------------------------


def _strip_row(n: int, axis: int, j: int, lows: tuple[int, int]) -> list[Tile]:
    """Tile the cells whose ``axis`` coordinate is ``j`` and whose other two
    coordinates are at least ``lows``: one type-1 trapezoid at the end, then rhombi.
    """

    others = [i for i in range(3) if i != axis]

    def put(s, t):
        coords = [0, 0, 0]
        coords[axis] = j
        coords[others[0]] = s
        coords[others[1]] = t
        return coords

    ls, lt = lows
    smax = n - 1 - j - lt
    length = smax - ls + 1
    ups = [UpCell(*put(smax - m, lt + m)) for m in range(length)]
    downs = [DownCell(*put(smax - m - 1, lt + m)) for m in range(length - 1)]
    tiles = [Tile.make(T1, [ups[0], ups[1]], [downs[0]])]
    tiles += [Tile.make(RHOMBUS, [ups[m + 1]], [downs[m]]) for m in range(1, length - 1)]
    return tiles


def annulus_tiling(n: int, t: LatticeTri) -> Tiling:
    """Tile T_n minus the lattice triangle ``t`` with rhombi and n - k type-1 trapezoids.

    The complement splits into a bottom strip (c < r), a left strip (b < q,
    c >= r) and a right strip (a < p, b >= q, c >= r).  Each line of cells
    parallel to a strip's long side is tiled by one type-1 trapezoid and
    rhombi.
    """
    check_tri(n, t)
    p, q, r, k = t
    region = HoleyRegion(n, CellSet(n, tri_mask(t)), frozenset(tri_down_cells(t)))
    tiles = []
    for j in range(r):
        tiles += _strip_row(n, 2, j, (0, 0))
    for j in range(q):
        tiles += _strip_row(n, 1, j, (0, r))
    for j in range(p):
        tiles += _strip_row(n, 0, j, (q, r))
    return Tiling(region, tiles)


def tile_border_check(t: LatticeTri, tile: Tile) -> bool:
    """True when ``tile`` covers no more downward than upward cells of ``t``."""
    if tile.kind not in (RHOMBUS, T1):
        raise InvalidParameterError(f"border check applies to rhombi and type-1 trapezoids, not {tile.kind.value}")
    ups = sum(1 for u in tile.ups if u.a >= t.p and u.b >= t.q and u.c >= t.r)
    downs = sum(1 for d in tile.downs if tri_contains_down(t, d))
    return downs <= ups


# -- reconfiguration --------------------------------------------------------


def _unit_down_blocked(t: Tiling, owner: dict, d: DownCell) -> Optional[int]:
    """Index of the rhombus covering the cell above ``d``, if any."""
    j = owner.get(above(d))
    if j is not None and t.tiles[j].kind is RHOMBUS:
        return j
    return None


def reconfigure_up(t: Tiling, validate_each: bool = True) -> Tiling:
    """Push every unit downward triangle up until the cell above it is a unit
    upward triangle or a hole, keeping the per-kind counts.

    A blocked unit downward cell ``d`` sits under an upward cell ``u`` that a
    rhombus pairs with a neighbour ``d2`` in the next row.  The move re-pairs
    ``u`` with ``d`` and leaves ``d2`` as the unit downward triangle.
    """
    check = validate_tiling(t)
    if not check.ok:
        raise PreconditionError(f"invalid input tiling: {check.diagnostics[0].detail}")
    if any(tile.kind not in (RHOMBUS, UNIT_UP, UNIT_DOWN) for tile in t.tiles):
        raise PreconditionError("reconfiguration needs a tiling by rhombi and unit triangles")
    tiles = list(t.tiles)
    owner = {}
    for j, tile in enumerate(tiles):
        for u in tile.ups:
            owner[u] = j
    cur = Tiling(t.region, tiles)
    while True:
        moved = False
        for j, tile in enumerate(cur.tiles):
            if tile.kind is not UNIT_DOWN:
                continue
            d = tile.downs[0]
            rj = _unit_down_blocked(cur, owner, d)
            if rj is None:
                continue
            rh = cur.tiles[rj]
            u, d2 = rh.ups[0], rh.downs[0]
            cur.tiles[rj] = Tile.make(RHOMBUS, [u], [d])
            cur.tiles[j] = Tile.make(UNIT_DOWN, (), [d2])
            if validate_each:
                check = validate_tiling(cur)
                if not check.ok:
                    raise AssertionError(f"reconfiguration move broke the tiling: {check.diagnostics}")
            moved = True
        if not moved:
            break
    cur.tiles.sort(key=lambda tl: (list(TileKind).index(tl.kind), tl.downs, tl.ups))
    return cur


def unit_downs_supported(t: Tiling) -> bool:
    """Every unit downward tile lies directly under a unit upward tile or a hole."""
    unit_ups = {tile.ups[0] for tile in t.tiles if tile.kind is UNIT_UP}
    for tile in t.tiles:
        if tile.kind is UNIT_DOWN:
            u = above(tile.downs[0])
            if u not in unit_ups and u not in t.region.holes:
                return False
    return True


def cor_counts(n: int, size: int, rank: int) -> tuple[int, int, int]:
    """(rhombi, unit_down, unit_up) of a max-rhombi tiling for a set of given size and rank."""
    return comb(n, 2) - (size - rank), size - rank, n - rank
