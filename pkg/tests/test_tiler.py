from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilingmatroid import matroid as M
from tilingmatroid.errors import InvalidParameterError, PreconditionError, ResourceLimitError
from tilingmatroid.tiler import (
    EXACT_KINDS,
    RHOMBUS,
    T1,
    T2,
    UNIT_DOWN,
    UNIT_UP,
    HoleyRegion,
    Objective,
    Tile,
    Tiling,
    annulus_tiling,
    cor_counts,
    lozenge_tiling,
    max_rhombi_tiling,
    min_type2,
    placements,
    reconfigure_up,
    tile_border_check,
    tile_exact,
    unit_downs_supported,
    validate_tiling,
)
from tilingmatroid.trigrid import CellSet, LatticeTri, lattice_triangles, triangular_hull

import oracles as O


def region(n, cells):
    return HoleyRegion.of(CellSet.from_cells(n, cells))


def problems(t):
    return {d.problem for d in validate_tiling(t).diagnostics}


def test_single_rhombus_tiling_of_t2():
    r = region(2, [(1, 0, 0), (0, 1, 0)])
    t = lozenge_tiling(r)
    assert t is not None and validate_tiling(t).ok
    assert t.tiles == [Tile.make(RHOMBUS, [(0, 0, 1)], [(0, 0, 0)])]


def test_validator_diagnostics():
    r = region(2, [(1, 0, 0), (0, 1, 0)])
    assert "gap" in problems(Tiling(r, []))
    bad = Tile.make(RHOMBUS, [(1, 0, 0)], [(0, 0, 0)])
    assert "overlap" in problems(Tiling(r, [bad])) or "outside" in problems(Tiling(r, [bad]))
    twice = Tile.make(RHOMBUS, [(0, 0, 1)], [(0, 0, 0)])
    assert "overlap" in problems(Tiling(r, [twice, twice]))
    malformed = Tile.make(RHOMBUS, [(0, 0, 1), (0, 1, 0)], [(0, 0, 0)])
    assert "malformed" in problems(Tiling(r, [malformed]))


def test_empty_region_has_empty_tiling():
    t = lozenge_tiling(HoleyRegion.of(CellSet.full(1)))
    assert t is not None and t.tiles == [] and validate_tiling(t).ok


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lozenge_tiling_agrees_with_matching_oracle(n):
    g = O.ground(n)
    for holes in combinations(g, n):
        t = lozenge_tiling(region(n, holes))
        assert (t is not None) == O.perfect_matching_exists(n, holes)
        if t is not None:
            assert validate_tiling(t).ok


@pytest.mark.parametrize("n", [2, 3])
def test_trapezoid_tilings_exhaustive(n):
    ctx = M.MatroidContext(n)
    for m in range(1 << ctx.size):
        s = CellSet(n, m)
        t = tile_exact(HoleyRegion.of(s), [RHOMBUS, T1])
        if t is not None:
            assert validate_tiling(t).ok
            assert t.count(T1) == n - len(s)
        if s:
            assert (t is not None) == M.is_independent(ctx, s)


def test_empty_hole_set_in_t2_has_no_tiling():
    # three up cells and one down cell: t1 would have to be 2, only one fits
    assert tile_exact(HoleyRegion.of(CellSet.empty(2)), [RHOMBUS, T1]) is None
    assert M.is_independent(M.MatroidContext(2), CellSet.empty(2))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_max_rhombi_counts(n):
    ctx = M.MatroidContext(n)
    for m in range(1 << ctx.size):
        s = CellSet(n, m)
        t = max_rhombi_tiling(HoleyRegion.of(s))
        assert validate_tiling(t).ok
        got = (t.count(RHOMBUS), t.count(UNIT_DOWN), t.count(UNIT_UP))
        assert got == cor_counts(n, len(s), M.rank(ctx, s))


def test_objectives():
    r = region(4, [(3, 0, 0), (0, 3, 0)])
    t = tile_exact(r, [RHOMBUS, T1], objective=Objective.exact(T1, 2))
    assert t is not None and t.count(T1) == 2
    assert tile_exact(r, [RHOMBUS, T1], objective=Objective.exact(T1, 1)) is None
    with pytest.raises(InvalidParameterError):
        tile_exact(r, [RHOMBUS, UNIT_UP])
    t = tile_exact(r, EXACT_KINDS, objective=Objective.minimize(T2))
    assert t.count(T2) == 0


def test_constraints_bound_counts():
    r = region(3, [(2, 0, 0)])
    t = tile_exact(r, EXACT_KINDS, constraints={T2: (0, 0)})
    assert t is not None and t.count(T2) == 0 and t.count(T1) == 2


def test_node_budget_raises():
    r = HoleyRegion.of(CellSet.from_cells(7, [(6, 0, 0)]))
    with pytest.raises(ResourceLimitError):
        tile_exact(r, [RHOMBUS, T1], node_budget=5)


def test_min_type2_values():
    ctx = M.MatroidContext(4)
    assert min_type2(region(4, [(3, 0, 0), (0, 3, 0)])) == 0
    c = CellSet.from_cells(4, [(3, 0, 0), (2, 1, 0), (1, 2, 0), (1, 0, 2)])
    assert M.is_circuit(ctx, c)
    assert min_type2(HoleyRegion.of(c)) == 1
    assert min_type2(region(3, [(2, 0, 0), (1, 1, 0), (1, 0, 1)])) is None


def test_min_type2_bound():
    r = region(4, [(3, 0, 0), (2, 1, 0), (1, 1, 1), (1, 0, 2), (0, 3, 0), (0, 2, 1)])
    assert min_type2(r) == 2
    with pytest.raises(ResourceLimitError):
        min_type2(r, bound=1)


@pytest.mark.parametrize("n", range(1, 9))
def test_annulus_tilings(n):
    for t in lattice_triangles(n):
        til = annulus_tiling(n, t)
        assert validate_tiling(til).ok, (t, validate_tiling(til).diagnostics)
        assert til.count(T1) == n - t.k
        assert til.count(T2) == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_border_lemma_on_all_placements(n):
    tiles = placements(HoleyRegion.of(CellSet.empty(n)), [RHOMBUS, T1])
    for tri in lattice_triangles(n):
        for tile in tiles:
            assert tile_border_check(tri, tile)


def test_border_check_examples():
    tri = LatticeTri(0, 0, 0, 2)
    rh = Tile.make(RHOMBUS, [(0, 0, 2)], [(0, 0, 1)])
    assert tile_border_check(tri, rh)
    with pytest.raises(InvalidParameterError):
        tile_border_check(tri, Tile.make(UNIT_UP, [(0, 0, 2)]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reconfiguration_preserves_counts(n):
    ctx = M.MatroidContext(n)
    for m in range(1 << ctx.size):
        t = max_rhombi_tiling(HoleyRegion.of(CellSet(n, m)))
        moved = reconfigure_up(t)
        assert validate_tiling(moved).ok
        assert moved.counts == t.counts
        assert unit_downs_supported(moved)


def test_reconfiguration_of_rank_two_circuit():
    c = CellSet.from_cells(3, [(2, 0, 0), (1, 1, 0), (1, 0, 1)])
    t = reconfigure_up(max_rhombi_tiling(HoleyRegion.of(c)))
    downs = [tile for tile in t.tiles if tile.kind is UNIT_DOWN]
    assert len(downs) == 1
    assert unit_downs_supported(t)


def test_reconfiguration_rejects_bad_input():
    r = region(2, [(1, 0, 0), (0, 1, 0)])
    with pytest.raises(PreconditionError):
        reconfigure_up(Tiling(r, []))
    t = tile_exact(region(3, [(2, 0, 0)]), [RHOMBUS, T1])
    with pytest.raises(PreconditionError):
        reconfigure_up(t)


@st.composite
def holey(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    size = n * (n + 1) // 2
    return CellSet(n, draw(st.integers(min_value=0, max_value=(1 << size) - 1)))


@settings(max_examples=150, deadline=None)
@given(holey())
def test_solvers_produce_valid_tilings(s):
    r = HoleyRegion.of(s)
    t = max_rhombi_tiling(r)
    assert validate_tiling(t).ok
    lz = lozenge_tiling(r)
    if lz is not None:
        assert validate_tiling(lz).ok and len(s) == s.n
    ctx = M.MatroidContext(s.n)
    assert (lz is not None) == M.is_basis(ctx, s)


@settings(max_examples=60, deadline=None)
@given(holey())
def test_independent_sets_tile_with_trapezoids(s):
    ctx = M.MatroidContext(s.n)
    if not s or len(s) > s.n:
        return
    t = tile_exact(HoleyRegion.of(s), [RHOMBUS, T1])
    assert (t is not None) == M.is_independent(ctx, s)
    if t is not None:
        assert validate_tiling(t).ok and t.count(T1) == s.n - len(s)


def test_hull_of_circuit_is_its_only_strict_triangle_n4():
    ctx = M.MatroidContext(4)
    for c in M.enumerate(ctx, "circuits"):
        assert M.strictly_oversaturated(ctx, c) == [triangular_hull(c)]
