import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilingmatroid.errors import EmptyInputError, InvalidParameterError
from tilingmatroid.trigrid import (
    SATURATED,
    STRICT,
    UNDER,
    CellSet,
    DownCell,
    LatticeTri,
    UpCell,
    above,
    down_cells,
    down_neighbors,
    lattice_triangles,
    saturation,
    tri_contains,
    tri_down_cells,
    tri_intersect,
    tri_join,
    tri_up_cells,
    triangular_hull,
    up_cells,
    up_index,
    up_neighbors,
)

import oracles as O


@pytest.mark.parametrize("n", range(1, 9))
def test_cell_counts(n):
    assert len(up_cells(n)) == n * (n + 1) // 2
    assert len(down_cells(n)) == n * (n - 1) // 2
    assert set(up_cells(n)) == set(O.ground(n))


def test_canonical_order_is_descending_lex():
    cells = up_cells(3)
    assert cells == sorted(cells, reverse=True)
    assert cells[0] == (2, 0, 0)
    assert up_index(3, UpCell(2, 0, 0)) == 0


def test_rejects_cells_with_wrong_sum():
    with pytest.raises(InvalidParameterError):
        up_index(3, UpCell(2, 2, 0))
    with pytest.raises(InvalidParameterError):
        CellSet.from_cells(3, [(1, 1, 1)])


@pytest.mark.parametrize("n", [2, 3, 5])
def test_adjacency_is_symmetric(n):
    for d in down_cells(n):
        for u in up_neighbors(d):
            assert d in down_neighbors(u)
    for u in up_cells(n):
        for d in down_neighbors(u):
            assert u in up_neighbors(d)


def test_above_is_the_top_neighbor():
    d = DownCell(1, 0, 0)
    assert above(d) == UpCell(1, 0, 1)
    assert above(d) in up_neighbors(d)


@pytest.mark.parametrize("n", range(1, 7))
def test_lattice_triangles_match_oracle(n):
    assert sorted(lattice_triangles(n)) == sorted(LatticeTri(*t) for t in O.triangles(n))


@pytest.mark.parametrize("n", [3, 5])
def test_triangle_membership(n):
    for t in lattice_triangles(n):
        ups = tri_up_cells(t)
        assert len(ups) == t.k * (t.k + 1) // 2
        assert len(tri_down_cells(t)) == t.k * (t.k - 1) // 2
        assert set(ups) == {u for u in up_cells(n) if O.inside(tuple(t), u)}


def test_tri_contains_checks_ambient():
    with pytest.raises(InvalidParameterError):
        tri_contains(LatticeTri(0, 0, 0, 3), UpCell(3, 0, 0))


def test_cellset_algebra():
    a = CellSet.from_cells(3, [(2, 0, 0), (1, 1, 0)])
    b = CellSet.from_cells(3, [(1, 1, 0), (0, 0, 2)])
    assert len(a | b) == 3
    assert (a & b).to_list() == [(1, 1, 0)]
    assert (a - b).to_list() == [(2, 0, 0)]
    assert a & b <= a
    assert len(a.complement()) == 4
    assert (2, 0, 0) in a and (0, 0, 2) not in a
    assert a.with_cell((0, 0, 2)) == CellSet.from_cells(3, [(2, 0, 0), (1, 1, 0), (0, 0, 2)])
    assert hash(a) == hash(CellSet.from_cells(3, [(1, 1, 0), (2, 0, 0)]))
    with pytest.raises(InvalidParameterError):
        _ = a | CellSet.empty(4)


def test_hull_examples():
    assert triangular_hull(CellSet.full(4)) == LatticeTri(0, 0, 0, 4)
    assert triangular_hull(CellSet.from_cells(4, [(1, 1, 1)])) == LatticeTri(1, 1, 1, 1)
    assert triangular_hull(CellSet.from_cells(3, [(2, 0, 0), (1, 1, 0), (1, 0, 1)])) == LatticeTri(1, 0, 0, 2)
    with pytest.raises(EmptyInputError):
        triangular_hull(CellSet.empty(3))


def test_saturation_classes():
    t = LatticeTri(0, 0, 0, 2)
    full = CellSet.full(2)
    assert saturation(t, full) == (3, STRICT, True)
    assert saturation(t, full.without_cell((1, 0, 0))).cls == SATURATED
    assert saturation(t, CellSet.empty(2)).cls == UNDER


n_st = st.integers(min_value=1, max_value=6)


@st.composite
def cellsets(draw, n=None, nonempty=False):
    n = draw(n_st) if n is None else n
    size = n * (n + 1) // 2
    mask = draw(st.integers(min_value=1 if nonempty else 0, max_value=(1 << size) - 1))
    return CellSet(n, mask)


@st.composite
def triangle_pairs(draw):
    n = draw(n_st)
    tris = lattice_triangles(n)
    return draw(st.sampled_from(tris)), draw(st.sampled_from(tris))


@settings(max_examples=200, deadline=None)
@given(cellsets(nonempty=True))
def test_hull_is_smallest_containing_triangle(s):
    h = triangular_hull(s)
    assert tuple(h) == O.hull(s.to_list())
    containing = [t for t in lattice_triangles(s.n) if all(O.inside(tuple(t), u) for u in s)]
    assert h in containing
    assert all(t.k >= h.k for t in containing)


@settings(max_examples=200, deadline=None)
@given(triangle_pairs())
def test_intersection_and_join(pair):
    t, u = pair
    ct, cu = CellSet.of_triangle(t), CellSet.of_triangle(u)
    meet = tri_intersect(t, u)
    if meet is None:
        assert not (ct & cu)
    else:
        assert CellSet.of_triangle(meet) == ct & cu
    j = tri_join(t, u)
    assert j == triangular_hull(ct | cu)


@settings(max_examples=100, deadline=None)
@given(cellsets())
def test_cellset_roundtrip(s):
    assert CellSet.from_cells(s.n, s.to_list()) == s
    assert len(s) == len(s.to_list())
    assert s | s.complement() == CellSet.full(s.n)
