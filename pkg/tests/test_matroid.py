from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilingmatroid import matroid as M
from tilingmatroid.errors import InvalidParameterError, PreconditionError, ResourceLimitError
from tilingmatroid.trigrid import CellSet, LatticeTri, triangular_hull

import oracles as O

# regression constants, each first checked against the brute-force oracle
BASES = {1: 1, 2: 3, 3: 17, 4: 150, 5: 1848}
CIRCUITS = {3: 9, 4: 87}
INDEPENDENTS = {3: 39, 4: 320}
FLATS = {2: 5, 3: 17, 4: 81}


def ctx_of(n, _cache={}):
    if n not in _cache:
        _cache[n] = M.MatroidContext(n, budget=1 << 16)
    return _cache[n]


def cs(n, cells):
    return CellSet.from_cells(n, cells)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_independence_matches_oracle_exhaustively(n):
    ctx = ctx_of(n)
    g = O.ground(n)
    for m in range(1 << len(g)):
        s = CellSet(n, m)
        assert M.is_independent(ctx, s) == O.independent(n, s.to_list())


@pytest.mark.parametrize("n", [2, 3])
def test_rank_and_closure_match_literal_definitions(n):
    ctx = ctx_of(n)
    for m in range(1 << (n * (n + 1) // 2)):
        s = CellSet(n, m)
        assert M.rank(ctx, s) == O.rank(n, s.to_list())
        assert set(M.closure(ctx, s).to_list()) == O.closure(n, s.to_list())


def test_closure_matches_literal_definition_sampled_n4():
    ctx = ctx_of(4)
    for m in range(0, 1 << 10, 7):
        s = CellSet(4, m)
        assert set(M.closure(ctx, s).to_list()) == O.closure(4, s.to_list())


@pytest.mark.parametrize("n", range(1, 9))
def test_ground_set_has_rank_n(n):
    ctx = M.MatroidContext(n)
    assert ctx.size == n * (n + 1) // 2
    assert M.rank(ctx, CellSet.full(n)) == n


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bases_count(n):
    found = M.enumerate(ctx_of(n), "bases")
    assert len(found) == BASES[n]
    assert len(O.bases(n)) == BASES[n]


@pytest.mark.parametrize("n", [3, 4])
def test_circuits_match_oracle(n):
    found = {frozenset(s.to_list()) for s in M.enumerate(ctx_of(n), "circuits")}
    assert found == {frozenset(c) for c in O.circuits(n)}
    assert len(found) == CIRCUITS[n]


@pytest.mark.parametrize("n", [3, 4])
def test_independent_and_flat_counts(n):
    assert len(M.enumerate(ctx_of(n), "independents")) == INDEPENDENTS[n]
    assert len(M.enumerate(ctx_of(n), "flats")) == FLATS[n]


def test_enumeration_budget_and_kind():
    with pytest.raises(ResourceLimitError) as err:
        M.enumerate(M.MatroidContext(6), "flats")
    assert err.value.bound == M.DEFAULT_ENUM_BUDGET
    with pytest.raises(InvalidParameterError):
        M.enumerate(ctx_of(3), "loops")


def test_violating_triangle_on_full_t2():
    ctx = ctx_of(2)
    t = M.violating_triangle(ctx, CellSet.full(2))
    assert t == LatticeTri(0, 0, 0, 2)
    assert M.violating_triangle(ctx, cs(2, [(1, 0, 0), (0, 1, 0)])) is None


def test_single_cells_are_independent_and_circuits_need_two_or_more():
    ctx = ctx_of(3)
    for u in CellSet.full(3):
        s = cs(3, [u])
        assert M.is_independent(ctx, s)
        assert not M.is_circuit(ctx, s)
    assert not M.is_circuit(ctx, CellSet.empty(3))


def test_rank_two_circuit():
    ctx = ctx_of(3)
    c = cs(3, [(2, 0, 0), (1, 1, 0), (1, 0, 1)])
    assert M.is_circuit(ctx, c)
    assert M.strictly_oversaturated(ctx, c) == [triangular_hull(c)]


def test_flat_oracles_on_the_discrepancy_candidate():
    ctx = ctx_of(3)
    c = cs(3, [(2, 0, 0), (1, 1, 0), (1, 0, 1)])
    assert M.is_flat_closure(ctx, c)
    assert not M.is_flat_geometric(ctx, c)
    assert M.is_flat_rank_saturated(ctx, c)


@pytest.mark.parametrize("n", [3, 4])
def test_rank_saturated_reading_agrees_with_closure(n):
    ctx = ctx_of(n)
    for m in range(1 << ctx.size):
        s = CellSet(n, m)
        assert M.is_flat_closure(ctx, s) == M.is_flat_rank_saturated(ctx, s)


def test_flat_decomposition():
    ctx = ctx_of(4)
    f = CellSet.of_triangle(LatticeTri(1, 0, 0, 3))
    assert M.is_flat_closure(ctx, f)
    tris, uncovered = M.flat_decomposition(ctx, f)
    assert tris == [LatticeTri(1, 0, 0, 3)]
    assert not uncovered
    with pytest.raises(PreconditionError):
        M.flat_decomposition(ctx, cs(4, [(3, 0, 0), (2, 1, 0)]))


def test_rank_table_matches_greedy_rank():
    ctx = ctx_of(3)
    table = M.rank_table(ctx)
    for m, r in enumerate(table):
        assert r == M.rank(ctx, CellSet(3, m))


def test_rank_via_matching_matches_rank():
    ctx = ctx_of(4)
    for m in range(0, 1 << 10, 3):
        s = CellSet(4, m)
        assert M.rank_via_matching(ctx, s) == M.rank(ctx, s)


def test_context_rejects_foreign_sets():
    with pytest.raises(InvalidParameterError):
        M.rank(ctx_of(3), CellSet.full(4))
    with pytest.raises(InvalidParameterError):
        M.MatroidContext(0)


@st.composite
def subset_pairs(draw):
    n = draw(st.integers(min_value=2, max_value=5))
    size = n * (n + 1) // 2
    a = draw(st.integers(min_value=0, max_value=(1 << size) - 1))
    b = draw(st.integers(min_value=0, max_value=(1 << size) - 1))
    return CellSet(n, a), CellSet(n, a | b)


@settings(max_examples=300, deadline=None)
@given(subset_pairs())
def test_closure_operator_properties(pair):
    s, t = pair
    ctx = ctx_of(s.n)
    cl_s = M.closure(ctx, s)
    assert s <= cl_s
    assert M.closure(ctx, cl_s) == cl_s
    assert cl_s <= M.closure(ctx, t)
    assert M.rank(ctx, cl_s) == M.rank(ctx, s)


@settings(max_examples=300, deadline=None)
@given(subset_pairs())
def test_rank_is_submodular_and_monotone(pair):
    s, t = pair
    ctx = ctx_of(s.n)
    assert M.rank(ctx, s) <= M.rank(ctx, t) <= len(t)
    a, b = s, t - s
    assert M.rank(ctx, a | b) + M.rank(ctx, a & b) <= M.rank(ctx, a) + M.rank(ctx, b)


def test_basis_exchange_n3():
    ctx = ctx_of(3)
    bases = M.enumerate(ctx, "bases")
    for b1, b2 in combinations(bases, 2):
        for x in b1 - b2:
            assert any(M.is_basis(ctx, b1.without_cell(x).with_cell(y)) for y in b2 - b1)
