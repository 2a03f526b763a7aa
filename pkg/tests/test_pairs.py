import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conley.dynamics import Grid, SliceMap, TransitionGraph, VectorFieldSpec, \
    build_transition_graph
from conley.errors import PreconditionError
from conley.pairs import (
    IndexPair,
    SlicedCubeSet,
    build_index_pair,
    build_index_triple,
    discrete_exit_time,
    exit_cells,
    invariant_part,
    isolating_check,
    thicken_exit,
    thicken_triple,
    verify_ar_decomposition,
    verify_index_pair,
)


def graph(maps, n, escaped=()):
    """Transition graph on cells ``(0,) .. (n-1,)`` from ``{i: [j, ...]}`` dicts."""
    grid = Grid((0.0,), (float(n),), (n,))
    out = []
    for m in maps:
        images = {(i,): frozenset((j,) for j in m.get(i, ())) for i in range(n)}
        out.append(SliceMap(images, frozenset((i,) for i in escaped)))
    return TransitionGraph(grid, 1.0, tuple(out))


def const(cells, G):
    return SlicedCubeSet.constant([(i,) for i in cells], G.nslices)


@pytest.fixture(scope="module")
def logistic():
    g = Grid((-0.5,), (1.5,), (40,))
    G = build_transition_graph(VectorFieldSpec("logistic1d"), g, 0.25, 24)
    N = SlicedCubeSet.constant(g.cells(), G.nslices)
    N_A = SlicedCubeSet.from_boxes(g, [((0.7,), (1.3,))], G.nslices)
    return g, G, N, N_A


def test_sliced_set_algebra():
    a = SlicedCubeSet([{(0,)}, {(1,)}])
    b = SlicedCubeSet([{(0,), (2,)}, set()])
    assert (a | b)[0] == {(0,), (2,)}
    assert (a & b).count() == 1
    assert (a - b).items() == [(1, (1,))]
    assert (a & b).issubset(a) and not a.issubset(b)
    assert SlicedCubeSet.empty(3).is_empty()
    with pytest.raises(PreconditionError):
        a | SlicedCubeSet.empty(3)


def test_from_boxes_per_slice():
    g = Grid((0.0,), (4.0,), (4,))
    S = SlicedCubeSet.from_boxes(g, [[((0.0,), (1.0,))], [((2.0,), (4.0,))]], 2, per_slice=True)
    assert S[0] == {(0,)} and S[1] == {(2,), (3,)}
    with pytest.raises(PreconditionError):
        SlicedCubeSet.from_boxes(g, [[((0.0,), (1.0,))]], 2, per_slice=True)


def test_invariant_part_of_fixed_point_with_transients():
    # 0 -> 1 -> 2 -> 2, 3 -> 2
    G = graph([{0: [1], 1: [2], 2: [2], 3: [2]}] * 4, 4)
    inv = invariant_part(const(range(4), G), G)
    assert inv[0] == {(0,), (1,), (2,), (3,)}
    assert inv[2] == {(2,)}
    assert invariant_part(const(range(4), G), G, margin=1)[2] == {(1,), (2,)}


def _brute_invariant(N, G):
    paths = [[c] for c in N[0]]
    for k in range(G.K):
        paths = [p + [x] for p in paths for x in G.successors(k, p[-1]) if x in N[k + 1]]
    out = [set() for _ in range(G.nslices)]
    for p in paths:
        for k, c in enumerate(p):
            out[k].add(c)
    return out


random_graph = st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.dictionaries(st.integers(0, n - 1), st.lists(st.integers(0, n - 1), max_size=2),
                             max_size=n), min_size=2, max_size=4),
    st.lists(st.integers(0, n - 1), max_size=1),
    st.lists(st.integers(0, n - 1), min_size=1, max_size=n),
))


@settings(max_examples=80, deadline=None)
@given(random_graph)
def test_invariant_part_matches_path_enumeration(data):
    n, maps, esc, cells = data
    G = graph(maps, n, esc)
    N = const(cells, G)
    assert [set(s) for s in invariant_part(N, G)] == _brute_invariant(N, G)


@settings(max_examples=80, deadline=None)
@given(random_graph, st.integers(0, 3))
def test_constructed_pairs_verify(data, m):
    n, maps, esc, cells = data
    G = graph(maps, n, esc)
    N = const(cells, G)
    P = build_index_pair(N, G)
    assert verify_index_pair(P).ok
    assert invariant_part(N, G).issubset(P.N1) and P.N1.issubset(N)
    Pm = thicken_exit(P, m)
    assert verify_index_pair(Pm).ok
    assert P.N2.issubset(Pm.N2) and Pm.N2.issubset(P.N1)
    times = discrete_exit_time(P)
    for k, tk in enumerate(times):
        for c, t in tk.items():
            if t <= m:
                assert c in Pm.N2[k]


def test_verify_reports_violations():
    G = graph([{0: [1], 1: [2]}] * 2, 3)
    N1 = const([0, 1], G)
    bad = verify_index_pair(IndexPair(N1, SlicedCubeSet.empty(G.nslices), G))
    assert not bad.ok and any(v.startswith("exit") for v in bad.violations)
    nest = verify_index_pair(IndexPair(N1, const([2], G), G))
    assert any(v.startswith("nesting") for v in nest.violations)
    assert not bool(nest)


def test_exit_cells_and_exit_time():
    G = graph([{0: [1], 1: [2], 2: [3]}] * 3, 4, escaped=[3])
    N1 = const([0, 1, 2], G)
    E = exit_cells(N1, G)
    assert E[0] == {(2,)} and E[G.K] == frozenset()
    times = discrete_exit_time(IndexPair(N1, E, G))
    assert times[0] == {(0,): 2, (1,): 1, (2,): 0}
    assert times[G.K][(0,)] == float("inf")
    with pytest.raises(PreconditionError):
        thicken_exit(IndexPair(N1, E, G), -1)


def test_empty_invariant_set_gives_empty_pair():
    G = graph([{0: [1]}] * 3, 2)
    P = build_index_pair(const([0, 1], G), G)
    assert P.N1.is_empty() and P.N2.is_empty()


def test_saddle_pair_shape():
    g = Grid((-1.0, -1.0), (1.0, 1.0), (16, 16))
    G = build_transition_graph(VectorFieldSpec("saddle2d"), g, 0.2, 20)
    N = SlicedCubeSet.constant(g.cells(), G.nslices)
    assert isolating_check(N, G)
    P = build_index_pair(N, G)
    assert P.N1[10] == {(i, j) for i in range(16) for j in range(3, 13)}
    assert {i for i, _ in P.N2[10]} == {0, 1, 14, 15}
    Pm = thicken_exit(P, 1)
    assert {i for i, _ in Pm.N2[10]} == {0, 1, 2, 3, 12, 13, 14, 15}


def test_isolation_fails_when_invariant_set_touches_boundary(logistic):
    g, G, N, _ = logistic
    tight = SlicedCubeSet.from_boxes(g, [((0.0,), (1.0,))], G.nslices)
    assert isolating_check(N, G)
    assert not isolating_check(tight, G)


def test_index_triple_and_ar_decomposition(logistic):
    g, G, N, N_A = logistic
    T = build_index_triple(N, N_A, G)
    assert T.N3.issubset(T.N2) and T.N2.issubset(T.N1)
    for pair in (T.outer, T.attractor, T.repeller):
        assert verify_index_pair(pair).ok
    T1 = thicken_triple(T, 1)
    assert T1.N3.issubset(T1.N2)
    K_set = invariant_part(N, G)
    A = invariant_part(N_A, G)
    # over a finite window K also holds transients, so R is taken as K \ A
    R = K_set - A
    ok, info = verify_ar_decomposition(K_set, A, R, G)
    assert ok, info["violation"]
    assert info["end_states"]["connecting"] > 0
    assert not info["attractor_to_repeller"]
    narrow = SlicedCubeSet.from_boxes(g, [((-0.3,), (0.3,))], G.nslices) & K_set
    ok, info = verify_ar_decomposition(K_set, A, narrow, G)
    assert not ok and "outside A and R" in info["violation"]
    ok, info = verify_ar_decomposition(K_set, R, A, G)
    assert not ok


def test_triple_preconditions(logistic):
    g, G, N, N_A = logistic
    small = SlicedCubeSet.from_boxes(g, [((0.0,), (0.5,))], G.nslices)
    with pytest.raises(PreconditionError):
        build_index_triple(small, N_A, G)
    nothing = SlicedCubeSet.from_boxes(g, [((1.35,), (1.5,))], G.nslices)
    with pytest.raises(PreconditionError):
        build_index_triple(N, nothing, G)
    # a neighbourhood of the repeller is left and re-entered
    wide = SlicedCubeSet.from_boxes(g, [((-0.5,), (0.2,)), ((0.6,), (1.5,))], G.nslices)
    with pytest.raises(PreconditionError):
        build_index_triple(N, wide, G)
    with pytest.raises(PreconditionError):
        verify_ar_decomposition(N, N_A, N_A, G)
