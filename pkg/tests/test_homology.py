from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conley.errors import PreconditionError, UnsupportedRing
from conley.homology import (
    CubicalSet,
    ElementaryCube,
    GradedMap,
    euler_characteristic,
    exactness_check,
    faces,
    identity_map,
    inclusion_induced_map,
    induced_map,
    relative_homology,
    snake_connecting,
    zero_map,
)
from conley.homology import fields

import oracles


def cells(*idx):
    return CubicalSet.from_cells(idx)


def empty(d):
    return CubicalSet([], ambient_dim=d)


ANNULUS = [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]


@pytest.mark.parametrize("ring", ["F2", "Q", "Z"])
def test_square_is_contractible(ring):
    assert relative_homology((cells((0, 0)), empty(2)), ring).ranks == (1, 0, 0)


@pytest.mark.parametrize("ring", ["F2", "Q", "Z"])
def test_annulus(ring):
    h = relative_homology((CubicalSet.from_cells(ANNULUS), empty(2)), ring)
    assert h.ranks == (1, 1, 0)
    assert all(t == () for t in h.torsion)


@pytest.mark.parametrize("ring", ["F2", "Q", "Z"])
def test_interval_relative_to_endpoints(ring):
    A = CubicalSet.from_cells([(i,) for i in range(8)])
    B = CubicalSet([ElementaryCube.vertex((0,)), ElementaryCube.vertex((8,))])
    assert relative_homology((A, B), ring).ranks == (0, 1)


def test_square_mod_opposite_columns():
    # [0,4]^2 relative to its left and right columns: one relative 1-cycle
    A = CubicalSet.from_cells([(i, j) for i in range(4) for j in range(4)])
    B = CubicalSet.from_cells([(i, j) for i in (0, 3) for j in range(4)])
    h = relative_homology((A, B), "F2")
    ref = oracles.relative_betti(
        oracles.closure(oracles.cells([(i, j) for i in range(4) for j in range(4)])),
        oracles.closure(oracles.cells([(i, j) for i in (0, 3) for j in range(4)])), 2, "F2")
    assert list(h.ranks) == ref == [0, 1, 0]


def test_empty_pair_has_zero_homology():
    h = relative_homology((empty(2), empty(2)), "F2")
    assert h.ranks == (0, 0, 0)
    assert h.is_zero()


def test_pair_must_be_nested():
    with pytest.raises(PreconditionError):
        relative_homology((cells((0,)), cells((3,))), "F2")


def test_unknown_ring():
    with pytest.raises(PreconditionError):
        relative_homology((cells((0,)), empty(1)), "R")


def test_z_has_no_cycle_bases():
    h = relative_homology((cells((0,)), empty(1)), "Z")
    with pytest.raises(UnsupportedRing):
        h.cycles(0)


random_pair = st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.just(d),
    st.lists(st.tuples(*[st.integers(0, 3)] * d), min_size=1, max_size=10),
    st.lists(st.tuples(*[st.integers(0, 3)] * d), max_size=4),
))


def _pair(d, a_cells, b_cells):
    a_cells = sorted(set(a_cells) | set(b_cells))
    A = CubicalSet.from_cells(a_cells, ambient_dim=d)
    B = CubicalSet.from_cells(sorted(set(b_cells)), ambient_dim=d)
    return A, B, oracles.closure(oracles.cells(a_cells)), oracles.closure(oracles.cells(sorted(set(b_cells))))


@settings(max_examples=40, deadline=None)
@given(random_pair, st.sampled_from(["F2", "Q"]))
def test_ranks_match_oracle(data, ring):
    d, a, b = data
    A, B, oa, ob = _pair(d, a, b)
    assert list(relative_homology((A, B), ring).ranks) == oracles.relative_betti(oa, ob, d, ring)


@settings(max_examples=40, deadline=None)
@given(random_pair)
def test_euler_characteristic(data):
    d, a, b = data
    A, B, _, _ = _pair(d, a, b)
    chi = sum((-1) ** c.dim for c in A.cubes - B.cubes)
    for ring in ("F2", "Q", "Z"):
        assert euler_characteristic(relative_homology((A, B), ring)) == chi


@settings(max_examples=30, deadline=None)
@given(random_pair, st.data())
def test_class_is_independent_of_representative(data, draw):
    d, a, b = data
    A, B, _, _ = _pair(d, a, b)
    h = relative_homology((A, B), "F2")
    fld = fields.F2
    for n in range(1, d + 1):
        if not h.rank(n):
            continue
        gens_up = h.generators[n + 1] if n + 1 <= d else ()
        z = h.cycles(n)[0]
        base = h.coordinates(n, z)
        if gens_up:
            j = draw.draw(st.integers(0, len(gens_up) - 1))
            bd = fld.from_items((h.index[n][f], 1) for _, f in faces(gens_up[j]) if f in h.index[n])
            assert h.coordinates(n, fld.axpy(z, 1, bd)) == base


def test_coordinates_of_basis_cycles_are_unit_vectors():
    h = relative_homology((CubicalSet.from_cells(ANNULUS), empty(2)), "Q")
    for n in range(3):
        for i, z in enumerate(h.cycles(n)):
            coords = h.coordinates(n, z)
            assert coords == [Fraction(int(i == j)) for j in range(h.rank(n))]


def test_identity_inclusion_is_identity():
    A = CubicalSet.from_cells(ANNULUS)
    h = relative_homology((A, empty(2)), "F2")
    m = inclusion_induced_map((A, empty(2)), (A, empty(2)), "F2")
    assert m.equals(identity_map(h))


def test_point_into_interval_degree_zero():
    small = (CubicalSet([ElementaryCube.vertex((0,))]), empty(1))
    large = (cells((0,), (1,)), empty(1))
    m = inclusion_induced_map(small, large, "Q")
    assert m.matrix(0).tolist() == [[Fraction(1)]]


def test_circle_into_filled_square_kills_h1():
    ring = CubicalSet.from_cells(ANNULUS)
    full = CubicalSet.from_cells([(i, j) for i in range(3) for j in range(3)])
    m = inclusion_induced_map((ring, empty(2)), (full, empty(2)), "F2")
    assert m.matrix(1).shape == (0, 1)
    assert m.ranks()[0] == 1


def test_inclusion_map_rejects_non_inclusions():
    with pytest.raises(PreconditionError):
        inclusion_induced_map((cells((0,)), empty(1)), (cells((5,)), empty(1)), "F2")
    with pytest.raises(UnsupportedRing):
        inclusion_induced_map((cells((0,)), empty(1)), (cells((0,)), empty(1)), "Z")


def _snake_model():
    # N1 = [0,2], N2 = [1,2] u {0}, N3 = {0}
    N1 = cells((0,), (1,))
    N2 = CubicalSet.from_cubes([ElementaryCube.cell((1,)), ElementaryCube.vertex((0,))])
    N3 = CubicalSet([ElementaryCube.vertex((0,))])
    return N1, N2, N3


@pytest.mark.parametrize("ring", ["F2", "Q"])
def test_snake_on_one_dimensional_model(ring):
    N1, N2, N3 = _snake_model()
    bd = snake_connecting((N1, N2, N3), ring)
    assert bd.domain.ranks == (0, 1)
    assert bd.codomain.ranks == (1, 0)
    assert bd.ranks()[1] == 1
    h23 = relative_homology((N2, N3), ring)
    h13 = relative_homology((N1, N3), ring)
    h12 = relative_homology((N1, N2), ring)
    assert h13.is_zero()
    rep = exactness_check([induced_map(h23, h13), induced_map(h13, h12), bd,
                           induced_map(h23, h13)])
    assert rep.exact


def test_snake_needs_nested_triple():
    N1, N2, N3 = _snake_model()
    with pytest.raises(PreconditionError):
        snake_connecting((N2, N1, N3), "F2")


def test_snake_is_zero_for_disjoint_blocks():
    # attractor block {0..1} and repeller block {3..4} rel its ends, no overlap
    N1 = CubicalSet.from_cubes([ElementaryCube.cell((0,)), ElementaryCube.cell((3,))])
    N2 = CubicalSet.from_cubes([ElementaryCube.cell((0,)), ElementaryCube.vertex((3,)),
                                ElementaryCube.vertex((4,))])
    N3 = CubicalSet([ElementaryCube.vertex((3,)), ElementaryCube.vertex((4,))])
    bd = snake_connecting((N1, N2, N3), "F2")
    assert bd.is_zero()


def _map(ring, mats, shift=0):
    d = {n: np.array(m, dtype=np.uint8) for n, m in mats.items()}
    return GradedMap(ring, d, shift, None, None)


def test_exactness_of_short_sequences():
    iso = _map("F2", {0: [[1]]})
    zero_in = zero_map("F2", (0,), (1,))
    zero_out = zero_map("F2", (1,), (0,))
    assert exactness_check([zero_in, iso, zero_out]).exact
    z = _map("F2", {0: [[0]]})
    assert not exactness_check([zero_in, z, zero_out]).exact
    with pytest.raises(PreconditionError):
        exactness_check([iso])


def test_compose_and_equals():
    a = _map("F2", {0: [[1, 1], [0, 1]]})
    b = _map("F2", {0: [[1, 1], [0, 1]]})
    assert a.compose(b).matrix(0).tolist() == [[1, 0], [0, 1]]
    assert not a.equals(a.compose(b))
