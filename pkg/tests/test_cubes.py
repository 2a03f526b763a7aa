import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conley.errors import PreconditionError, SizeLimitExceeded
from conley.homology import CubicalSet, ElementaryCube, boundary_matrix, closure, faces
from conley.homology import cubes as cubes_mod

import oracles


def test_elementary_cube_basics():
    q = ElementaryCube([(0, False), (2, True), (5, False)])
    assert q.dim == 2
    assert q.ambient_dim == 3
    assert repr(q) == "[0,1]x[2]x[5,6]"
    assert ElementaryCube.cell((1, 2)) == ElementaryCube([(1, False), (2, False)])
    assert ElementaryCube.vertex((1,)).dim == 0
    with pytest.raises(PreconditionError):
        ElementaryCube([])


def test_faces_of_square_match_hand_computation():
    sq = ElementaryCube.cell((0, 0))
    got = {(s, repr(f)) for s, f in faces(sq)}
    assert got == {(1, "[1]x[0,1]"), (-1, "[0]x[0,1]"), (-1, "[0,1]x[1]"), (1, "[0,1]x[0]")}


def test_vertex_has_no_faces():
    assert faces(ElementaryCube.vertex((3, 4))) == []


def test_closure_of_square_counts():
    cl = closure([ElementaryCube.cell((0, 0))])
    dims = sorted(c.dim for c in cl)
    assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 2]


def test_cubical_set_requires_face_closure():
    with pytest.raises(PreconditionError):
        CubicalSet([ElementaryCube.cell((0,))])
    with pytest.raises(PreconditionError):
        CubicalSet([ElementaryCube.cell((0,)), ElementaryCube.cell((0, 0))], check=False)
    with pytest.raises(PreconditionError):
        CubicalSet([])
    assert len(CubicalSet([], ambient_dim=2)) == 0


def test_by_degree_is_sorted_and_complete():
    cs = CubicalSet.from_cells([(1, 0), (0, 0)])
    bd = cs.by_degree()
    assert [len(b) for b in bd] == [6, 7, 2]
    assert all(list(b) == sorted(b) for b in bd)


def test_embed_prefix():
    q = ElementaryCube.cell((3,))
    e = q.embed(((2, True),))
    assert e == ElementaryCube([(2, True), (3, False)])
    assert e.dim == 1


def test_boundary_matrix_f2_reduces_mod_two():
    cs = CubicalSet.from_cells([(0, 0)])
    z = boundary_matrix(cs, 1, "Z")
    f = boundary_matrix(cs, 1, "F2")
    assert np.array_equal(f, z % 2)
    assert boundary_matrix(cs, 0).shape == (0, 4)


def test_dense_limit_is_enforced(monkeypatch):
    monkeypatch.setattr(cubes_mod, "DENSE_LIMIT", 5)
    cs = CubicalSet.from_cells([(0, 0)])
    with pytest.raises(SizeLimitExceeded):
        boundary_matrix(cs, 1)


cube_strategy = st.integers(1, 3).flatmap(lambda d: st.lists(
    st.tuples(*[st.tuples(st.integers(0, 3), st.booleans())] * d), min_size=1, max_size=12))


@settings(max_examples=60, deadline=None)
@given(cube_strategy)
def test_boundary_squares_to_zero(raw):
    cs = CubicalSet.from_cubes([ElementaryCube(r) for r in raw])
    for n in range(2, cs.ambient_dim + 1):
        prod = boundary_matrix(cs, n - 1) @ boundary_matrix(cs, n)
        assert not prod.any()


@settings(max_examples=60, deadline=None)
@given(cube_strategy)
def test_boundary_matches_oracle(raw):
    ours = CubicalSet.from_cubes([ElementaryCube(r) for r in raw])
    theirs = oracles.closure([tuple((a, a if deg else a + 1) for a, deg in r) for r in raw])
    assert {oracles.to_package(c) for c in theirs} == set(ours.cubes)
    for n in range(1, ours.ambient_dim + 1):
        gn = ours.generators(n)
        gm = ours.generators(n - 1)
        back = lambda q: tuple((a, a if deg else a + 1) for a, deg in q)
        ref = oracles.boundary([back(q) for q in gn], [back(q) for q in gm])
        assert np.array_equal(boundary_matrix(ours, n), ref)
