import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conley.homology import invariant_factors, smith_normal_form

import oracles


def _det(M):
    return sympy.Matrix(M.tolist()).det()


def check_snf(M):
    U, S, V = smith_normal_form(M)
    M = np.asarray(M, dtype=object)
    assert (U.dot(M).dot(V) == S).all()
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [S[i, i] for i in range(min(S.shape))]
    off = S.copy()
    for i in range(len(diag)):
        off[i, i] = 0
    assert not off.any()
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


def test_diagonal_example():
    assert check_snf(np.array([[2, 0], [0, 3]])) == [1, 6]


def test_zero_and_empty():
    assert check_snf(np.zeros((2, 3), dtype=int)) == []
    U, S, V = smith_normal_form(np.zeros((0, 3), dtype=int))
    assert S.shape == (0, 3) and V.shape == (3, 3)


def test_torsion_example():
    # presentation of Z/2 + Z/4 + Z
    M = np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert check_snf(M) == oracles.invariant_factors(M)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.integers(1, 5).flatmap(
    lambda m: arrays(np.int64, (n, m), elements=st.integers(-6, 6)))))
def test_random_matrices_against_determinantal_divisors(M):
    assert check_snf(M) == oracles.invariant_factors(M)


def test_invariant_factors_helper():
    assert invariant_factors(np.array([[4, 0], [0, 6]])) == [2, 12]
