"""Sparse vector arithmetic over the coefficient fields.

Vectors over F2 are Python ints used as bitsets; vectors over Q are dicts
``{index: Fraction}`` without zero entries. Both share the interface below
so the reduction code in :mod:`conley.homology.chains` is field-agnostic.
"""
from fractions import Fraction

import numpy as np

from ..errors import PreconditionError, UnsupportedRing

RINGS = ("F2", "Q", "Z")


class _F2:
    name = "F2"
    zero = 0
    one = 1
    dtype = np.uint8

    @staticmethod
    def unit(i):
        return 1 << i

    @staticmethod
    def from_items(items):
        v = 0
        for i, c in items:
            if c % 2:
                v ^= 1 << int(i)
        return v

    @staticmethod
    def items(v):
        i = 0
        while v:
            low = v & -v
            i = low.bit_length() - 1
            yield i, 1
            v ^= low

    @staticmethod
    def low(v):
        return v.bit_length() - 1

    @staticmethod
    def coef(v, i):
        return (v >> i) & 1

    @staticmethod
    def axpy(v, c, w):
        """``v - c * w``."""
        return v ^ w if c % 2 else v

    @staticmethod
    def scale(v, c):
        return v if c % 2 else 0

    @staticmethod
    def div(a, b):
        if b % 2 == 0:
            raise ZeroDivisionError("division by zero in F2")
        return a % 2

    @staticmethod
    def normalize(c):
        return int(c) % 2


class _Q:
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)
    dtype = object

    @staticmethod
    def unit(i):
        return {i: Fraction(1)}

    @staticmethod
    def from_items(items):
        v = {}
        for i, c in items:
            c = Fraction(c)
            if not c:
                continue
            s = v.get(i, 0) + c
            if s:
                v[i] = s
            else:
                v.pop(i, None)
        return v

    @staticmethod
    def items(v):
        return iter(sorted(v.items()))

    @staticmethod
    def low(v):
        return max(v) if v else -1

    @staticmethod
    def coef(v, i):
        return v.get(i, Fraction(0))

    @staticmethod
    def axpy(v, c, w):
        if not c:
            return v
        out = dict(v)
        for i, x in w.items():
            s = out.get(i, 0) - c * x
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return out

    @staticmethod
    def scale(v, c):
        if not c:
            return {}
        return {i: c * x for i, x in v.items()}

    @staticmethod
    def div(a, b):
        return Fraction(a) / Fraction(b)

    @staticmethod
    def normalize(c):
        return Fraction(c)


F2 = _F2()
Q = _Q()


def field(ring):
    """Vector arithmetic for ``ring``; raises for rings that are not fields."""
    if ring == "F2":
        return F2
    if ring == "Q":
        return Q
    if ring == "Z":
        raise UnsupportedRing("Z coefficients support ranks and torsion only, not maps")
    raise PreconditionError(f"unknown coefficient ring {ring!r}; expected one of {RINGS}")


def to_dense(fld, v, n):
    out = np.zeros(n, dtype=fld.dtype) if fld is F2 else np.array([Fraction(0)] * n, dtype=object)
    for i, c in fld.items(v):
        out[i] = c
    return out


def column_vectors(fld, matrix):
    """Columns of a dense matrix as sparse field vectors."""
    matrix = np.asarray(matrix)
    cols = []
    for j in range(matrix.shape[1]):
        col = matrix[:, j]
        cols.append(fld.from_items((i, col[i]) for i in np.flatnonzero(col != 0)))
    return cols


def zeros(ring, rows, cols):
    fld = field(ring)
    if fld is F2:
        return np.zeros((rows, cols), dtype=np.uint8)
    return np.array([[Fraction(0)] * cols for _ in range(rows)], dtype=object).reshape(rows, cols)


def identity(ring, n):
    out = zeros(ring, n, n)
    for i in range(n):
        out[i, i] = 1 if ring == "F2" else Fraction(1)
    return out


def matmul(ring, a, b):
    if a.shape[1] != b.shape[0]:
        raise PreconditionError(f"cannot compose {a.shape} with {b.shape}")
    if ring == "F2":
        return ((a.astype(np.int64) @ b.astype(np.int64)) % 2).astype(np.uint8)
    out = zeros(ring, a.shape[0], b.shape[1])
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            out[i, j] = sum((a[i, k] * b[k, j] for k in range(a.shape[1])), Fraction(0))
    return out


def rank(ring, matrix):
    """Rank of a dense matrix over ``ring`` by column reduction."""
    fld = field(ring)
    pivots = {}
    r = 0
    for v in column_vectors(fld, matrix):
        while v:
            low = fld.low(v)
            if low not in pivots:
                pivots[low] = v
                r += 1
                break
            w = pivots[low]
            v = fld.axpy(v, fld.div(fld.coef(v, low), fld.coef(w, low)), w)
    return r


def inverse(ring, matrix):
    """Inverse of a square matrix over a field, or ``None`` when singular."""
    fld = field(ring)
    n, m = matrix.shape
    if n != m:
        return None
    a = [[fld.normalize(x) for x in row] for row in matrix.tolist()]
    inv = [[fld.normalize(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = a[col][col]
        a[col] = [fld.normalize(fld.div(x, p)) for x in a[col]]
        inv[col] = [fld.normalize(fld.div(x, p)) for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [fld.normalize(x - c * y) for x, y in zip(a[r], a[col])]
                inv[r] = [fld.normalize(x - c * y) for x, y in zip(inv[r], inv[col])]
    out = zeros(ring, n, n)
    for i in range(n):
        for j in range(n):
            out[i, j] = inv[i][j]
    return out


def equal(a, b):
    return a.shape == b.shape and all(x == y for x, y in zip(a.ravel().tolist(), b.ravel().tolist()))
