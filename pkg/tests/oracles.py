"""Reference computations that share no code with the package.

Cubes are tuples of integer intervals ``(lo, hi)`` with ``hi - lo`` in
{0, 1}; ranks come from sympy (over Q) or a plain Gaussian elimination
(over F2).
"""
from itertools import combinations, product
from math import gcd

import numpy as np
import sympy


def cube_faces(cube):
    """Signed codimension-one faces, same orientation convention as the
    standard cubical boundary: ``(-1)^j`` per non-degenerate slot ``j``."""
    out = []
    j = 0
    for i, (lo, hi) in enumerate(cube):
        if lo == hi:
            continue
        s = (-1) ** j
        out.append((s, cube[:i] + ((hi, hi),) + cube[i + 1:]))
        out.append((-s, cube[:i] + ((lo, lo),) + cube[i + 1:]))
        j += 1
    return out


def cube_dim(cube):
    return sum(hi - lo for lo, hi in cube)


def closure(cubes):
    out = set()
    stack = list(cubes)
    while stack:
        c = stack.pop()
        if c in out:
            continue
        out.add(c)
        stack.extend(f for _, f in cube_faces(c))
    return out


def cells(corners):
    return [tuple((i, i + 1) for i in c) for c in corners]


def boundary(gens_n, gens_m):
    """Matrix of the boundary from ``gens_n`` to ``gens_m`` (rows)."""
    idx = {c: i for i, c in enumerate(gens_m)}
    M = np.zeros((len(gens_m), len(gens_n)), dtype=np.int64)
    for j, c in enumerate(gens_n):
        for s, f in cube_faces(c):
            if f in idx:
                M[idx[f], j] += s
    return M


def rank_q(M):
    if M.size == 0:
        return 0
    return sympy.Matrix(M.tolist()).rank()


def rank_f2(M):
    A = (np.asarray(M, dtype=np.int64) % 2).astype(np.uint8)
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
        if r == rows:
            break
    return r


def relative_betti(A, B, d, ring="Q"):
    """Betti numbers of ``C(A) / C(B)`` in degrees ``0..d``."""
    rank = rank_q if ring == "Q" else rank_f2
    gens = [sorted(c for c in set(A) - set(B) if cube_dim(c) == n) for n in range(d + 1)]
    ranks = [0] * (d + 2)
    for n in range(1, d + 1):
        ranks[n] = rank(boundary(gens[n], gens[n - 1]))
    return [len(gens[n]) - ranks[n] - ranks[n + 1] for n in range(d + 1)]


def to_package(cube):
    """Convert ``((lo, hi), ...)`` to the package's ``(lower, degenerate)`` slots."""
    from conley.homology import ElementaryCube

    return ElementaryCube([(lo, lo == hi) for lo, hi in cube])


def minors_gcd(M, k):
    n, m = M.shape
    g = 0
    for rows in combinations(range(n), k):
        for cols in combinations(range(m), k):
            g = gcd(g, int(sympy.Matrix(M[np.ix_(rows, cols)].tolist()).det()))
    return g


def invariant_factors(M):
    """Invariant factors from determinantal divisors ``d_k / d_{k-1}``."""
    M = np.asarray(M, dtype=object)
    out = []
    prev = 1
    for k in range(1, min(M.shape) + 1):
        dk = minors_gcd(M, k)
        if dk == 0:
            break
        out.append(dk // prev)
        prev = dk
    return out


def random_cubes(rng, d, count, extent=4):
    """Random elementary cubes in ``[0, extent]^d``."""
    out = []
    for _ in range(count):
        cube = []
        for _ in range(d):
            lo = int(rng.integers(0, extent))
            cube.append((lo, lo + int(rng.integers(0, 2))))
        out.append(tuple(cube))
    return out


def grid_points(d, extent):
    return product(range(extent + 1), repeat=d)
