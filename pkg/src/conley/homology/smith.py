"""Smith normal form of integer matrices."""
import numpy as np


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M):
    """Return ``(U, S, V)`` with ``S = U @ M @ V`` in Smith normal form.

    ``U`` and ``V`` are unimodular, the diagonal of ``S`` is nonnegative and
    each diagonal entry divides the next. Arithmetic is exact (Python ints);
    all three results are ``object`` arrays.
    """
    A = [[int(x) for x in row] for row in np.asarray(M).tolist()]
    m = len(A)
    n = len(A[0]) if m else np.asarray(M).shape[1] if np.asarray(M).ndim == 2 else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    def arr(rows, r, c):
        out = np.zeros((r, c), dtype=object)
        for i in range(r):
            for j in range(c):
                out[i, j] = rows[i][j]
        return out

    return arr(U, m, m), arr(A, m, n), arr(V, n, n)


def invariant_factors(M):
    """Nonzero diagonal of the Smith normal form."""
    _, S, _ = smith_normal_form(M)
    return [int(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]
