"""Elementary cubes, face-closed cubical sets and their boundary matrices."""
from itertools import product

import numpy as np

from ..errors import PreconditionError, SizeLimitExceeded

#: Largest generator count for which a dense boundary matrix is materialized.
DENSE_LIMIT = 10_000


class ElementaryCube(tuple):
    """A product of elementary intervals.

    Each entry is a pair ``(lower, degenerate)``: ``(3, True)`` is the point
    ``[3]`` and ``(3, False)`` the interval ``[3, 4]``. Plain tuple ordering
    gives the canonical lexicographic order of generators.
    """

    __slots__ = ()

    def __new__(cls, intervals):
        intervals = tuple((int(a), bool(deg)) for a, deg in intervals)
        if not intervals:
            raise PreconditionError("an elementary cube needs at least one interval")
        return tuple.__new__(cls, intervals)

    @classmethod
    def _raw(cls, intervals):
        return tuple.__new__(cls, intervals)

    @classmethod
    def cell(cls, index):
        """Full-dimensional unit cube with lower corner ``index``."""
        return tuple.__new__(cls, tuple((int(i), False) for i in index))

    @classmethod
    def vertex(cls, point):
        return tuple.__new__(cls, tuple((int(i), True) for i in point))

    @property
    def intervals(self):
        return tuple(self)

    @property
    def dim(self):
        return sum(1 for _, deg in self if not deg)

    @property
    def ambient_dim(self):
        return len(self)

    def embed(self, prefix):
        """Cube ``prefix x self`` with ``prefix`` a sequence of intervals."""
        return tuple.__new__(ElementaryCube, tuple(prefix) + tuple(self))

    def __repr__(self):
        parts = [f"[{a}]" if deg else f"[{a},{a + 1}]" for a, deg in self]
        return "x".join(parts)


def faces(cube):
    """Signed primary faces of ``cube``.

    For every non-degenerate slot the upper face comes first. The sign is
    ``(-1)**j`` for the upper face of the ``j``-th non-degenerate slot and
    the opposite sign for the lower face.
    """
    out = []
    sign = 1
    for i, (a, deg) in enumerate(cube):
        if deg:
            continue
        head, tail = cube[:i], cube[i + 1:]
        out.append((sign, ElementaryCube._raw(head + ((a + 1, True),) + tail)))
        out.append((-sign, ElementaryCube._raw(head + ((a, True),) + tail)))
        sign = -sign
    return out


def _all_faces(cube):
    options = []
    for a, deg in cube:
        if deg:
            options.append(((a, True),))
        else:
            options.append(((a, False), (a, True), (a + 1, True)))
    return [ElementaryCube._raw(c) for c in product(*options)]


def closure(cubes):
    """Smallest face-closed set containing ``cubes``."""
    out = set()
    for c in cubes:
        if c in out:
            continue
        out.update(_all_faces(c))
    return out


class CubicalSet:
    """Finite face-closed set of elementary cubes of a common ambient dimension.

    Use :meth:`from_cubes` or :meth:`from_cells` to build one from
    generators; the constructor only accepts sets that are already closed
    (unless ``check=False``).
    """

    __slots__ = ("cubes", "ambient_dim", "_by_degree")

    def __init__(self, cubes=(), ambient_dim=None, check=True):
        cubes = frozenset(cubes)
        dims = {len(c) for c in cubes}
        if len(dims) > 1:
            raise PreconditionError(f"mixed ambient dimensions {sorted(dims)}")
        if dims:
            (d,) = dims
            if ambient_dim is not None and ambient_dim != d:
                raise PreconditionError(f"expected ambient dimension {ambient_dim}, got {d}")
            ambient_dim = d
        if ambient_dim is None:
            raise PreconditionError("ambient dimension of an empty cubical set must be given")
        self.cubes = cubes
        self.ambient_dim = ambient_dim
        self._by_degree = None
        if check and not self.is_face_closed():
            raise PreconditionError("cubical set is not closed under taking faces")

    @classmethod
    def from_cubes(cls, cubes, ambient_dim=None):
        return cls(closure(cubes), ambient_dim=ambient_dim, check=False)

    @classmethod
    def from_cells(cls, cells, ambient_dim=None):
        """Closure of the full-dimensional unit cubes with the given lower corners."""
        return cls.from_cubes([ElementaryCube.cell(c) for c in cells], ambient_dim)

    def is_face_closed(self):
        return all(f in self.cubes for c in self.cubes for _, f in faces(c))

    def by_degree(self):
        """Canonically ordered generators, one list per degree ``0..ambient_dim``."""
        if self._by_degree is None:
            buckets = [[] for _ in range(self.ambient_dim + 1)]
            for c in self.cubes:
                buckets[c.dim].append(c)
            self._by_degree = tuple(tuple(sorted(b)) for b in buckets)
        return self._by_degree

    def generators(self, n):
        if n < 0 or n > self.ambient_dim:
            return ()
        return self.by_degree()[n]

    def issubset(self, other):
        return self.cubes <= other.cubes

    def union(self, other):
        return CubicalSet(self.cubes | other.cubes, self.ambient_dim, check=False)

    def __contains__(self, cube):
        return cube in self.cubes

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __eq__(self, other):
        return isinstance(other, CubicalSet) and self.cubes == other.cubes and \
            self.ambient_dim == other.ambient_dim

    def __hash__(self):
        return hash((self.cubes, self.ambient_dim))

    def __repr__(self):
        counts = [len(g) for g in self.by_degree()]
        return f"CubicalSet(ambient_dim={self.ambient_dim}, counts={counts})"


def boundary_matrix(cset, n, ring="Z"):
    """Dense boundary matrix from degree ``n`` to degree ``n - 1`` generators.

    Rows and columns follow :meth:`CubicalSet.by_degree`. Signed integer
    entries for ``ring`` in ``{"Z", "Q"}``; entries reduced mod 2 for ``"F2"``.
    """
    cols = cset.generators(n)
    rows = cset.generators(n - 1)
    if len(cols) + len(rows) > DENSE_LIMIT:
        raise SizeLimitExceeded(
            f"dense boundary matrix with {len(rows)}x{len(cols)} exceeds {DENSE_LIMIT} generators")
    index = {c: i for i, c in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, c in enumerate(cols):
        for s, f in faces(c):
            mat[index[f], j] += s
    if ring == "F2":
        mat %= 2
    return mat
