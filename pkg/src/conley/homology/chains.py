"""Relative homology of cubical pairs and the maps between them.

Homology of a pair ``(A, B)`` is computed from the quotient complex
``C(A)/C(B)``; for ``B`` empty this is the ordinary (unreduced) homology of
``A``. Over a field every homology group carries a cycle basis together with
a reduced pivot table that expresses any relative cycle in that basis, which
is all that induced maps and connecting homomorphisms need.
"""
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..errors import PreconditionError, SizeLimitExceeded, UnsupportedRing
from . import fields
from .cubes import CubicalSet, faces
from .smith import smith_normal_form

#: Generator cap for sparse elimination.
SPARSE_LIMIT = 400_000


def _check_pair(A, B):
    if A.ambient_dim != B.ambient_dim:
        raise PreconditionError("pair members have different ambient dimensions")
    if not B.issubset(A):
        raise PreconditionError("exit set is not contained in the pair's first set")


class GradedHomology:
    """Homology of a cubical pair, degree by degree.

    Attributes
    ----------
    ring : str
    ranks : tuple of int
        Betti numbers for degrees ``0..ambient_dim``.
    torsion : tuple of tuple of int
        Torsion coefficients per degree (only populated over ``Z``).
    generators : tuple of tuple of ElementaryCube
        Relative generators ``A \\ B`` per degree, canonically ordered.
    """

    def __init__(self, ring, A, B, generators, ranks, torsion, cycles, tables):
        self.ring = ring
        self.A = A
        self.B = B
        self.generators = generators
        self.index = tuple({c: i for i, c in enumerate(g)} for g in generators)
        self.ranks = tuple(ranks)
        self.torsion = tuple(torsion)
        self._cycles = cycles
        self._tables = tables

    @property
    def top(self):
        return len(self.ranks) - 1

    def rank(self, n):
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def cycles(self, n):
        """Basis cycles in degree ``n`` as sparse field vectors."""
        if self._cycles is None:
            raise UnsupportedRing("cycle bases are only available over a field")
        return self._cycles[n] if 0 <= n < len(self._cycles) else []

    def cycle_array(self, n, i):
        fld = fields.field(self.ring)
        return fields.to_dense(fld, self.cycles(n)[i], len(self.generators[n]))

    def is_zero(self):
        return not any(self.ranks)

    def coordinates(self, n, chain):
        """Coordinates of the class of the relative cycle ``chain`` (a sparse
        vector over degree-``n`` generators) in the homology basis."""
        fld = fields.field(self.ring)
        if n < 0 or n >= len(self.ranks):
            return []
        coords = self._reduce(n, chain, fld)
        out = [fld.zero] * self.rank(n)
        for i, c in fld.items(coords):
            out[i] = c
        return out

    def _reduce(self, n, chain, fld):
        table = self._tables[n]
        coords = fld.zero if fld is fields.F2 else {}
        v = chain
        while v:
            low = fld.low(v)
            entry = table.get(low)
            if entry is None:
                raise PreconditionError(f"chain is not a relative cycle in degree {n}")
            w, hom = entry
            c = fld.div(fld.coef(v, low), fld.coef(w, low))
            v = fld.axpy(v, c, w)
            if hom:
                coords = fld.axpy(coords, -c if fld is fields.Q else c, hom)
        return coords

    def __repr__(self):
        return f"GradedHomology(ring={self.ring}, ranks={list(self.ranks)})"


def relative_generators(A, B):
    return tuple(tuple(c for c in A.generators(n) if c not in B.cubes)
                 for n in range(A.ambient_dim + 1))


def _boundary_columns(fld, gens, index, n):
    """Columns of the relative boundary ``C_n -> C_{n-1}``."""
    rows = index[n - 1] if n >= 1 else {}
    cols = []
    signed = fld is not fields.F2
    for c in gens[n]:
        items = []
        if n >= 1:
            for s, f in faces(c):
                i = rows.get(f)
                if i is not None:
                    items.append((i, s if signed else 1))
        cols.append(fld.from_items(items))
    return cols


def relative_homology(pair, ring="F2"):
    """Homology of ``C(A)/C(B)`` for a pair ``(A, B)`` of cubical sets.

    Over ``F2`` and ``Q`` the result carries cycle bases; over ``Z`` only
    ranks and torsion coefficients (via Smith normal form).
    """
    A, B = pair
    _check_pair(A, B)
    gens = relative_generators(A, B)
    total = sum(len(g) for g in gens)
    if ring == "Z":
        return _integer_homology(A, B, gens)
    fld = fields.field(ring)
    if total > SPARSE_LIMIT:
        raise SizeLimitExceeded(f"{total} relative generators exceed the limit of {SPARSE_LIMIT}")
    index = tuple({c: i for i, c in enumerate(g)} for g in gens)
    top = A.ambient_dim

    reduced_above = {}  # pivots (row index -> reduced column) of D_{n+1}
    ranks = [0] * (top + 1)
    cycles = [None] * (top + 1)
    tables = [None] * (top + 1)
    for n in range(top, -1, -1):
        cols = _boundary_columns(fld, gens, index, n)
        cleared = reduced_above
        pivots = {}
        essential = []
        for j, col in enumerate(cols):
            if j in cleared:
                continue
            r, v = col, fld.unit(j)
            while r:
                low = fld.low(r)
                entry = pivots.get(low)
                if entry is None:
                    break
                w, wv = entry
                c = fld.div(fld.coef(r, low), fld.coef(w, low))
                r = fld.axpy(r, c, w)
                v = fld.axpy(v, c, wv)
            if r:
                pivots[fld.low(r)] = (r, v)
            else:
                essential.append(v)
        table = {low: (w, None) for low, w in reduced_above.items()}
        basis = []
        for i, z in enumerate(essential):
            table[fld.low(z)] = (z, fld.unit(i))
            basis.append(z)
        ranks[n] = len(essential)
        cycles[n] = basis
        tables[n] = table
        reduced_above = {low: w for low, (w, _) in pivots.items()}
    return GradedHomology(ring, A, B, gens, ranks, [()] * (top + 1), cycles, tables)


def _integer_homology(A, B, gens):
    total = sum(len(g) for g in gens)
    from .cubes import DENSE_LIMIT

    if total > DENSE_LIMIT:
        raise SizeLimitExceeded(f"{total} generators exceed the dense limit {DENSE_LIMIT} for Z")
    top = A.ambient_dim
    index = tuple({c: i for i, c in enumerate(g)} for g in gens)
    diag = {}
    rk = {}
    for n in range(top + 2):
        if n == 0 or n > top or not gens[n] or not gens[n - 1]:
            rk[n] = 0
            diag[n] = []
            continue
        mat = np.zeros((len(gens[n - 1]), len(gens[n])), dtype=object)
        for j, c in enumerate(gens[n]):
            for s, f in faces(c):
                i = index[n - 1].get(f)
                if i is not None:
                    mat[i, j] += s
        _, S, _ = smith_normal_form(mat)
        d = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
        rk[n] = len(d)
        diag[n] = d
    ranks = [len(gens[n]) - rk[n] - rk[n + 1] for n in range(top + 1)]
    torsion = [tuple(x for x in diag[n + 1] if x > 1) for n in range(top + 1)]
    return GradedHomology("Z", A, B, gens, ranks, torsion, None, None)


@dataclass
class GradedMap:
    """Linear map between graded vector spaces.

    ``matrices[n]`` maps degree ``n`` of the domain to degree ``n + shift``
    of the codomain; shape is ``(codomain rank, domain rank)``.
    """

    ring: str
    matrices: dict
    shift: int = 0
    domain: object = dc_field(default=None, repr=False)
    codomain: object = dc_field(default=None, repr=False)

    def matrix(self, n):
        m = self.matrices.get(n)
        if m is None:
            return fields.zeros(self.ring, self._rank(self.codomain, n + self.shift),
                                self._rank(self.domain, n))
        return m

    @staticmethod
    def _rank(space, n):
        return space.rank(n) if space is not None else 0

    def domain_rank(self, n):
        m = self.matrices.get(n)
        return m.shape[1] if m is not None else self._rank(self.domain, n)

    def codomain_rank(self, n):
        m = self.matrices.get(n - self.shift)
        return m.shape[0] if m is not None else self._rank(self.codomain, n)

    def degrees(self):
        degs = set(self.matrices)
        for space, off in ((self.domain, 0), (self.codomain, -self.shift)):
            if space is not None:
                degs.update(n + off for n in range(len(space.ranks)))
        return sorted(degs)

    def ranks(self):
        """Rank of the map per domain degree."""
        return {n: fields.rank(self.ring, self.matrix(n)) for n in self.degrees()}

    def is_zero(self):
        return all(not np.any(self.matrix(n) != 0) for n in self.degrees())

    def compose(self, before):
        """``self o before``."""
        if self.ring != before.ring:
            raise PreconditionError("cannot compose maps over different rings")
        mats = {}
        for n in before.degrees():
            a = before.matrix(n)
            b = self.matrix(n + before.shift)
            if b.shape[1] != a.shape[0]:
                raise PreconditionError(f"shape mismatch composing in degree {n}")
            mats[n] = fields.matmul(self.ring, b, a)
        return GradedMap(self.ring, mats, self.shift + before.shift, before.domain, self.codomain)

    def equals(self, other):
        degs = set(self.degrees()) | set(other.degrees())
        return self.shift == other.shift and all(
            fields.equal(self.matrix(n), other.matrix(n)) for n in degs)


def identity_map(h):
    mats = {n: fields.identity(h.ring, h.rank(n)) for n in range(len(h.ranks))}
    return GradedMap(h.ring, mats, 0, h, h)


def zero_map(ring, domain_ranks, codomain_ranks, shift=0):
    mats = {}
    for n, r in enumerate(domain_ranks):
        m = n + shift
        c = codomain_ranks[m] if 0 <= m < len(codomain_ranks) else 0
        mats[n] = fields.zeros(ring, c, r)
    return GradedMap(ring, mats, shift)


def _transport(fld, chain, src_gens, dst_index, embed=None):
    """Push a chain along a generator-level inclusion, dropping generators
    that land in the target's exit set."""
    items = []
    for i, c in fld.items(chain):
        cube = src_gens[i]
        if embed is not None:
            cube = embed(cube)
        j = dst_index.get(cube)
        if j is not None:
            items.append((j, c))
    return fld.from_items(items)


def induced_map(src, dst, embed=None):
    """Map on homology induced by a generator-level inclusion of pairs.

    ``embed`` optionally maps cubes of ``src`` to cubes of ``dst`` (for
    instance a slice sitting inside a time block).
    """
    if src.ring != dst.ring:
        raise PreconditionError("homologies over different rings")
    fld = fields.field(src.ring)
    mats = {}
    for n in range(len(src.ranks)):
        rows = dst.rank(n)
        mat = fields.zeros(src.ring, rows, src.rank(n))
        dst_index = dst.index[n] if n < len(dst.index) else {}
        for j, z in enumerate(src.cycles(n)):
            image = _transport(fld, z, src.generators[n], dst_index, embed)
            if n >= len(dst.ranks):
                continue
            for i, c in enumerate(dst.coordinates(n, image)):
                mat[i, j] = c
        mats[n] = mat
    return GradedMap(src.ring, mats, 0, src, dst)


def inclusion_induced_map(small, large, ring="F2"):
    """Map ``H(small) -> H(large)`` induced by inclusion of cubical pairs.

    Pairs may be given as ``(A, B)`` tuples or as precomputed
    :class:`GradedHomology` objects.
    """
    if ring == "Z":
        raise UnsupportedRing("transition maps over Z are not supported")
    hs = small if isinstance(small, GradedHomology) else None
    hl = large if isinstance(large, GradedHomology) else None
    As, Bs = (hs.A, hs.B) if hs else small
    Al, Bl = (hl.A, hl.B) if hl else large
    if not (As.issubset(Al) and Bs.issubset(Bl)):
        raise PreconditionError("pairs are not nested")
    hs = hs or relative_homology((As, Bs), ring)
    hl = hl or relative_homology((Al, Bl), ring)
    return induced_map(hs, hl)


def snake_connecting(triple, ring="F2", homologies=None):
    """Connecting homomorphism ``H_n(N1, N2) -> H_{n-1}(N2, N3)``.

    Each basis cycle of the quotient ``C(N1)/C(N2)`` is lifted to ``C(N1)``,
    its boundary is taken there (it lies in ``C(N2)``), and the class of that
    boundary in ``C(N2)/C(N3)`` is read off.
    """
    if ring == "Z":
        raise UnsupportedRing("connecting homomorphism over Z is not supported")
    N1, N2, N3 = triple
    if not (N3.issubset(N2) and N2.issubset(N1)):
        raise PreconditionError("triple is not nested N3 <= N2 <= N1")
    fld = fields.field(ring)
    if homologies is None:
        h12 = relative_homology((N1, N2), ring)
        h23 = relative_homology((N2, N3), ring)
    else:
        h12, h23 = homologies
    signed = fld is not fields.F2
    mats = {}
    for n in range(len(h12.ranks)):
        rows = h23.rank(n - 1)
        mat = fields.zeros(ring, rows, h12.rank(n))
        if n >= 1:
            gens = h12.generators[n]
            target = h23.index[n - 1]
            for j, z in enumerate(h12.cycles(n)):
                acc = {}
                for i, c in fld.items(z):
                    for s, f in faces(gens[i]):
                        acc[f] = acc.get(f, 0) + (c * s if signed else c)
                items = []
                for f, c in acc.items():
                    if (c % 2 if not signed else c) == 0:
                        continue
                    if f not in N2.cubes:
                        raise PreconditionError("lifted boundary leaves N2; not a relative cycle")
                    k = target.get(f)
                    if k is not None:
                        items.append((k, c))
                image = fld.from_items(items)
                for i, c in enumerate(h23.coordinates(n - 1, image)):
                    mat[i, j] = c
        mats[n] = mat
    return GradedMap(ring, mats, -1, h12, h23)


@dataclass
class ExactnessReport:
    exact: bool
    nodes: list  # (position, degree, image rank, kernel dim)

    def __bool__(self):
        return self.exact


def exactness_check(maps):
    """Check exactness at every interior node of a composable chain of maps.

    Node ``i`` sits between ``maps[i]`` and ``maps[i + 1]``; in each degree
    the image of the incoming map must equal the kernel of the outgoing one.
    """
    if len(maps) < 2:
        raise PreconditionError("exactness needs at least two composable maps")
    nodes = []
    exact = True
    for pos, (f, g) in enumerate(zip(maps, maps[1:])):
        if f.ring != g.ring:
            raise PreconditionError("maps over different rings")
        degs = set(n + f.shift for n in f.degrees()) | set(g.degrees())
        for n in sorted(degs):
            if n < 0:
                continue
            dim_in = f.codomain_rank(n)
            dim_out = g.domain_rank(n)
            if dim_in != dim_out:
                raise PreconditionError(
                    f"maps {pos} and {pos + 1} do not compose in degree {n}: {dim_in} != {dim_out}")
            im = fields.rank(f.ring, f.matrix(n - f.shift))
            ker = dim_out - fields.rank(g.ring, g.matrix(n))
            ok = im == ker
            exact = exact and ok
            nodes.append({"node": pos, "degree": n, "image": im, "kernel": ker, "exact": ok})
    return ExactnessReport(exact, nodes)


def euler_characteristic(h):
    return sum((-1) ** n * r for n, r in enumerate(h.ranks))
