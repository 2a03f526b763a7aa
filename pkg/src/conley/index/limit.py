"""Slice homologies, telescope blocks, transition maps and their direct limit."""
from dataclasses import dataclass, field

from ..errors import NonIsomorphicInclusion, NotIsolating, NotStabilized, PreconditionError, \
    UnsupportedRing
from ..homology import CubicalSet, ElementaryCube, GradedMap, identity_map, induced_map, \
    relative_homology
from ..homology import fields
from ..pairs import IndexPair, build_index_pair, isolating_check, thicken_exit


def _cells_complex(cells, d):
    return CubicalSet.from_cells(cells, ambient_dim=d)


def slice_pair(P, k):
    """The ``d``-dimensional cubical pair ``(N1(k), N2(k))``."""
    d = P.graph.grid.dim
    return _cells_complex(P.N1[k], d), _cells_complex(P.N2[k], d)


def slice_pair_homology(P, k, ring="F2"):
    if not 0 <= k < P.graph.nslices:
        raise PreconditionError(f"slice {k} outside 0..{P.graph.K}")
    return relative_homology(slice_pair(P, k), ring)


@dataclass
class BlockComplex:
    """Telescope model of the pair over the slice interval ``[k, l]``.

    The first coordinate is time (in slice units); every unit interval
    ``[j, j+1]`` carries the prisms ``[j, j+1] x Q`` for ``Q`` in slice ``j``
    or slice ``j + 1``.
    """

    A: CubicalSet
    B: CubicalSet
    k: int
    l: int

    @property
    def pair(self):
        return self.A, self.B

    @staticmethod
    def embed_slice(j):
        prefix = ((j, True),)
        return lambda cube: cube.embed(prefix)


def block_complex(P, k, l):
    if k > l:
        raise PreconditionError("block needs k <= l")
    d = P.graph.grid.dim
    sets = []
    for S in (P.N1, P.N2):
        if k == l:
            tops = [ElementaryCube.cell(c).embed(((k, True),)) for c in S[k]]
        else:
            tops = [ElementaryCube.cell(c).embed(((j, False),))
                    for j in range(k, l) for c in S[j] | S[j + 1]]
        sets.append(CubicalSet.from_cubes(tops, ambient_dim=d + 1))
    return BlockComplex(sets[0], sets[1], k, l)


def slice_inclusion_map(slice_h, block, block_h, j):
    """Map from the homology of slice ``j`` into the homology of ``block``."""
    if not block.k <= j <= block.l:
        raise PreconditionError(f"slice {j} not in block [{block.k}, {block.l}]")
    return induced_map(slice_h, block_h, embed=BlockComplex.embed_slice(j))


def _invert(m, ring, degree):
    rows, cols = m.shape
    inv = fields.inverse(ring, m)
    if inv is None:
        r = fields.rank(ring, m)
        raise NonIsomorphicInclusion(
            f"slice inclusion is not an isomorphism in degree {degree} "
            f"({rows}x{cols}, rank {r}); refine the grid, shrink tau or raise the thickening",
            degree=degree, defect=max(rows, cols) - r)
    return inv


def transition_from_homologies(hk, hl, block, block_h, ring):
    """``g = (right inclusion)^-1 o (left inclusion)`` for precomputed homologies."""
    left = slice_inclusion_map(hk, block, block_h, block.k)
    right = slice_inclusion_map(hl, block, block_h, block.l)
    mats = {}
    for n in range(len(hk.ranks)):
        inv = _invert(right.matrix(n), ring, n)
        mats[n] = fields.matmul(ring, inv, left.matrix(n))
    return GradedMap(ring, mats, 0, hk, hl)


def transition_map(P, k, l, m=0, ring="F2"):
    """Transition ``B_k -> B_l`` of the pair thickened by ``m`` steps."""
    if ring == "Z":
        raise UnsupportedRing("transition maps need field coefficients")
    if k > l:
        raise PreconditionError("transition needs k <= l")
    Pm = thicken_exit(P, m)
    hk = slice_pair_homology(Pm, k, ring)
    if k == l:
        return identity_map(hk)
    hl = slice_pair_homology(Pm, l, ring)
    block = block_complex(Pm, k, l)
    return transition_from_homologies(hk, hl, block, relative_homology(block.pair, ring), ring)


@dataclass
class SliceHomologySystem:
    """Slice homologies ``B_k`` and transitions ``g_{k,l}`` over a window.

    ``transitions[(k, l)]`` is a :class:`GradedMap` or the
    :class:`NonIsomorphicInclusion` raised while computing it.
    """

    ring: str
    first: int
    last: int
    homologies: dict
    transitions: dict = field(default_factory=dict)

    def g(self, k, l):
        t = self.transitions[(k, l)]
        if isinstance(t, Exception):
            raise t
        return t

    def is_invertible(self, k, l):
        t = self.transitions.get((k, l))
        if t is None or isinstance(t, Exception):
            return False
        hk, hl = self.homologies[k], self.homologies[l]
        if hk.ranks != hl.ranks:
            return False
        return all(fields.inverse(self.ring, t.matrix(n)) is not None for n in range(len(hk.ranks)))

    def rank_history(self):
        return [(k, list(self.homologies[k].ranks)) for k in range(self.first, self.last + 1)]


def slice_homology_system(P, first, last=None, ring="F2", threads=1):
    """All slice homologies and transitions for ``first <= k <= l <= last``.

    ``last`` defaults to ``K - 1``: the final slice has no outgoing map, so
    its exit set is not observable.
    """
    if ring == "Z":
        raise UnsupportedRing("direct limits need field coefficients")
    G = P.graph
    if last is None:
        last = G.K - 1
    if not 0 <= first <= last <= G.K:
        raise PreconditionError(f"bad window {first}..{last} for K = {G.K}")
    homs = {k: slice_pair_homology(P, k, ring) for k in range(first, last + 1)}
    system = SliceHomologySystem(ring, first, last, homs)

    def job(kl):
        k, l = kl
        if k == l:
            return kl, identity_map(homs[k])
        block = block_complex(P, k, l)
        try:
            bh = relative_homology(block.pair, ring)
            return kl, transition_from_homologies(homs[k], homs[l], block, bh, ring)
        except NonIsomorphicInclusion as exc:
            return kl, exc

    pairs = [(k, l) for k in range(first, last + 1) for l in range(k, last + 1)]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, pairs))
    else:
        results = [job(kl) for kl in pairs]
    system.transitions = dict(results)
    return system


@dataclass
class ConleyIndexResult:
    """Stabilized slice homology with the transitions witnessing stabilization."""

    k0: int
    homology: object
    system: SliceHomologySystem
    pair: IndexPair = None

    @property
    def ranks(self):
        return list(self.homology.ranks)

    def witnesses(self):
        return {kl: t for kl, t in self.system.transitions.items()
                if kl[0] >= self.k0 and not isinstance(t, Exception)}


def direct_limit(system):
    """Smallest ``k0`` from which every transition in the window is invertible.

    A stable range consisting of the last slice alone witnesses nothing, so
    at least one transition ``g_{k0, l}`` with ``l > k0`` is required unless
    the window has a single slice.
    """
    last = system.last
    k0 = last
    for k in range(last - 1, system.first - 1, -1):
        if not all(system.is_invertible(k, l) for l in range(k, last + 1)):
            break
        k0 = k
    if k0 == last and system.first < last:
        raise NotStabilized(f"transitions are not invertible anywhere in {system.first}..{last}",
                            rank_history=system.rank_history())
    return ConleyIndexResult(k0, system.homologies[k0], system)


def conley_index(N, G, m=1, burn_in=None, ring="F2", margin=0, threads=1, check=True):
    """Index pair, exit thickening, slice homologies, transitions and limit."""
    if burn_in is None:
        burn_in = G.K // 2
    if check and not isolating_check(N, G):
        raise NotIsolating("invariant part touches the boundary of N")
    P = build_index_pair(N, G, margin)
    Pm = thicken_exit(P, m)
    system = slice_homology_system(Pm, burn_in, ring=ring, threads=threads)
    result = direct_limit(system)
    result.pair = Pm
    return result
