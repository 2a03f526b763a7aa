"""Attractor-repeller long exact sequence of an index triple."""
from dataclasses import dataclass

from ..errors import ExactnessFailure, NotStabilized
from ..homology import exactness_check, induced_map, relative_homology, snake_connecting
from ..pairs import IndexPair, thicken_triple
from .limit import direct_limit, slice_homology_system, slice_pair


@dataclass
class LongExactSequenceData:
    """Homologies and maps of ``... -> H(N2,N3) -> H(N1,N3) -> H(N1,N2) -> ...``
    at one slice, with the exactness verdict."""

    slice: int
    h_attractor: object   # H(N2, N3)
    h_total: object       # H(N1, N3)
    h_repeller: object    # H(N1, N2)
    inclusion: object     # i_*
    projection: object    # p_*
    boundary: object      # connecting homomorphism
    exactness: object
    stabilization: dict

    @property
    def exact(self):
        return self.exactness.exact

    def boundary_ranks(self):
        """Rank of the connecting map per source degree."""
        ranks = self.boundary.ranks()
        return {n: ranks[n] for n in range(len(self.h_repeller.ranks))}


def _stabilization_slice(T, burn_in, ring, threads):
    k0s = {}
    for name, pair in (("total", T.outer), ("attractor", T.attractor), ("repeller", T.repeller)):
        try:
            k0s[name] = direct_limit(slice_homology_system(pair, burn_in, ring=ring,
                                                           threads=threads)).k0
        except NotStabilized as exc:
            k0s[name] = exc
    return k0s


def les_of_triple(T, m=1, burn_in=None, ring="F2", slice=None, threads=1):
    """Long exact sequence of the thickened triple at its stabilization slice.

    The slice is the largest stabilization index of the three pairs
    ``(N1, N3)``, ``(N2, N3)``, ``(N1, N2)`` unless given explicitly.
    """
    G = T.graph
    if burn_in is None:
        burn_in = G.K // 2
    Tm = thicken_triple(T, m)
    k0s = {}
    if slice is None:
        k0s = _stabilization_slice(Tm, burn_in, ring, threads)
        bad = [name for name, v in k0s.items() if isinstance(v, Exception)]
        if bad:
            raise NotStabilized(f"pairs {bad} of the triple do not stabilize")
        slice = max(k0s.values())
    N1, N3 = slice_pair(IndexPair(Tm.N1, Tm.N3, G), slice)
    _, N2 = slice_pair(IndexPair(Tm.N1, Tm.N2, G), slice)
    h23 = relative_homology((N2, N3), ring)
    h13 = relative_homology((N1, N3), ring)
    h12 = relative_homology((N1, N2), ring)
    inc = induced_map(h23, h13)
    proj = induced_map(h13, h12)
    bd = snake_connecting((N1, N2, N3), ring, homologies=(h12, h23))
    report = exactness_check([inc, proj, bd, inc])
    data = LongExactSequenceData(slice, h23, h13, h12, inc, proj, bd, report, k0s)
    if not report.exact:
        bad = [n for n in report.nodes if not n["exact"]]
        raise ExactnessFailure(f"long exact sequence fails at {bad[0]}")
    return data


def connecting_homomorphism(T, m=1, burn_in=None, ring="F2", threads=1):
    return les_of_triple(T, m, burn_in, ring, threads=threads).boundary
