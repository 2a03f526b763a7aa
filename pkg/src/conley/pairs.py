"""Combinatorial index pairs and index triples on a transition graph.

All sets here are :class:`SlicedCubeSet` objects: one frozenset of grid
cells per slice ``0..K``. A *path* is a sequence of cells ``Q_j, ..., Q_l``
at consecutive slices with ``Q_{i+1}`` among the successors of ``Q_i``.
"""
import math
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

from .errors import IrregularConstruction, PreconditionError

INF = math.inf


@dataclass(frozen=True)
class SlicedCubeSet:
    """Per-slice sets of full-dimensional grid cells (subsets of extended phase space)."""

    slices: tuple

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(frozenset(s) for s in self.slices))

    @classmethod
    def empty(cls, nslices):
        return cls((frozenset(),) * nslices)

    @classmethod
    def constant(cls, cells, nslices):
        cells = frozenset(cells)
        return cls((cells,) * nslices)

    @classmethod
    def from_boxes(cls, grid, boxes, nslices, per_slice=False):
        """Cells contained in a union of ``(lower, upper)`` boxes.

        With ``per_slice`` the argument holds one box list per slice.
        """
        if per_slice:
            if len(boxes) != nslices:
                raise PreconditionError(f"expected {nslices} per-slice box lists, got {len(boxes)}")
            per = boxes
        else:
            per = [boxes] * nslices
        out = []
        for bl in per:
            cells = set()
            for lo, hi in bl:
                cells.update(grid.cells_in_box(lo, hi))
            out.append(frozenset(cells))
        return cls(tuple(out))

    @property
    def nslices(self):
        return len(self.slices)

    def __getitem__(self, k):
        return self.slices[k]

    def __iter__(self):
        return iter(self.slices)

    def __len__(self):
        return len(self.slices)

    def _zip(self, other, op):
        if self.nslices != other.nslices:
            raise PreconditionError("sliced sets have different slice counts")
        return SlicedCubeSet(tuple(op(a, b) for a, b in zip(self.slices, other.slices)))

    def __or__(self, other):
        return self._zip(other, frozenset.union)

    def __and__(self, other):
        return self._zip(other, frozenset.intersection)

    def __sub__(self, other):
        return self._zip(other, frozenset.difference)

    def issubset(self, other):
        return self.nslices == other.nslices and all(a <= b for a, b in zip(self, other))

    def is_empty(self):
        return not any(self.slices)

    def count(self):
        return sum(len(s) for s in self.slices)

    def items(self):
        """Sorted ``(slice, cell)`` pairs."""
        return [(k, c) for k, s in enumerate(self.slices) for c in sorted(s)]


class IndexPair(NamedTuple):
    N1: SlicedCubeSet
    N2: SlicedCubeSet
    graph: object


class IndexTriple(NamedTuple):
    N1: SlicedCubeSet
    N2: SlicedCubeSet
    N3: SlicedCubeSet
    graph: object

    @property
    def outer(self):
        return IndexPair(self.N1, self.N3, self.graph)

    @property
    def attractor(self):
        return IndexPair(self.N2, self.N3, self.graph)

    @property
    def repeller(self):
        return IndexPair(self.N1, self.N2, self.graph)


class Verification(NamedTuple):
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def _check_slices(S, G):
    if S.nslices != G.nslices:
        raise PreconditionError(f"set has {S.nslices} slices, graph has {G.nslices}")


def invariant_part(N, G, margin=0):
    """Cells lying on a path inside ``N`` from slice ``margin`` or earlier to
    slice ``K - margin`` or later.

    Computed as forward-reachable-in-``N`` intersected with
    backward-reachable-in-``N``.
    """
    _check_slices(N, G)
    K = G.K
    fwd = []
    cur = frozenset()
    for k in range(K + 1):
        if k <= margin:
            cur = N[k]
        else:
            nxt = set()
            for c in cur:
                nxt.update(G.successors(k - 1, c))
            cur = frozenset(nxt) & N[k]
        fwd.append(cur)
    bwd = [frozenset()] * (K + 1)
    for k in range(K, -1, -1):
        if k >= K - margin:
            bwd[k] = N[k]
        else:
            nxt = bwd[k + 1]
            bwd[k] = frozenset(c for c in N[k] if not G.successors(k, c).isdisjoint(nxt))
    return SlicedCubeSet(tuple(f & b for f, b in zip(fwd, bwd)))


def forward_hull(S, within, G):
    """Smallest set containing ``S`` and closed under successors inside ``within``."""
    out = []
    prev = frozenset()
    for k in range(G.nslices):
        cur = set(S[k])
        if k > 0:
            for c in prev:
                cur.update(x for x in G.successors(k - 1, c) if x in within[k])
        prev = frozenset(cur)
        out.append(prev)
    return SlicedCubeSet(tuple(out))


def exit_cells(N1, G):
    """Cells of ``N1`` with an image leaving ``N1`` or escaping the grid."""
    out = []
    for k in range(G.nslices):
        if k == G.K:
            out.append(frozenset())
            continue
        nxt = N1[k + 1]
        out.append(frozenset(c for c in N1[k]
                             if G.escapes(k, c) or not G.successors(k, c) <= nxt))
    return SlicedCubeSet(tuple(out))


def verify_index_pair(P):
    """Independent check of the combinatorial index-pair conditions.

    - nesting: ``N2 <= N1``
    - exit (one-step form): a cell of ``N1`` with a successor outside ``N1``
      (or escaping) lies in ``N2``
    - positive invariance of ``N2`` relative to ``N1``: every successor of a
      cell of ``N2`` is in ``N2`` or outside ``N1``
    """
    N1, N2, G = P
    _check_slices(N1, G)
    _check_slices(N2, G)
    violations = []
    for k in range(G.nslices):
        for c in sorted(N2[k] - N1[k]):
            violations.append(f"nesting: slice {k} cell {c} in N2 but not N1")
    for k in range(G.K):
        n1_next, n2_next = N1[k + 1], N2[k + 1]
        for c in sorted(N1[k]):
            succ = G.successors(k, c)
            leaves = G.escapes(k, c) or not succ <= n1_next
            if leaves and c not in N2[k]:
                violations.append(f"exit: slice {k} cell {c} leaves N1 outside N2")
            if c in N2[k]:
                bad = sorted(x for x in succ if x in n1_next and x not in n2_next)
                if bad:
                    violations.append(
                        f"exit set invariance: slice {k} cell {c} enters N1\\N2 at {bad[0]}")
    return Verification(not violations, violations)


def build_index_pair(N, G, margin=0):
    """Index pair for the invariant part of ``N``.

    ``N1`` is the forward hull of the invariant part inside ``N``; ``N2`` is
    the forward hull inside ``N1`` of the cells whose images leave ``N1``.
    """
    _check_slices(N, G)
    inv = invariant_part(N, G, margin)
    if inv.is_empty():
        empty = SlicedCubeSet.empty(G.nslices)
        return IndexPair(empty, empty, G)
    N1 = forward_hull(inv, N, G)
    N2 = forward_hull(exit_cells(N1, G), N1, G)
    P = IndexPair(N1, N2, G)
    check = verify_index_pair(P)
    if not check:
        raise IrregularConstruction(
            f"constructed pair fails verification: {check.violations[0]}", check.violations)
    return P


def discrete_exit_time(P):
    """Minimal number of steps from each cell of ``N1`` into ``N2`` along
    paths inside ``N1``; ``inf`` when ``N2`` is unreachable.

    Returns one dict ``cell -> steps`` per slice.
    """
    N1, N2, G = P
    out = [None] * G.nslices
    for k in range(G.K, -1, -1):
        times = {}
        later = out[k + 1] if k < G.K else {}
        for c in N1[k]:
            if c in N2[k]:
                times[c] = 0
                continue
            best = INF
            for x in G.successors(k, c):
                t = later.get(x, INF)
                if t + 1 < best:
                    best = t + 1
            times[c] = best
        out[k] = times
    return out


def thicken_exit(P, m):
    """Enlarge the exit set by the cells that reach it within ``m`` steps.

    The thickened exit set is closed under successors inside ``N1`` so the
    result is again an index pair. ``m = 0`` returns ``P`` unchanged.
    """
    if m < 0:
        raise PreconditionError("thickening must be nonnegative")
    N1, N2, G = P
    if m == 0:
        return P
    times = discrete_exit_time(P)
    near = SlicedCubeSet(tuple(frozenset(c for c, t in tk.items() if t <= m) for tk in times))
    thick = forward_hull(near | N2, N1, G)
    out = IndexPair(N1, thick, G)
    check = verify_index_pair(out)
    if not check:
        raise IrregularConstruction(f"thickened pair fails verification: {check.violations[0]}",
                                    check.violations)
    return out


def _escapes_and_returns(N_A, N, G):
    """First ``(slice, cell)`` where a path inside ``N`` that left ``N_A``
    re-enters it, or ``None``."""
    outside = N - N_A
    away = frozenset()
    for k in range(1, G.nslices):
        nxt = set()
        for c in away:
            succ = G.successors(k - 1, c)
            if not succ.isdisjoint(N_A[k]):
                return k, c
            nxt.update(succ)
        for c in N_A[k - 1]:
            nxt.update(G.successors(k - 1, c))
        away = frozenset(nxt) & outside[k]
    return None


def build_index_triple(N, N_A, G, margin=0):
    """Index triple ``N3 <= N2 <= N1`` for an attractor isolated by ``N_A``."""
    _check_slices(N, G)
    if not N_A.issubset(N):
        raise PreconditionError("attractor neighbourhood must lie inside N")
    inv_a = invariant_part(N_A, G, margin)
    if inv_a.is_empty():
        raise PreconditionError("attractor neighbourhood has empty invariant part")
    back = _escapes_and_returns(N_A, N, G)
    if back is not None:
        raise PreconditionError(
            f"a path leaves the attractor neighbourhood and returns (slice {back[0]}, cell {back[1]})")
    outer = build_index_pair(N, G, margin)
    N1, N3 = outer.N1, outer.N2
    M = build_index_pair(N_A, G, margin)
    N2 = N3 | forward_hull(M.N1 & N1, N1, G)
    T = IndexTriple(N1, N2, N3, G)
    for name, pair in (("(N1, N3)", T.outer), ("(N2, N3)", T.attractor), ("(N1, N2)", T.repeller)):
        check = verify_index_pair(pair)
        if not check:
            raise IrregularConstruction(f"{name} fails verification: {check.violations[0]}",
                                        check.violations)
    return T


def thicken_triple(T, m):
    """Thicken both exit sets of a triple relative to ``N1``."""
    if m == 0:
        return T
    N3 = thicken_exit(T.outer, m).N2
    N2 = thicken_exit(T.repeller, m).N2
    T2 = IndexTriple(T.N1, N2, N3, T.graph)
    if not N3.issubset(N2):
        raise IrregularConstruction("thickened triple is not nested")
    return T2


def verify_ar_decomposition(K_set, A, R, G):
    """Check that ``(A, R)`` splits ``K_set`` into attractor and repeller.

    Every path through ``K_set`` from slice 0 to slice ``K`` must stay in
    ``A``, stay in ``R``, or run ``R ... (gap) ... A``: start in ``R``, end
    in ``A``, never re-enter ``R`` after leaving it and never leave ``A``
    once inside. Returns ``(ok, classification)``.
    """
    for S in (K_set, A, R):
        _check_slices(S, G)
    if not (A & R).is_empty():
        raise PreconditionError("attractor and repeller blocks overlap")
    A = A & K_set
    R = R & K_set

    def label(k, c):
        return "A" if c in A[k] else "R" if c in R[k] else "Z"

    # path states: "R" all in R so far, "Z" left R but not yet in A,
    # "RA" reached A after R, "AA" in A from the start
    states = {}
    violation = None
    for c in sorted(K_set[0]):
        lab = label(0, c)
        if lab == "Z":
            violation = violation or f"path starts outside A and R at slice 0 cell {c}"
            continue
        states.setdefault(c, set()).add("AA" if lab == "A" else "R")
    for k in range(G.K):
        nxt = {}
        for c in sorted(states):
            for x in sorted(G.successors(k, c) & K_set[k + 1]):
                lab = label(k + 1, x)
                for s in states[c]:
                    if s in ("AA", "RA") and lab != "A":
                        violation = violation or f"path leaves A at slice {k + 1} cell {x}"
                        continue
                    if s == "Z" and lab == "R":
                        violation = violation or f"path re-enters R at slice {k + 1} cell {x}"
                        continue
                    if s in ("AA", "RA"):
                        t = s
                    elif lab == "A":
                        t = "RA"
                    else:
                        t = "R" if s == "R" and lab == "R" else "Z"
                    nxt.setdefault(x, set()).add(t)
        states = nxt
    names = {"AA": "attractor", "R": "repeller", "RA": "connecting", "Z": "dangling"}
    kinds = dict.fromkeys(names.values(), 0)
    for c, ss in sorted(states.items()):
        for s in ss:
            kinds[names[s]] += 1
            if s == "Z":
                violation = violation or f"path ends outside A at slice {G.K} cell {c}"
    forbidden = _reaches(A, R, K_set, G)
    if forbidden:
        violation = violation or "a path runs from the attractor block to the repeller block"
    classification = {"end_states": kinds, "attractor_to_repeller": forbidden,
                      "violation": violation}
    return violation is None, classification


def _reaches(A, R, K_set, G):
    """Whether some path inside ``K_set`` runs from an ``A`` cell to an ``R`` cell."""
    cur = frozenset()
    for k in range(G.nslices):
        if k > 0:
            nxt = set()
            for c in cur:
                nxt.update(G.successors(k - 1, c))
            cur = frozenset(nxt) & K_set[k]
        if not cur.isdisjoint(R[k]):
            return True
        cur = cur | A[k]
    return False


def isolating_check(N, G, trim=None):
    """Whether the invariant part of ``N`` avoids the combinatorial boundary of ``N``.

    A cell of ``N(k)`` is a boundary cell if one of its ``3^d - 1`` grid
    neighbours (or the outside of the grid) is not in ``N(k)``. Only slices
    ``trim..K - trim`` are inspected (``trim`` defaults to ``K // 4``) since
    a finite window cannot rule out transients near its ends.
    """
    _check_slices(N, G)
    if trim is None:
        trim = G.K // 4
    inv = invariant_part(N, G)
    div = G.grid.divisions
    d = len(div)
    offsets = [o for o in product((-1, 0, 1), repeat=d) if any(o)]
    for k in range(trim, G.K - trim + 1):
        for c in inv[k]:
            for o in offsets:
                x = tuple(a + b for a, b in zip(c, o))
                if any(i < 0 or i >= n for i, n in zip(x, div)) or x not in N[k]:
                    return False
    return True
