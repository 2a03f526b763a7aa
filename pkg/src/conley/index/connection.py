"""Orbit detection, uniform connectedness and connecting-orbit witnesses."""
import dataclasses
from itertools import product
from dataclasses import dataclass, field

from ..dynamics import build_transition_graph, f_dot_h, sinusoid
from ..errors import ConleyError, NoConnection, PreconditionError
from ..pairs import build_index_pair, build_index_triple, invariant_part, isolating_check
from .sequence import les_of_triple

CONNECTED = "uniformly connected"
NOT_CONNECTED = "not uniformly connected"


@dataclass
class PathWitness:
    """Path of ``(slice, cell)`` pairs at consecutive slices."""

    cells: list
    note: str = ""

    @property
    def start(self):
        return self.cells[0][0]

    @property
    def end(self):
        return self.cells[-1][0]

    def __len__(self):
        return len(self.cells)

    def to_dict(self):
        return {"cells": [[k, list(c)] for k, c in self.cells], "note": self.note}


def _check_graph(G, *sets):
    for S in sets:
        if S.nslices != G.nslices:
            raise PreconditionError(f"set has {S.nslices} slices, graph has {G.nslices}")


def _depth(cells, divisions):
    """Grid distance (in the ``3^d - 1`` neighbourhood) from each cell to the
    complement of ``cells``; cells next to the complement have depth 1."""
    d = len(divisions)
    offsets = [o for o in product((-1, 0, 1), repeat=d) if any(o)]

    def neighbours(c):
        for o in offsets:
            yield tuple(a + b for a, b in zip(c, o))

    depth = {}
    frontier = []
    for c in cells:
        if any(x not in cells for x in neighbours(c)):
            depth[c] = 1
            frontier.append(c)
    level = 1
    while frontier:
        level += 1
        nxt = []
        for c in frontier:
            for x in neighbours(c):
                if x in cells and x not in depth:
                    depth[x] = level
                    nxt.append(x)
        frontier = nxt
    return depth


def orbit_detector(P, burn_in=None):
    """Longest path through ``N1 \\ N2`` ending at the last slice.

    Every cell gets the earliest slice from which a path inside ``N1 \\ N2``
    reaches it. The path ends at a cell of the last slice with the earliest
    start, chosen deepest inside ``N1 \\ N2`` and then closest to the middle
    of the deepest cells. It is traced back through predecessors with the
    same start, staying put when possible and otherwise taking the deepest
    (then smallest) predecessor.
    The path is returned when it starts at or before ``burn_in``, else
    ``None``. This is a combinatorial witness: it shadows a true orbit only
    as well as the outer approximation encloses the flow.
    """
    N1, N2, G = P
    _check_graph(G, N1, N2)
    if burn_in is None:
        burn_in = G.K // 2
    D = N1 - N2
    div = G.grid.divisions
    start = {}
    for k in range(G.nslices):
        for c in D[k]:
            start.setdefault((k, c), k)
        if k == G.K:
            break
        for c in D[k]:
            s = start[(k, c)]
            for x in G.successors(k, c) & D[k + 1]:
                key = (k + 1, x)
                if s < start.get(key, k + 1):
                    start[key] = s
    if not D[G.K]:
        return None

    def parent(k, node, candidates):
        if node in candidates:
            return node
        depth = _depth(D[k], div)
        return min(candidates, key=lambda c: (-depth[c], c))

    s0 = min(start[(G.K, c)] for c in D[G.K])
    if s0 > burn_in:
        return None
    depth = _depth(D[G.K], div)
    top = max(depth.values())
    core = [c for c in D[G.K] if depth[c] == top]
    mid = [sum(c[a] for c in core) / len(core) for a in range(len(div))]
    ends = [c for c in D[G.K] if start[(G.K, c)] == s0]
    node = min(ends, key=lambda c: (-depth[c], sum((x - m) ** 2 for x, m in zip(c, mid)), c))
    cells = [(G.K, node)]
    for k in range(G.K, s0, -1):
        preds = G.predecessors(k).get(node, ())
        node = parent(k - 1, node, [p for p in preds if p in D[k - 1] and start[(k - 1, p)] == s0])
        cells.append((k - 1, node))
    cells.reverse()
    return PathWitness(cells, f"spans slices {s0}..{G.K} inside N1 \\ N2")


@dataclass
class ConnectednessVerdict:
    verdict: str
    witness_slice: int = None
    gap_cubes: dict = field(default_factory=dict)
    degenerate: bool = False

    @property
    def connected(self):
        return self.verdict == CONNECTED

    def to_dict(self):
        return {"verdict": self.verdict, "witness_slice": self.witness_slice,
                "gap_cubes": {str(k): [list(c) for c in v] for k, v in sorted(self.gap_cubes.items())},
                "degenerate": self.degenerate}


def uniform_connectedness(K_set, U_A, U_R, burn_in):
    """Test every slice ``k >= burn_in`` for ``K(k) <= U_A(k) | U_R(k)``.

    A covered slice gives ``"not uniformly connected"`` with that slice as
    witness; otherwise each slice records its cubes outside ``U_A | U_R``.
    An empty ``K_set`` is covered vacuously and flagged ``degenerate``.
    """
    if not (U_A & U_R).is_empty():
        k = next(k for k in range(U_A.nslices) if U_A[k] & U_R[k])
        raise PreconditionError(f"U_A and U_R must be disjoint; they overlap at slice {k}")
    if not 0 <= burn_in < K_set.nslices:
        raise PreconditionError(f"burn_in {burn_in} outside 0..{K_set.nslices - 1}")
    degenerate = K_set.is_empty()
    gaps = {}
    for k in range(burn_in, K_set.nslices):
        gap = K_set[k] - U_A[k] - U_R[k]
        if not gap:
            return ConnectednessVerdict(NOT_CONNECTED, k, {}, degenerate)
        gaps[k] = sorted(gap)
    return ConnectednessVerdict(CONNECTED, None, gaps, degenerate)


def connection_witness(K_set, N_R, N_A, U_A, U_R, G):
    """Path inside ``K_set`` from ``N_R`` at slice 0 to ``N_A`` at the last
    slice visiting at least one cube outside ``U_A | U_R``.

    Breadth-first search over ``(cell, gap seen)`` states; raises
    :class:`NoConnection` when no such path exists.
    """
    _check_graph(G, K_set, N_R, N_A, U_A, U_R)

    def outside(k, c):
        return c not in U_A[k] and c not in U_R[k]

    layer = {}
    for c in sorted(K_set[0] & N_R[0]):
        layer[(c, outside(0, c))] = None
    layers = [layer]
    for k in range(G.K):
        nxt = {}
        for c, seen in sorted(layer, key=lambda s: (s[0], not s[1])):
            for x in sorted(G.successors(k, c) & K_set[k + 1]):
                state = (x, seen or outside(k + 1, x))
                if state not in nxt:
                    nxt[state] = (c, seen)
        layer = nxt
        layers.append(layer)
    finals = sorted(c for c, seen in layer if seen and c in N_A[G.K])
    if not finals:
        raise NoConnection("no path from the repeller block to the attractor block "
                           "passes outside U_A and U_R")
    state = (finals[0], True)
    cells = []
    for k in range(G.K, -1, -1):
        cells.append((k, state[0]))
        state = layers[k][state]
    cells.reverse()
    gap = next(k for k, c in cells if outside(k, c))
    return PathWitness(cells, f"leaves U_A and U_R at slice {gap}")


@dataclass
class ConnectionReport:
    """Connection analysis of one attractor-repeller configuration."""

    boundary_ranks: dict
    connectedness: ConnectednessVerdict
    connection: PathWitness = None
    orbits: dict = field(default_factory=dict)
    les: object = None
    errors: dict = field(default_factory=dict)

    @property
    def boundary_nonzero(self):
        return any(self.boundary_ranks.values())


def analyze_connection(G, N, N_A, N_R, U_A, U_R, m=1, burn_in=None, ring="F2", margin=0,
                       threads=1):
    """LES, ``∂`` ranks, connectedness verdict and witnesses on one graph.

    Failures of individual stages are collected in ``errors`` keyed by stage.
    """
    if burn_in is None:
        burn_in = G.K // 2
    errors = {}
    les = None
    ranks = {}
    try:
        T = build_index_triple(N, N_A, G, margin)
        les = les_of_triple(T, m, burn_in, ring, threads=threads)
        ranks = les.boundary_ranks()
    except ConleyError as exc:
        errors["les"] = exc
    K_set = invariant_part(N, G, margin)
    verdict = uniform_connectedness(K_set, U_A, U_R, burn_in)
    witness = None
    try:
        witness = connection_witness(K_set, N_R, N_A, U_A, U_R, G)
    except ConleyError as exc:
        errors["connection"] = exc
    orbits = {}
    for name, region in (("N_R", N_R), ("N_A", N_A)):
        try:
            orbits[name] = orbit_detector(build_index_pair(region, G, margin), burn_in)
        except ConleyError as exc:
            errors[f"orbit_{name}"] = exc
            orbits[name] = None
    return ConnectionReport(ranks, verdict, witness, orbits, les, errors)


@dataclass
class SweepRow:
    amplitude: float
    isolating: bool
    report: ConnectionReport = None
    error: Exception = None

    @property
    def persists(self):
        """``∂`` nonzero, witness found and solutions in both blocks."""
        r = self.report
        return (self.isolating and r is not None and r.boundary_nonzero
                and r.connection is not None and all(r.orbits.get(k) for k in ("N_R", "N_A")))


def perturbation_sweep(vf, grid, tau, K, N, N_A, N_R, U_A, U_R, amplitudes, m=1, burn_in=None,
                       ring="F2", margin=0, padding=0, substeps=8, frequency=1.0,
                       embedded=False, threads=None):
    """Rerun the connection analysis with forcing ``eps * sin(frequency t)``
    (composed with ``h`` when ``embedded``) for each amplitude.

    Errors are recorded per row; the sweep itself does not raise on them.
    """
    rows = []
    for eps in amplitudes:
        forcing = sinusoid(eps, frequency)
        if embedded:
            forcing = f_dot_h(forcing)
        field_eps = dataclasses.replace(vf, forcing=forcing)
        try:
            G = build_transition_graph(field_eps, grid, tau, K, padding, substeps, threads=threads)
            if not isolating_check(N, G):
                rows.append(SweepRow(float(eps), False))
                continue
            report = analyze_connection(G, N, N_A, N_R, U_A, U_R, m, burn_in, ring, margin,
                                        threads or 1)
            rows.append(SweepRow(float(eps), True, report))
        except ConleyError as exc:
            rows.append(SweepRow(float(eps), None, None, exc))
    return rows
