"""Slice-indexed multivalued cubical maps enclosing the time-``tau`` flow."""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from ..errors import PreconditionError
from .systems import rk4_batch

DEFAULT_SUBSTEPS = 8


def thread_cap():
    """Worker count from ``CONLEY_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("CONLEY_THREADS", "1")))
    except ValueError:
        return 1


class SliceMap(NamedTuple):
    """``images[Q]`` are the cubes hit from cube ``Q``; cubes in ``escaped``
    left the grid and have no images (they map to the absorbing sink)."""

    images: dict
    escaped: frozenset


def _sample_offsets(d):
    corners = np.array(list(product((0.0, 1.0), repeat=d)))
    return np.vstack([corners, np.full((1, d), 0.5)])


def outer_approximation(vf, grid, k, tau, padding=0, substeps=DEFAULT_SUBSTEPS, t0=0.0,
                        cells=None):
    """Enclosure of the flow from time ``t0 + k*tau`` to ``t0 + (k+1)*tau``.

    Every cube's corners and center are integrated with RK4; the bounding box
    of the endpoints is covered by grid cubes and inflated by ``padding``
    cells. If any sample leaves the grid the cube is marked escaped.
    """
    if padding < 0 or int(padding) != padding:
        raise PreconditionError("padding must be a nonnegative integer")
    if tau <= 0:
        raise PreconditionError("tau must be positive")
    if vf.dim != grid.dim:
        raise PreconditionError(f"vector field dimension {vf.dim} != grid dimension {grid.dim}")
    cells = sorted(grid.cells() if cells is None else cells)
    d = grid.dim
    offs = _sample_offsets(d)
    h = np.asarray(grid.cell_size)
    lower = np.asarray(grid.lower, dtype=float)
    idx = np.asarray(cells, dtype=float).reshape(len(cells), d)
    pts = lower + (idx[:, None, :] + offs[None, :, :]) * h
    flat = pts.reshape(-1, d)
    end = rk4_batch(vf.rhs, t0 + k * tau, flat, tau, substeps)
    inside = grid.contains(end).reshape(len(cells), len(offs))
    end = end.reshape(len(cells), len(offs), d)
    images = {}
    escaped = []
    for q, cell in enumerate(cells):
        if not inside[q].all():
            escaped.append(cell)
            images[cell] = frozenset()
            continue
        lo = end[q].min(axis=0)
        hi = end[q].max(axis=0)
        images[cell] = frozenset(grid.cover(lo, hi, int(padding)))
    return SliceMap(images, frozenset(escaped))


@dataclass(frozen=True)
class TransitionGraph:
    """Combinatorial semiflow on slices ``0..K`` at times ``t0 + k*tau``.

    ``maps[k]`` sends cubes at slice ``k`` to cubes at slice ``k + 1``.
    """

    grid: object
    tau: float
    maps: tuple
    t0: float = 0.0

    @property
    def K(self):
        return len(self.maps)

    @property
    def nslices(self):
        return len(self.maps) + 1

    def times(self):
        return [self.t0 + k * self.tau for k in range(self.nslices)]

    def successors(self, k, cell):
        if k >= self.K:
            return frozenset()
        return self.maps[k].images.get(cell, frozenset())

    def escapes(self, k, cell):
        return k < self.K and cell in self.maps[k].escaped

    def predecessors(self, k):
        """Reverse adjacency from slice ``k`` to slice ``k - 1``."""
        rev = {}
        if k == 0:
            return rev
        for src, imgs in self.maps[k - 1].images.items():
            for dst in imgs:
                rev.setdefault(dst, []).append(src)
        return rev


def build_transition_graph(vf, grid, tau, K, padding=0, substeps=DEFAULT_SUBSTEPS, t0=0.0,
                           threads=None):
    """Outer approximations for slices ``0..K-1``.

    Autonomous fields reuse one slice map. Slices are computed in parallel
    on at most ``threads`` workers (``CONLEY_THREADS`` by default); the
    result does not depend on the worker count.
    """
    if K < 1:
        raise PreconditionError("need at least one time step")
    if vf.autonomous:
        one = outer_approximation(vf, grid, 0, tau, padding, substeps, t0)
        return TransitionGraph(grid, float(tau), tuple(one for _ in range(K)), float(t0))
    workers = threads or thread_cap()

    def job(k):
        return outer_approximation(vf, grid, k, tau, padding, substeps, t0)

    if workers == 1:
        maps = [job(k) for k in range(K)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            maps = list(pool.map(job, range(K)))
    return TransitionGraph(grid, float(tau), tuple(maps), float(t0))
