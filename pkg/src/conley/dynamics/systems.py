"""Builtin vector fields, the spatial grid and a fixed-step RK4 integrator."""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import PreconditionError
from .forcing import ForcingSpec

CATALOG = ("saddle2d", "logistic1d", "twowell1d", "custom")

_DEFAULT_PARAMS = {
    "saddle2d": {"expansion": 1.0, "contraction": 1.0},
    "logistic1d": {"rate": 1.0},
    "twowell1d": {"a": 1.0, "b": 2.0},
    "custom": {},
}


@dataclass(frozen=True)
class VectorFieldSpec:
    """Right-hand side ``x' = f(x) + g(t)`` with ``g`` a scalar forcing.

    Builtin fields (parameters in state units per time unit):

    - ``saddle2d``: ``x' = expansion * x``, ``y' = -contraction * y``
    - ``logistic1d``: ``x' = rate * x (1 - x)``
    - ``twowell1d``: ``x' = -x (x - a)(x - b)``
    - ``custom``: ``params["polynomial"]`` lists, per component, terms
      ``[coefficient, [exponent per state variable]]``.
    """

    name: str
    params: dict = field(default_factory=dict)
    forcing: ForcingSpec = field(default_factory=ForcingSpec)

    def __post_init__(self):
        if self.name not in CATALOG:
            raise PreconditionError(f"unknown vector field {self.name!r}; catalog is {CATALOG}")
        unknown = set(self.params) - set(_DEFAULT_PARAMS[self.name]) - (
            {"polynomial"} if self.name == "custom" else set())
        if unknown:
            raise PreconditionError(f"unknown parameters for {self.name}: {sorted(unknown)}")
        if self.name == "custom":
            poly = self.params.get("polynomial")
            if not poly:
                raise PreconditionError("custom field needs params.polynomial")
            d = len(poly)
            for comp in poly:
                for term in comp:
                    if len(term) != 2 or len(term[1]) != d:
                        raise PreconditionError("polynomial terms are [coef, [exponents]] per component")
                    if any(int(e) != e or e < 0 for e in term[1]):
                        raise PreconditionError("polynomial exponents must be nonnegative integers")

    def param(self, key):
        return float(self.params.get(key, _DEFAULT_PARAMS[self.name][key]))

    @property
    def dim(self):
        if self.name == "saddle2d":
            return 2
        if self.name == "custom":
            return len(self.params["polynomial"])
        return 1

    @property
    def autonomous(self):
        return self.forcing.autonomous

    def rhs(self, t, X):
        """Evaluate on a batch ``X`` of shape ``(points, dim)``."""
        X = np.asarray(X, dtype=float)
        if self.name == "saddle2d":
            out = np.stack([self.param("expansion") * X[:, 0],
                            -self.param("contraction") * X[:, 1]], axis=1)
        elif self.name == "logistic1d":
            x = X[:, 0]
            out = (self.param("rate") * x * (1.0 - x))[:, None]
        elif self.name == "twowell1d":
            x = X[:, 0]
            out = (-x * (x - self.param("a")) * (x - self.param("b")))[:, None]
        else:
            cols = []
            for comp in self.params["polynomial"]:
                acc = np.zeros(X.shape[0])
                for coef, exps in comp:
                    term = np.full(X.shape[0], float(coef))
                    for j, e in enumerate(exps):
                        if e:
                            term = term * X[:, j] ** int(e)
                    acc = acc + term
                cols.append(acc)
            out = np.stack(cols, axis=1)
        if self.forcing.kind != "none":
            out = out + np.asarray(self.forcing(t), dtype=float)
        return out


@dataclass(frozen=True)
class Grid:
    """Uniform box grid; cells are indexed by integer tuples ``0 <= i < divisions``."""

    lower: tuple
    upper: tuple
    divisions: tuple

    def __post_init__(self):
        if not (len(self.lower) == len(self.upper) == len(self.divisions) >= 1):
            raise PreconditionError("grid lower, upper and divisions must share one dimension")
        if any(u <= l for l, u in zip(self.lower, self.upper)):
            raise PreconditionError("grid upper corner must exceed lower corner")
        if any(int(n) != n or n < 1 for n in self.divisions):
            raise PreconditionError("grid divisions must be positive integers")

    @property
    def dim(self):
        return len(self.lower)

    @property
    def cell_size(self):
        return tuple((u - l) / n for l, u, n in zip(self.lower, self.upper, self.divisions))

    def cells(self):
        return list(np.ndindex(*self.divisions))

    def cell_box(self, cell):
        h = self.cell_size
        lo = tuple(l + i * s for l, i, s in zip(self.lower, cell, h))
        hi = tuple(l + (i + 1) * s for l, i, s in zip(self.lower, cell, h))
        return lo, hi

    def to_units(self, x, axis):
        """Position in cell units along ``axis``, snapped to grid lines within 1e-9."""
        u = (x - self.lower[axis]) / self.cell_size[axis]
        r = round(u)
        return float(r) if abs(u - r) < 1e-9 else u

    def cover(self, lo, hi, padding=0):
        """Cells whose interiors meet the box ``[lo, hi]``, inflated by
        ``padding`` cells and clipped to the grid. A degenerate box on a grid
        line picks up both adjacent cells."""
        ranges = []
        for a in range(self.dim):
            ul, uh = self.to_units(lo[a], a), self.to_units(hi[a], a)
            i0 = int(np.floor(ul))
            i1 = int(np.ceil(uh)) - 1
            if i1 < i0:
                i0, i1 = i1, i0
            i0 = max(i0 - padding, 0)
            i1 = min(i1 + padding, self.divisions[a] - 1)
            if i1 < i0:
                return []
            ranges.append(range(i0, i1 + 1))
        return _product_ranges(ranges)

    def cells_in_box(self, lo, hi):
        """Cells contained in the box ``[lo, hi]`` (up to grid-line snapping)."""
        ranges = []
        for a in range(self.dim):
            i0 = int(np.ceil(self.to_units(lo[a], a)))
            i1 = int(np.floor(self.to_units(hi[a], a))) - 1
            i0, i1 = max(i0, 0), min(i1, self.divisions[a] - 1)
            if i1 < i0:
                return []
            ranges.append(range(i0, i1 + 1))
        return _product_ranges(ranges)

    def contains(self, X, tol=1e-9):
        """Mask of rows of ``X`` inside the closed grid box."""
        X = np.asarray(X, dtype=float)
        h = np.asarray(self.cell_size)
        lo = np.asarray(self.lower) - tol * h
        hi = np.asarray(self.upper) + tol * h
        return np.all(np.isfinite(X) & (X >= lo) & (X <= hi), axis=1)


def _product_ranges(ranges):
    out = [()]
    for r in ranges:
        out = [c + (i,) for c in out for i in r]
    return out


class Endpoint(NamedTuple):
    state: np.ndarray
    escaped: bool


def rk4_batch(rhs, t0, X, tau, steps):
    """Classical RK4 with ``steps`` equal steps on a batch of initial states."""
    X = np.array(X, dtype=float)
    dt = tau / steps
    t = float(t0)
    with np.errstate(all="ignore"):
        for i in range(steps):
            k1 = rhs(t, X)
            k2 = rhs(t + dt / 2, X + dt / 2 * k1)
            k3 = rhs(t + dt / 2, X + dt / 2 * k2)
            k4 = rhs(t + dt, X + dt * k3)
            X = X + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t = t0 + (i + 1) * dt
    return X


def rk4_integrate(vf, t0, x0, tau, steps, safety_box=None):
    """Integrate ``vf`` from ``(t0, x0)`` over ``tau`` with ``steps`` RK4 steps.

    Returns an :class:`Endpoint`; overflow, NaN or leaving ``safety_box``
    (a ``(lower, upper)`` pair) set ``escaped`` instead of raising.
    """
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    X = rk4_batch(vf.rhs, t0, x0[None, :], tau, steps)[0]
    escaped = not np.all(np.isfinite(X))
    if safety_box is not None and not escaped:
        lo, hi = (np.asarray(b, dtype=float) for b in safety_box)
        escaped = bool(np.any(X < lo) or np.any(X > hi))
    return Endpoint(X, escaped)
