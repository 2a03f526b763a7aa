"""Time-dependent forcing terms, the time embedding ``h`` and sampled metrics
on the space of forcings."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import PreconditionError

FORCING_KINDS = ("none", "sinusoid", "h_embedded")

#: Number of seminorms summed in :func:`metric_d`; the neglected tail is < 2**-40.
METRIC_TERMS = 40
SEMINORM_POINTS = 2001
U_POINTS = 201
UNIF_BOUND = 100.0
UNIF_POINTS = 20001


def h_eval(t):
    """``(t + 1) sin(ln(t + 1))`` for ``t > 0`` and ``0`` otherwise (vectorized)."""
    t = np.asarray(t, dtype=float)
    pos = t > 0
    safe = np.where(pos, t, 0.0)
    out = np.where(pos, (safe + 1.0) * np.sin(np.log1p(safe)), 0.0)
    return out if out.ndim else float(out)


def t_n(n):
    """Times ``e^{2 pi n} - 1`` at which ``h`` returns to zero."""
    return float(np.expm1(2.0 * np.pi * n))


@dataclass(frozen=True)
class ForcingSpec:
    """Scalar forcing ``g(t)`` added to every component of a vector field.

    ``amplitude`` is in state units per time unit, ``frequency`` in radians
    per time unit.
    """

    kind: str = "none"
    amplitude: float = 0.0
    frequency: float = 1.0
    base: Optional["ForcingSpec"] = None

    def __post_init__(self):
        if self.kind not in FORCING_KINDS:
            raise PreconditionError(f"unknown forcing kind {self.kind!r}")
        if self.amplitude < 0:
            raise PreconditionError("forcing amplitude must be nonnegative")
        if self.kind == "h_embedded":
            if self.base is None:
                raise PreconditionError("h_embedded forcing needs a base forcing")
            if self.base.kind == "h_embedded":
                raise PreconditionError("forcing is already h-embedded")
        elif self.base is not None:
            raise PreconditionError(f"{self.kind} forcing takes no base")

    @property
    def autonomous(self):
        if self.kind == "h_embedded":
            return self.base.autonomous
        return self.kind == "none" or self.amplitude == 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "none":
            return np.zeros_like(t)
        if self.kind == "sinusoid":
            return self.amplitude * np.sin(self.frequency * t)
        return self.base(h_eval(t))

    def shifted(self, s):
        """The translate ``t -> g(t + s)``."""
        return lambda t: self(np.asarray(t, dtype=float) + s)

    def hull_samples(self, shifts):
        """Translates sampling the positive hull of this forcing."""
        return [self.shifted(s) for s in shifts if s >= 0]

    def to_dict(self):
        d = {"kind": self.kind, "amplitude": self.amplitude, "frequency": self.frequency}
        if self.base is not None:
            d["base"] = self.base.to_dict()
        return d


def sinusoid(amplitude, frequency=1.0):
    return ForcingSpec("sinusoid", float(amplitude), float(frequency))


def f_dot_h(forcing):
    """Compose a forcing with the time embedding: ``t -> g(h(t))``."""
    if forcing.kind == "h_embedded":
        raise PreconditionError("forcing is already h-embedded")
    return ForcingSpec("h_embedded", forcing.amplitude, forcing.frequency, base=forcing)


def _difference_samples(g1, g2, bound, points, u_dependent):
    t = np.linspace(-bound, bound, points)
    if u_dependent:
        u = np.linspace(-bound, bound, U_POINTS)
        tt, uu = np.meshgrid(t, u, indexing="ij")
        return np.asarray(g1(tt, uu)) - np.asarray(g2(tt, uu))
    return np.broadcast_to(np.asarray(g1(t), dtype=float) - np.asarray(g2(t), dtype=float), t.shape)


def seminorm_delta(n, g1, g2, u_dependent=False, points=SEMINORM_POINTS):
    """Sampled ``sup |g1 - g2|`` over ``|t| <= n`` (and ``|u| <= n``).

    ``g1`` and ``g2`` are vectorized callables of ``t`` (or of ``(t, u)``
    when ``u_dependent``). The value is a lower bound for the true supremum.
    """
    if n < 1:
        raise PreconditionError("seminorm index must be >= 1")
    diff = _difference_samples(g1, g2, float(n), points, u_dependent)
    return float(np.max(np.abs(diff)))


def metric_d(g1, g2, u_dependent=False, terms=METRIC_TERMS):
    """Truncated metric ``sum_n 2^-n delta_n / (1 + delta_n)``, ``n <= terms``."""
    total = 0.0
    for n in range(1, terms + 1):
        d = seminorm_delta(n, g1, g2, u_dependent)
        total += 2.0 ** -n * d / (1.0 + d)
    return total


def metric_d_unif(g1, g2, u_dependent=False, bound=UNIF_BOUND, points=UNIF_POINTS):
    """Sampled uniform distance on ``|t|, |u| <= bound`` (a lower bound)."""
    diff = _difference_samples(g1, g2, bound, points, u_dependent)
    m = float(np.max(np.abs(diff)))
    return m if np.isfinite(m) else float("inf")
