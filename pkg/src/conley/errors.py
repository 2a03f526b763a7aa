"""Exception hierarchy shared by the pipeline stages."""


class ConleyError(Exception):
    """Base class for all errors raised by :mod:`conley`."""

    code = "E_INTERNAL"


class PreconditionError(ConleyError, ValueError):
    code = "E_PRECONDITION"


class UnsupportedRing(ConleyError):
    code = "E_RING"


class SizeLimitExceeded(ConleyError):
    code = "E_SIZE"


class IrregularConstruction(ConleyError):
    """A constructed pair or triple failed its independent verification.

    Usually means the grid or the time step is too coarse.
    """

    code = "E_IRREGULAR"

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NonIsomorphicInclusion(ConleyError):
    """A slice does not include isomorphically into its block."""

    code = "E_NONISO"

    def __init__(self, message, degree=None, defect=None):
        super().__init__(message)
        self.degree = degree
        self.defect = defect


class NotStabilized(ConleyError):
    code = "E_NOTSTAB"

    def __init__(self, message, rank_history=()):
        super().__init__(message)
        self.rank_history = list(rank_history)


class NoConnection(ConleyError):
    code = "E_NOCONN"


class NotIsolating(ConleyError):
    code = "E_NOTISOLATING"


class ExactnessFailure(ConleyError):
    """The assembled long exact sequence is not exact (discretization artifact)."""

    code = "E_EXACTNESS"


class ConfigError(ConleyError):
    code = "E_CONFIG"

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
