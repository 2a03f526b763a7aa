"""Nonautonomous ODE scenarios turned into combinatorial multivalued maps."""
from .enclosure import (
    SliceMap,
    TransitionGraph,
    build_transition_graph,
    outer_approximation,
    thread_cap,
)
from .forcing import (
    ForcingSpec,
    f_dot_h,
    h_eval,
    metric_d,
    metric_d_unif,
    seminorm_delta,
    sinusoid,
    t_n,
)
from .systems import CATALOG, Endpoint, Grid, VectorFieldSpec, rk4_batch, rk4_integrate

__all__ = [
    "CATALOG",
    "Endpoint",
    "ForcingSpec",
    "Grid",
    "SliceMap",
    "TransitionGraph",
    "VectorFieldSpec",
    "build_transition_graph",
    "f_dot_h",
    "h_eval",
    "metric_d",
    "metric_d_unif",
    "outer_approximation",
    "rk4_batch",
    "rk4_integrate",
    "seminorm_delta",
    "sinusoid",
    "t_n",
    "thread_cap",
]
