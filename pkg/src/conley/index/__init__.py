"""Nonautonomous Conley index: direct limits, attractor-repeller sequences
and connecting orbits."""
from .connection import (
    CONNECTED,
    NOT_CONNECTED,
    ConnectednessVerdict,
    ConnectionReport,
    PathWitness,
    SweepRow,
    analyze_connection,
    connection_witness,
    orbit_detector,
    perturbation_sweep,
    uniform_connectedness,
)
from .limit import (
    BlockComplex,
    ConleyIndexResult,
    SliceHomologySystem,
    block_complex,
    conley_index,
    direct_limit,
    slice_homology_system,
    slice_inclusion_map,
    slice_pair,
    slice_pair_homology,
    transition_map,
)
from .sequence import LongExactSequenceData, connecting_homomorphism, les_of_triple

__all__ = [
    "CONNECTED",
    "NOT_CONNECTED",
    "BlockComplex",
    "ConleyIndexResult",
    "ConnectednessVerdict",
    "ConnectionReport",
    "LongExactSequenceData",
    "PathWitness",
    "SliceHomologySystem",
    "SweepRow",
    "analyze_connection",
    "block_complex",
    "conley_index",
    "connecting_homomorphism",
    "connection_witness",
    "direct_limit",
    "les_of_triple",
    "orbit_detector",
    "perturbation_sweep",
    "slice_homology_system",
    "slice_inclusion_map",
    "slice_pair",
    "slice_pair_homology",
    "transition_map",
    "uniform_connectedness",
]
