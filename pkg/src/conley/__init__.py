"""Nonautonomous Conley indices of time-discretized ODEs via cubical homology."""

__version__ = "0.1.0"
