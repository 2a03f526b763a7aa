"""Exact cubical homological algebra over F2, Q and (ranks only) Z."""
from .chains import (
    ExactnessReport,
    GradedHomology,
    GradedMap,
    euler_characteristic,
    exactness_check,
    identity_map,
    induced_map,
    inclusion_induced_map,
    relative_homology,
    snake_connecting,
    zero_map,
)
from .cubes import CubicalSet, ElementaryCube, boundary_matrix, closure, faces
from .smith import invariant_factors, smith_normal_form

__all__ = [
    "CubicalSet",
    "ElementaryCube",
    "ExactnessReport",
    "GradedHomology",
    "GradedMap",
    "boundary_matrix",
    "closure",
    "euler_characteristic",
    "exactness_check",
    "faces",
    "identity_map",
    "induced_map",
    "inclusion_induced_map",
    "invariant_factors",
    "relative_homology",
    "smith_normal_form",
    "snake_connecting",
    "zero_map",
]
