"""Curvature invariants and sharp curvature-bound checks for submanifolds of
almost contact metric model spaces of pointwise constant phi-sectional
curvature, with an independent finite-difference geometric oracle."""

from .ambient import (
    AmbientStructure,
    ambient_curvature,
    phi_section_curvature,
    standard_structure,
    validate_structure,
)
from .invariants import (
    InducedCurvature,
    KPlane,
    SearchConfig,
    induced_curvature,
    k_ricci,
    ricci,
    theta_k,
)
from .subpoint import (
    Classification,
    PhiSplit,
    SubmanifoldPoint,
    build_point,
    classify,
    mean_curvature,
    phi_split,
    relative_null_space,
    shape_operator,
    sigma_norms,
)

__all__ = [
    "AmbientStructure",
    "Classification",
    "InducedCurvature",
    "KPlane",
    "PhiSplit",
    "SearchConfig",
    "SubmanifoldPoint",
    "ambient_curvature",
    "build_point",
    "classify",
    "induced_curvature",
    "k_ricci",
    "mean_curvature",
    "phi_section_curvature",
    "phi_split",
    "relative_null_space",
    "ricci",
    "shape_operator",
    "sigma_norms",
    "standard_structure",
    "theta_k",
    "validate_structure",
]
