"""Exact convex polytopes: representations, conversions, projections and
volumes."""

from .hrep import Equation, HRep, Inequality, InfeasibleRegion, RegionSet, UnboundedRegion, VRep
from .ops import (
    affine_parameterization,
    complement_project,
    dimension,
    eliminate,
    h_to_v,
    hrep_subset,
    is_empty,
    minimize_h,
    minimize_v,
    region_complement,
    region_equal,
    region_intersect,
    region_minimize,
    region_subset,
    v_to_h,
    vertex_facet_incidence,
)
from .volume import region_volume, triangulate, volume

__all__ = [
    "Equation",
    "HRep",
    "Inequality",
    "InfeasibleRegion",
    "RegionSet",
    "UnboundedRegion",
    "VRep",
    "affine_parameterization",
    "complement_project",
    "dimension",
    "eliminate",
    "h_to_v",
    "hrep_subset",
    "is_empty",
    "minimize_h",
    "minimize_v",
    "region_complement",
    "region_equal",
    "region_intersect",
    "region_minimize",
    "region_subset",
    "region_volume",
    "triangulate",
    "v_to_h",
    "vertex_facet_incidence",
    "volume",
]
