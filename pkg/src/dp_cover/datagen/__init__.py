"""Synthetic targets, example distributions and labelled samples."""

from .distributions import (
    Distribution,
    sample_boolean,
    sample_boundary_mixture,
    sample_distribution,
    sample_grid_uniform,
)
from .targets import (
    ConjunctionTarget,
    PolygonTarget,
    TargetConcept,
    convex_hull,
    label_by_target,
    make_target,
    polygon_contains,
    random_conjunction,
    random_convex_polygon,
    random_simple_polygon,
    random_triangle,
    random_union,
    target_from_dict,
    target_to_dict,
)

__all__ = [
    "ConjunctionTarget",
    "Distribution",
    "PolygonTarget",
    "TargetConcept",
    "convex_hull",
    "label_by_target",
    "make_target",
    "polygon_contains",
    "random_conjunction",
    "random_convex_polygon",
    "random_simple_polygon",
    "random_triangle",
    "random_union",
    "sample_boolean",
    "sample_boundary_mixture",
    "sample_distribution",
    "sample_grid_uniform",
    "target_from_dict",
    "target_to_dict",
]
