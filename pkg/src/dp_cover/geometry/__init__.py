"""Exact dual-plane geometry: rational helpers, arrangements, face sampling."""

from .arrangement import (
    Arrangement,
    DualLine,
    Face,
    build_arrangement,
    dual_lines,
    line_crossings,
    min_face_area_bound,
    min_vertex_separation,
    pack_mask_words,
    popcount,
    vertex_separation_bound,
)
from .exact import Point, box_polygon, clip_polygon, polygon_area, vertex_average
from .sampling import uniform_point_in_face, uniform_point_in_triangle
from .sign_oracle import face_sign_oracle


def arrangement_to_dict(arr: Arrangement) -> dict:
    """JSON-ready dump of faces: vertices as [num, den] pairs, area, hex mask."""
    return arr.to_dict()


__all__ = [
    "Arrangement",
    "DualLine",
    "Face",
    "Point",
    "arrangement_to_dict",
    "box_polygon",
    "build_arrangement",
    "clip_polygon",
    "dual_lines",
    "face_sign_oracle",
    "line_crossings",
    "min_face_area_bound",
    "min_vertex_separation",
    "pack_mask_words",
    "polygon_area",
    "popcount",
    "uniform_point_in_face",
    "uniform_point_in_triangle",
    "vertex_average",
    "vertex_separation_bound",
]
