"""
3D geometry primitives and exact segment/point/cylinder math.
"""
from .ops import (
    OVERLAP_SEMANTICS,
    closest_points,
    cylinder_contains,
    cylinder_contains_many,
    line_distances,
    node_cylinder_intersects,
    overlap,
    perpendicular_offset,
    perpendicular_offsets,
    point_segment_distance,
    point_segment_distances,
)
from .primitives import (
    MIN_SEGMENT_LENGTH,
    BoundingBox,
    Cylinder,
    DegenerateSegmentError,
    Point3,
    Segment,
    as_point,
    segments_to_array,
)

__all__ = [
    "MIN_SEGMENT_LENGTH",
    "OVERLAP_SEMANTICS",
    "BoundingBox",
    "Cylinder",
    "DegenerateSegmentError",
    "Point3",
    "Segment",
    "as_point",
    "closest_points",
    "cylinder_contains",
    "cylinder_contains_many",
    "line_distances",
    "node_cylinder_intersects",
    "overlap",
    "perpendicular_offset",
    "perpendicular_offsets",
    "point_segment_distance",
    "point_segment_distances",
    "segments_to_array",
]
