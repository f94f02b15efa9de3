"""Exact point/segment/cylinder mathematics, scalar and vectorized."""
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.geometry.primitives import BoundingBox, Cylinder, FloatArray, Segment

OverlapSemantics = Literal["conjunction", "paper-union"]
OVERLAP_SEMANTICS: tuple[str, ...] = ("conjunction", "paper-union")


def _as_points(points: ArrayLike) -> FloatArray:
    return np.asarray(points, dtype=np.float64).reshape(-1, 3)


def _row_dot(rows: FloatArray, v: ArrayLike) -> FloatArray:
    """Row-wise dot product; each row is rounded the same way whatever the array size."""
    w = np.broadcast_to(np.asarray(v, dtype=np.float64), rows.shape)
    return rows[:, 0] * w[:, 0] + rows[:, 1] * w[:, 1] + rows[:, 2] * w[:, 2]


def axis_parameters(points: ArrayLike, s: Segment) -> FloatArray:
    """Projection parameter ``t`` of each point on the axis line (0 at ``a``, 1 at ``b``)."""
    rel = _as_points(points) - s.start
    return _row_dot(rel, s.vector) / (s.length * s.length)


def perpendicular_offsets(points: ArrayLike, s: Segment) -> FloatArray:
    """Displacement from the axis line to each point with the axial component removed."""
    rel = _as_points(points) - s.start
    d = s.direction
    return rel - np.outer(_row_dot(rel, d), d)


def line_distances(points: ArrayLike, s: Segment) -> FloatArray:
    """Distance from each point to the infinite line through ``s``."""
    off = perpendicular_offsets(points, s)
    return np.sqrt(_row_dot(off, off))


def point_segment_distances(points: ArrayLike, s: Segment) -> FloatArray:
    """Distance from each point to the closest point of the closed segment."""
    pts = _as_points(points)
    t = np.clip(axis_parameters(pts, s), 0.0, 1.0)
    closest = s.start + np.outer(t, s.vector)
    diff = pts - closest
    return np.sqrt(_row_dot(diff, diff))


def cylinder_contains_many(c: Cylinder, points: ArrayLike) -> NDArray[np.bool_]:
    """Membership mask of the capped cylinder, boundary inclusive."""
    pts = _as_points(points)
    if pts.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    t = axis_parameters(pts, c.axis)
    off = perpendicular_offsets(pts, c.axis)
    radial2 = _row_dot(off, off)
    return (t >= 0.0) & (t <= 1.0) & (radial2 <= c.radius * c.radius)


def point_segment_distance(p: ArrayLike, s: Segment) -> float:
    return float(point_segment_distances(p, s)[0])


def cylinder_contains(c: Cylinder, p: ArrayLike) -> bool:
    return bool(cylinder_contains_many(c, p)[0])


def perpendicular_offset(p: ArrayLike, s: Segment) -> FloatArray:
    return perpendicular_offsets(p, s)[0]


def overlap(longer: Segment, shorter: Segment, semantics: OverlapSemantics = "conjunction") -> bool:
    """Whether an endpoint of ``shorter`` projects axially inside ``longer``.

    ``paper-union`` accepts an endpoint when either half-space test passes, which holds for
    nearly every configuration; it is kept for comparison runs only.
    """
    d = longer.direction
    for p in (shorter.start, shorter.end):
        past_p1 = float((p - longer.start) @ d) > 0.0
        before_p2 = float((p - longer.end) @ d) < 0.0
        if semantics == "paper-union":
            if past_p1 or before_p2:
                return True
        elif past_p1 and before_p2:
            return True
    return False


def closest_points(s1: Segment, s2: Segment) -> tuple[FloatArray, FloatArray]:
    """Closest pair of points between two closed segments."""
    d1, d2 = s1.vector, s2.vector
    r = s1.start - s2.start
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    c = float(d1 @ r)
    b = float(d1 @ d2)
    denom = a * e - b * b
    # parallel axes: any point of s1 works, pin it to s1.start
    s = float(np.clip((b * f - c * e) / denom, 0.0, 1.0)) if denom > 1e-12 * a * e else 0.0
    t = (b * s + f) / e
    if t < 0.0:
        t = 0.0
        s = float(np.clip(-c / a, 0.0, 1.0))
    elif t > 1.0:
        t = 1.0
        s = float(np.clip((b - c) / a, 0.0, 1.0))
    return s1.point_at(s), s2.point_at(t)


def box_segment_distance(box: BoundingBox, s: Segment) -> float:
    """Distance from the box center to the axis segment."""
    return point_segment_distance(box.center, s)


def node_cylinder_intersects(box: BoundingBox, c: Cylinder) -> bool:
    """Conservative box/cylinder test: no false negatives, false positives allowed.

    Every point of the box lies within half a diagonal of its center, and every point of the
    solid cylinder lies within ``radius`` of the axis segment.
    """
    half_diag = float(np.linalg.norm(box.extent)) / 2.0
    return box_segment_distance(box, c.axis) <= c.radius + half_diag
