"""
Core 3D geometric types: points, segments, capped cylinders and axis-aligned boxes.

Points are plain ``(x, y, z)`` tuples in meters at the API boundary and ``float64``
numpy arrays inside vectorized code.
"""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

Point3 = tuple[float, float, float]
FloatArray = NDArray[np.float64]

MIN_SEGMENT_LENGTH = 1e-9


class DegenerateSegmentError(ValueError):
    """Raised when a segment is shorter than MIN_SEGMENT_LENGTH or has non-finite endpoints."""


def as_point(value: ArrayLike) -> Point3:
    """Coerce a 3-vector to a tuple of finite floats."""
    arr = np.asarray(value, dtype=np.float64).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"expected 3 coordinates, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite coordinate in {arr.tolist()}")
    return (float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class Segment:
    """Directed 3D line segment from ``a`` to ``b``."""

    a: Point3
    b: Point3

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "a", as_point(self.a))
            object.__setattr__(self, "b", as_point(self.b))
        except ValueError as exc:
            raise DegenerateSegmentError(str(exc)) from exc
        if self.length < MIN_SEGMENT_LENGTH:
            raise DegenerateSegmentError(
                f"segment length {self.length:.3g} m is below {MIN_SEGMENT_LENGTH:g} m"
            )

    @classmethod
    def from_arrays(cls, a: ArrayLike, b: ArrayLike) -> "Segment":
        return cls(as_point(a), as_point(b))

    @cached_property
    def start(self) -> FloatArray:
        return np.array(self.a, dtype=np.float64)

    @cached_property
    def end(self) -> FloatArray:
        return np.array(self.b, dtype=np.float64)

    @cached_property
    def vector(self) -> FloatArray:
        return self.end - self.start

    @cached_property
    def length(self) -> float:
        return float(np.linalg.norm(np.subtract(self.b, self.a)))

    @cached_property
    def direction(self) -> FloatArray:
        return self.vector / self.length

    @cached_property
    def midpoint(self) -> FloatArray:
        return (self.start + self.end) / 2.0

    def point_at(self, t: float) -> FloatArray:
        """Point on the axis line at parameter ``t`` (0 at ``a``, 1 at ``b``)."""
        return self.start + t * self.vector

    def sub_segment(self, t0: float, t1: float) -> "Segment":
        return Segment.from_arrays(self.point_at(t0), self.point_at(t1))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def translated(self, offset: ArrayLike) -> "Segment":
        t = np.asarray(offset, dtype=np.float64)
        return Segment.from_arrays(self.start + t, self.end + t)

    def as_row(self) -> tuple[float, float, float, float, float, float]:
        return (*self.a, *self.b)


@dataclass(frozen=True)
class Cylinder:
    """Capped cylinder around ``axis``; membership is inclusive on the wall and the caps."""

    axis: Segment
    radius: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise ValueError(f"cylinder radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box given by its min and max corners."""

    lo: Point3
    hi: Point3

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", as_point(self.lo))
        object.__setattr__(self, "hi", as_point(self.hi))

    @classmethod
    def of_points(cls, points: ArrayLike) -> "BoundingBox | None":
        """Tight box around ``points``; ``None`` for an empty set."""
        arr = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if arr.shape[0] == 0:
            return None
        return cls(as_point(arr.min(axis=0)), as_point(arr.max(axis=0)))

    @classmethod
    def of_segments(cls, segments: Iterable[Segment], padding: float = 0.0) -> "BoundingBox | None":
        """Box spanned by segment endpoints, grown by ``padding`` on every side."""
        rows = [s.as_row() for s in segments]
        if not rows:
            return None
        ends = np.asarray(rows, dtype=np.float64).reshape(-1, 3)
        return cls(as_point(ends.min(axis=0) - padding), as_point(ends.max(axis=0) + padding))

    @property
    def extent(self) -> FloatArray:
        return np.subtract(self.hi, self.lo)

    @property
    def center(self) -> FloatArray:
        return (np.asarray(self.lo) + np.asarray(self.hi)) / 2.0

    @property
    def is_degenerate(self) -> bool:
        return bool(np.any(self.extent <= 0.0))

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        """Inclusive membership mask for an ``(n, 3)`` array."""
        arr = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return np.all((arr >= np.asarray(self.lo)) & (arr <= np.asarray(self.hi)), axis=1)


def segments_to_array(segments: Sequence[Segment]) -> FloatArray:
    """Stack segments into an ``(n, 6)`` array of ``ax ay az bx by bz`` rows."""
    if not segments:
        return np.empty((0, 6), dtype=np.float64)
    return np.asarray([s.as_row() for s in segments], dtype=np.float64)
