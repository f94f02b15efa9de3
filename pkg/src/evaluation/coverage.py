"""Covered point sets and the statistics derived from them."""
import math
from dataclasses import dataclass

import numpy as np

from src.geometry import Segment, point_segment_distances


@dataclass(frozen=True)
class SegmentStats:
    """Covered count N, density N/length (points per meter) and E_rms (meters)."""

    covered_count: int
    density: float
    e_rms: float

    @property
    def ratio(self) -> float | None:
        """R = E_rms / N in meters per point; undefined for an empty cylinder."""
        if self.covered_count == 0:
            return None
        return self.e_rms / self.covered_count

    @property
    def ratio_or_inf(self) -> float:
        r = self.ratio
        return math.inf if r is None else r


def stats_from_distances(s: Segment, distances: np.ndarray) -> SegmentStats:
    n = int(distances.size)
    if n == 0:
        return SegmentStats(0, 0.0, 0.0)
    return SegmentStats(n, n / s.length, float(np.sqrt(np.mean(distances * distances))))


def stats_from_points(s: Segment, points: np.ndarray) -> SegmentStats:
    return stats_from_distances(s, point_segment_distances(points, s))


@dataclass(frozen=True)
class Coverage:
    """Covered cloud indices of one segment and their distances to it."""

    indices: np.ndarray
    distances: np.ndarray

    @classmethod
    def of(cls, s: Segment, indices: np.ndarray, points: np.ndarray) -> "Coverage":
        return cls(indices, point_segment_distances(points, s))

    def stats(self, s: Segment) -> SegmentStats:
        return stats_from_distances(s, self.distances)
