"""Gaussian center point sets."""
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from src.geometry import BoundingBox
from src.geometry.primitives import FloatArray


@dataclass(frozen=True, eq=False)
class GaussianCloud:
    """Centers of a trained Gaussian-splatting model, as an ``(n, 3)`` float64 array."""

    points: FloatArray
    bbox: BoundingBox | None = field(default=None)

    def __post_init__(self) -> None:
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64).reshape(-1, 3))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.bbox is None:
            object.__setattr__(self, "bbox", BoundingBox.of_points(pts))

    @classmethod
    def from_points(cls, points: ArrayLike) -> "GaussianCloud":
        return cls(np.asarray(points, dtype=np.float64))

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def crop(self, box: BoundingBox) -> "GaussianCloud":
        return GaussianCloud(self.points[box.contains(self.points)])

    def downsample(self, fraction: float, seed: int = 0) -> "GaussianCloud":
        """Keep a seeded random subset of about ``fraction`` of the points, original order."""
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"downsample fraction must be in (0, 1], got {fraction}")
        if fraction == 1.0 or len(self) == 0:
            return self
        rng = np.random.default_rng(seed)
        keep = max(1, int(round(fraction * len(self))))
        idx = np.sort(rng.choice(len(self), size=keep, replace=False))
        return GaussianCloud(self.points[idx])
