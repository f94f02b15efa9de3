"""Small deterministic scenes shared by the test modules."""
import numpy as np

from src.geometry import BoundingBox, Segment
from src.spatial import GaussianCloud, Octree, build

# three pairwise-distant, mutually perpendicular edges
SEPARATED_EDGES = [
    Segment((0.0, 0.0, 0.0), (1.0, 0.0, 0.0)),
    Segment((0.0, 1.0, 0.0), (0.0, 1.0, 1.0)),
    Segment((1.0, 0.0, 1.0), (1.0, 1.0, 1.0)),
]


def line_points(
    s: Segment, per_meter: float = 1000.0, offset=(0.0, 0.0, 0.0), t0: float = 0.0, t1: float = 1.0
) -> np.ndarray:
    """Evenly spaced points on the sub-range ``[t0, t1]`` of ``s``, shifted by ``offset``."""
    count = int(round(per_meter * s.length * (t1 - t0))) + 1
    t = np.linspace(t0, t1, count)
    return s.start + t[:, None] * s.vector + np.asarray(offset, dtype=np.float64)


def cloud_of(*chunks: np.ndarray) -> GaussianCloud:
    return GaussianCloud(np.concatenate(chunks) if chunks else np.empty((0, 3)))


def wide_box(lo: float = -1.0, hi: float = 2.0) -> BoundingBox:
    return BoundingBox((lo, lo, lo), (hi, hi, hi))


def tree_of(cloud: GaussianCloud, box: BoundingBox | None = None, depth: int = 10) -> Octree:
    return build(cloud, max_depth=depth, seed_bbox=box or wide_box())
