"""Per-segment coverage statistics over the octree."""
from src.evaluation.coverage import SegmentStats, stats_from_points
from src.geometry import Segment
from src.spatial import Octree

__all__ = ["SegmentStats", "segment_stats", "stats_from_points", "window_density"]


def segment_stats(s: Segment, tree: Octree, r: float) -> SegmentStats:
    """N, density and E_rms of the points inside the capped cylinder of radius ``r``."""
    return stats_from_points(s, tree.points(tree.query_segment(s, r)))


def window_density(s: Segment, t0: float, t1: float, tree: Octree, r: float) -> float:
    """Points per meter inside the cylinder around the axis sub-range ``[t0, t1]``."""
    window = s.sub_segment(t0, t1)
    return tree.query_segment(window, r).size / window.length
