"""Position-bias correction by least-squares translation."""
import numpy as np

from src.config import PipelineConfig
from src.geometry import Segment, perpendicular_offsets
from src.spatial import Octree


def translation_vector(s: Segment, points: np.ndarray) -> np.ndarray:
    """Mean perpendicular offset of ``points``: the least-squares pure translation."""
    if points.shape[0] == 0:
        return np.zeros(3)
    return perpendicular_offsets(points, s).mean(axis=0)


def translate_segment(s: Segment, tree: Octree, cfg: PipelineConfig) -> Segment:
    """Shift ``s`` rigidly onto the centroid of its covered points, orthogonally to the axis."""
    covered = tree.points(tree.query_segment(s, cfg.working_radius))
    if covered.shape[0] == 0:
        return s
    return s.translated(translation_vector(s, covered))
