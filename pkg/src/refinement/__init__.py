"""
Refinement stages for reconstructed 3D line segments and the pipeline that chains them.
"""
from .clustering import ClusterUniverse, cluster, sorted_edges
from .crop import CropOutcome, crop_segment, crop_segment_detailed, find_boundary, probe_length
from .merge_join import PairOutcome, gap_is_dense, gap_window, join_pair, merge_pair
from .outliers import outlier_threshold, remove_outliers
from .pipeline import RefinementResult, build_scene_tree, refine, resolve_cluster
from .report import RefinementReport, StageRecord
from .similarity import similarity, similarity_matrix
from .stats import SegmentStats, segment_stats, window_density
from .translate import translate_segment, translation_vector

__all__ = [
    "ClusterUniverse",
    "CropOutcome",
    "PairOutcome",
    "RefinementReport",
    "RefinementResult",
    "SegmentStats",
    "StageRecord",
    "build_scene_tree",
    "cluster",
    "crop_segment",
    "crop_segment_detailed",
    "find_boundary",
    "gap_is_dense",
    "gap_window",
    "join_pair",
    "merge_pair",
    "outlier_threshold",
    "probe_length",
    "refine",
    "remove_outliers",
    "resolve_cluster",
    "segment_stats",
    "similarity",
    "similarity_matrix",
    "sorted_edges",
    "translate_segment",
    "translation_vector",
    "window_density",
]
