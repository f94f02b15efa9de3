"""
Evaluation of segment sets against Gaussian centers.
"""
from .coverage import Coverage, SegmentStats, stats_from_distances, stats_from_points
from .metrics import (
    EvalReport,
    assemble_report,
    compare_reports,
    evaluate,
    length_ratio,
    radius_sweep,
    score,
)

__all__ = [
    "Coverage",
    "EvalReport",
    "SegmentStats",
    "assemble_report",
    "compare_reports",
    "evaluate",
    "length_ratio",
    "radius_sweep",
    "score",
    "stats_from_distances",
    "stats_from_points",
]
