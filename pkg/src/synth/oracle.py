"""
Linear-scan oracles for the octree and the evaluation metrics.
"""
from collections.abc import Sequence

import numpy as np

from src.config import EvalConfig
from src.evaluation import EvalReport, length_ratio, score, stats_from_distances
from src.evaluation.metrics import CM_PER_M
from src.geometry import BoundingBox, Cylinder, Segment, cylinder_contains_many, point_segment_distances
from src.spatial import GaussianCloud


def brute_force_query(cloud: GaussianCloud, c: Cylinder, bbox: BoundingBox | None = None) -> np.ndarray:
    """Sorted cloud indices inside ``c``, restricted to ``bbox`` when given."""
    inside = cylinder_contains_many(c, cloud.points)
    if bbox is not None:
        inside &= bbox.contains(cloud.points)
    return np.flatnonzero(inside)


def brute_force_evaluate(
    segments: Sequence[Segment],
    cloud: GaussianCloud,
    ecfg: EvalConfig,
    bbox: BoundingBox | None = None,
) -> EvalReport:
    """Same contract as ``evaluate``, from a full distance table instead of octree queries."""
    if not segments:
        raise ValueError("nothing to evaluate")
    r = ecfg.eval_radius
    indexed = bbox.contains(cloud.points) if bbox is not None else np.ones(len(cloud), dtype=bool)
    indexed_total = int(indexed.sum())

    masks = np.empty((len(segments), len(cloud)), dtype=bool)
    distances = np.empty((len(segments), len(cloud)))
    for k, s in enumerate(segments):
        masks[k] = cylinder_contains_many(Cylinder(s, r), cloud.points) & indexed
        distances[k] = point_segment_distances(cloud.points, s)

    nearest = np.where(masks, distances, np.inf).min(axis=0)
    covered = np.isfinite(nearest)
    covered_total = int(covered.sum())
    e_rms_cm = (
        float(np.sqrt(np.mean(nearest[covered] ** 2))) * CM_PER_M if covered_total else 0.0
    )
    r_covered = 100.0 * covered_total / indexed_total if indexed_total else 0.0
    multiplicity = int(masks.sum())
    total_length = float(sum(s.length for s in segments))
    r_l = length_ratio(total_length, multiplicity)
    return EvalReport(
        radius=r,
        e_rms_cm=e_rms_cm,
        r_covered_pct=r_covered,
        r_l=r_l,
        score=score(r_covered, e_rms_cm, r_l, ecfg.score_scaler),
        per_segment=tuple(
            stats_from_distances(s, distances[k][masks[k]]) for k, s in enumerate(segments)
        ),
        covered_total=covered_total,
        cloud_total=indexed_total,
        covered_multiplicity=multiplicity,
        total_length=total_length,
    )
