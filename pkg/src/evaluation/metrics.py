"""
Scene-level evaluation of a segment set against Gaussian centers.

E_rms pools every covered point once, at its distance to the nearest covering segment,
and is reported in centimeters. R_covered is the covered share of the indexed cloud in
percent. R_L is total length over the natural log of the summed per-segment covered
counts (a point inside two cylinders counts twice). The score combines the three.
"""
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from src.config import EvalConfig
from src.evaluation.coverage import Coverage, SegmentStats
from src.geometry import Segment
from src.spatial import GaussianCloud, Octree
from src.utils.logger import get_logger
from src.utils.parallel import parallel_map

_log = get_logger("metrics")

CM_PER_M = 100.0


@dataclass(frozen=True)
class EvalReport:
    radius: float
    e_rms_cm: float
    r_covered_pct: float
    r_l: float | None
    score: float | None
    per_segment: tuple[SegmentStats, ...]
    covered_total: int
    cloud_total: int
    covered_multiplicity: int
    total_length: float

    def summary(self) -> dict[str, Any]:
        """Metric name -> number; undefined metrics are omitted."""
        out: dict[str, Any] = {
            "radius": self.radius,
            "segments": len(self.per_segment),
            "e_rms_cm": self.e_rms_cm,
            "r_covered_pct": self.r_covered_pct,
            "covered_total": self.covered_total,
            "cloud_total": self.cloud_total,
            "covered_multiplicity": self.covered_multiplicity,
            "total_length": self.total_length,
        }
        if self.r_l is not None:
            out["r_l"] = self.r_l
        if self.score is not None:
            out["score"] = self.score
        return out


def length_ratio(total_length: float, covered_multiplicity: int) -> float | None:
    """R_L; undefined unless the summed covered count exceeds one."""
    if covered_multiplicity <= 1:
        return None
    return total_length / math.log(covered_multiplicity)


def score(r_covered_pct: float, e_rms_cm: float, r_l: float | None, scaler: float) -> float | None:
    """``scaler * R_covered / (ln(1 + E_rms) * ln(1 + R_L))`` when both logs are positive."""
    if r_l is None:
        return None
    log_e = math.log1p(e_rms_cm)
    log_l = math.log1p(r_l)
    if log_e <= 0.0 or log_l <= 0.0:
        return None
    return scaler * r_covered_pct / (log_e * log_l)


def assemble_report(
    segments: Sequence[Segment],
    coverages: Sequence[Coverage],
    cloud_size: int,
    indexed_total: int,
    radius: float,
    scaler: float,
) -> EvalReport:
    """Fold per-segment coverages into the scene metrics."""
    best = np.full(cloud_size, np.inf)
    for cov in coverages:
        if cov.indices.size:
            np.minimum.at(best, cov.indices, cov.distances)
    covered = np.isfinite(best)
    covered_total = int(covered.sum())
    e_rms_m = float(np.sqrt(np.mean(best[covered] ** 2))) if covered_total else 0.0
    r_covered = 100.0 * covered_total / indexed_total if indexed_total else 0.0
    multiplicity = sum(int(cov.indices.size) for cov in coverages)
    total_length = float(sum(s.length for s in segments))
    r_l = length_ratio(total_length, multiplicity)
    e_rms_cm = e_rms_m * CM_PER_M
    return EvalReport(
        radius=radius,
        e_rms_cm=e_rms_cm,
        r_covered_pct=r_covered,
        r_l=r_l,
        score=score(r_covered, e_rms_cm, r_l, scaler),
        per_segment=tuple(cov.stats(s) for s, cov in zip(segments, coverages)),
        covered_total=covered_total,
        cloud_total=indexed_total,
        covered_multiplicity=multiplicity,
        total_length=total_length,
    )


def evaluate(
    segments: Sequence[Segment], cloud: GaussianCloud, tree: Octree, ecfg: EvalConfig
) -> EvalReport:
    if not segments:
        raise ValueError("nothing to evaluate")
    r = ecfg.eval_radius
    coverages = []
    for s in segments:
        idx = tree.query_segment(s, r)
        coverages.append(Coverage.of(s, idx, cloud.points[idx]))
    report = assemble_report(segments, coverages, len(cloud), tree.indexed_count, r, ecfg.score_scaler)
    _log.debug("Evaluated", radius=r, r_covered=report.r_covered_pct, e_rms_cm=report.e_rms_cm)
    return report


def radius_sweep(
    segments: Sequence[Segment],
    cloud: GaussianCloud,
    tree: Octree,
    ecfg: EvalConfig,
    threads: int = 1,
) -> list[tuple[float, EvalReport]]:
    """One report per radius of ``ecfg.radius_sweep``; R_covered must not decrease."""
    radii = list(ecfg.radius_sweep)
    if not radii:
        raise ValueError("radius sweep needs at least one radius")
    reports = parallel_map(
        lambda r: evaluate(segments, cloud, tree, replace(ecfg, eval_radius=r)), radii, threads
    )
    for prev, cur in zip(reports, reports[1:]):
        if cur.r_covered_pct < prev.r_covered_pct:
            raise RuntimeError(
                f"R_covered decreased from {prev.r_covered_pct} at r={prev.radius} "
                f"to {cur.r_covered_pct} at r={cur.radius}"
            )
    return list(zip(radii, reports))


def compare_reports(before: EvalReport, after: EvalReport) -> dict[str, Any]:
    """Metric deltas and the relative score improvement in percent."""
    out: dict[str, Any] = {
        "e_rms_cm_delta": after.e_rms_cm - before.e_rms_cm,
        "r_covered_pct_delta": after.r_covered_pct - before.r_covered_pct,
    }
    if before.r_l is not None and after.r_l is not None:
        out["r_l_delta"] = after.r_l - before.r_l
    if before.score is not None and after.score is not None and before.score > 0:
        out["score_improvement_pct"] = 100.0 * (after.score - before.score) / before.score
    return out
