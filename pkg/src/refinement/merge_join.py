"""
Duplicate merging and discontinuity joining for a pair of segments of one cluster.

Both operations are gated on the point density of the gap between the pair and keep a
candidate only when it does not worsen R = E_rms / N.
"""
import math
from dataclasses import dataclass
from itertools import product
from typing import Literal

import numpy as np

from src.config import PipelineConfig
from src.geometry import MIN_SEGMENT_LENGTH, Segment, closest_points, perpendicular_offset
from src.refinement.stats import segment_stats
from src.spatial import Octree

Decision = Literal["merged", "kept_longer", "joined", "kept_both"]


@dataclass(frozen=True)
class PairOutcome:
    decision: Decision
    segments: tuple[Segment, ...]

    @property
    def changed(self) -> bool:
        return self.decision != "kept_both"


def gap_window(p: np.ndarray, q: np.ndarray, cfg: PipelineConfig) -> Segment | None:
    """Axis of the gap cylinder: ``p -> q``, stretched about its midpoint to the working radius.

    ``None`` when the two points coincide.
    """
    length = float(np.linalg.norm(q - p))
    if length < MIN_SEGMENT_LENGTH:
        return None
    if length >= cfg.working_radius:
        return Segment.from_arrays(p, q)
    mid = (p + q) / 2.0
    half = (q - p) * (cfg.working_radius / (2.0 * length))
    return Segment.from_arrays(mid - half, mid + half)


def gap_is_dense(
    p: np.ndarray, q: np.ndarray, tree: Octree, cfg: PipelineConfig, theta: float
) -> bool:
    """Density of the gap cylinder against ``factor * theta``.

    Coincident points always pass. A gap shorter than the working radius is measured over a
    window of that length, so near-duplicates a millimeter apart see the points around them.
    """
    window = gap_window(p, q, cfg)
    if window is None:
        return True
    density = tree.query_segment(window, cfg.working_radius).size / window.length
    return density >= cfg.merge_gap_density_factor * theta


def merge_pair(
    longer: Segment, shorter: Segment, tree: Octree, cfg: PipelineConfig, theta: float
) -> PairOutcome:
    """Shift ``longer`` toward ``shorter`` by their length share and keep the better of the two."""
    p, q = closest_points(longer, shorter)
    if not gap_is_dense(p, q, tree, cfg, theta):
        return PairOutcome("kept_both", (longer, shorter))

    delta = perpendicular_offset(shorter.midpoint, longer)
    share = shorter.length / (shorter.length + longer.length)
    candidate = longer.translated(share * delta)
    r = cfg.working_radius
    if segment_stats(candidate, tree, r).ratio_or_inf < segment_stats(longer, tree, r).ratio_or_inf:
        return PairOutcome("merged", (candidate,))
    return PairOutcome("kept_longer", (longer,))


def _endpoint_pairs(si: Segment, sj: Segment) -> list[tuple[float, np.ndarray, np.ndarray]]:
    return [
        (float(np.linalg.norm(p - q)), p, q)
        for p, q in product((si.start, si.end), (sj.start, sj.end))
    ]


def join_pair(
    si: Segment, sj: Segment, tree: Octree, cfg: PipelineConfig, theta: float
) -> PairOutcome:
    """Replace both by the segment spanning their farthest endpoints when R does not worsen."""
    pairs = _endpoint_pairs(si, sj)
    _, near_p, near_q = min(pairs, key=lambda item: item[0])
    if not gap_is_dense(near_p, near_q, tree, cfg, theta):
        return PairOutcome("kept_both", (si, sj))

    far_len, far_p, far_q = max(pairs, key=lambda item: item[0])
    if far_len < MIN_SEGMENT_LENGTH:
        return PairOutcome("kept_both", (si, sj))
    candidate = Segment.from_arrays(far_p, far_q)
    r = cfg.working_radius
    best = min(
        segment_stats(si, tree, r).ratio_or_inf,
        segment_stats(sj, tree, r).ratio_or_inf,
    )
    candidate_ratio = segment_stats(candidate, tree, r).ratio_or_inf
    if candidate_ratio != math.inf and candidate_ratio <= best:
        return PairOutcome("joined", (candidate,))
    return PairOutcome("kept_both", (si, sj))
