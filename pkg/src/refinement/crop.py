"""
Overextension removal by binary-search cropping.

Each endpoint is tested on its own: when the tip window is much sparser than the central
window, the sparse/dense boundary is searched between that endpoint and the midpoint, so
a crop never removes more than half of the segment from one side.
"""
from dataclasses import dataclass

from src.config import PipelineConfig
from src.geometry import MIN_SEGMENT_LENGTH, Segment
from src.refinement.stats import window_density
from src.spatial import Octree


@dataclass(frozen=True)
class CropOutcome:
    segment: Segment
    cropped_start: bool = False
    cropped_end: bool = False
    # both ends collapsed onto each other; the outlier stage drops the segment
    flagged: bool = False

    @property
    def cropped(self) -> bool:
        return self.cropped_start or self.cropped_end


def probe_length(s: Segment, interior_density: float, cfg: PipelineConfig) -> float:
    """Length in meters of the centered density probe.

    At least ``crop_probe_min_points`` points are expected inside it on the dense side, and it
    never exceeds the interior window.
    """
    floor = cfg.crop_probe_min_points / interior_density
    window = cfg.crop_window_fraction * s.length
    return min(max(cfg.crop_probe_fraction * s.length, floor), window)


def find_boundary(
    s: Segment, tip: float, threshold: float, tree: Octree, cfg: PipelineConfig
) -> float:
    """Axis parameter of the dense-side bound of the boundary between ``tip`` and the midpoint."""
    sparse, dense = tip, 0.5
    interior = threshold / cfg.crop_density_ratio
    half_probe = probe_length(s, interior, cfg) / (2.0 * s.length)
    for _ in range(cfg.crop_max_iters):
        if abs(sparse - dense) * s.length < cfg.crop_min_interval:
            break
        mid = (sparse + dense) / 2.0
        density = window_density(s, mid - half_probe, mid + half_probe, tree, cfg.working_radius)
        if density >= threshold:
            dense = mid
        else:
            sparse = mid
    return dense


def crop_segment_detailed(s: Segment, tree: Octree, cfg: PipelineConfig) -> CropOutcome:
    f = cfg.crop_window_fraction
    r = cfg.working_radius
    interior = window_density(s, 0.5 - f / 2.0, 0.5 + f / 2.0, tree, r)
    if interior == 0.0:
        return CropOutcome(s)
    threshold = cfg.crop_density_ratio * interior

    t_start, t_end = 0.0, 1.0
    if window_density(s, 0.0, f, tree, r) < threshold:
        t_start = find_boundary(s, 0.0, threshold, tree, cfg)
    if window_density(s, 1.0 - f, 1.0, tree, r) < threshold:
        t_end = find_boundary(s, 1.0, threshold, tree, cfg)

    cropped_start, cropped_end = t_start > 0.0, t_end < 1.0
    if not (cropped_start or cropped_end):
        return CropOutcome(s)
    if (t_end - t_start) * s.length < MIN_SEGMENT_LENGTH:
        return CropOutcome(s, flagged=True)
    return CropOutcome(s.sub_segment(t_start, t_end), cropped_start, cropped_end)


def crop_segment(s: Segment, tree: Octree, cfg: PipelineConfig) -> Segment:
    return crop_segment_detailed(s, tree, cfg).segment
