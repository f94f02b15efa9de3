"""
The refinement pipeline: translate -> crop -> outlier filter -> cluster -> merge/join.

Each stage addresses one defect class of reconstructed segments (position bias,
overextension, outliers, then duplication and discontinuity). The per-segment stages run
on a worker pool over the immutable octree; clustering and merge/join are sequential.
"""
from collections.abc import Sequence
from dataclasses import dataclass

from src.config import EvalConfig, PipelineConfig
from src.evaluation import EvalReport, compare_reports, evaluate
from src.geometry import BoundingBox, Segment, overlap
from src.refinement.clustering import cluster
from src.refinement.crop import crop_segment_detailed
from src.refinement.merge_join import PairOutcome, join_pair, merge_pair
from src.refinement.outliers import outlier_threshold, remove_outliers
from src.refinement.report import RefinementReport
from src.refinement.stats import segment_stats
from src.refinement.translate import translate_segment
from src.spatial import GaussianCloud, Octree, build
from src.utils.logger import get_logger
from src.utils.parallel import parallel_map

_log = get_logger("refine")


@dataclass
class RefinementResult:
    segments: list[Segment]
    report: RefinementReport
    tree: Octree
    before: EvalReport | None = None
    after: EvalReport | None = None


def build_scene_tree(
    segments: Sequence[Segment], cloud: GaussianCloud, cfg: PipelineConfig
) -> Octree:
    """Octree over the cloud restricted to the padded endpoint range of ``segments``."""
    box = BoundingBox.of_segments(segments, cfg.bbox_padding)
    if box is None:
        raise ValueError("no segments to derive a bounding box from")
    return build(cloud, max_depth=cfg.octree_depth, seed_bbox=box, leaf_capacity=cfg.leaf_capacity)


def resolve_cluster(
    group: Sequence[Segment],
    tree: Octree,
    cfg: PipelineConfig,
    theta: float,
    report: RefinementReport,
) -> list[Segment]:
    """Merge or join pairs of one cluster, longest first, until a sweep changes nothing."""
    segs = sorted(group, key=lambda s: -s.length)
    for _ in range(cfg.max_merge_sweeps):
        report.increment("merge_sweeps")
        changed = False
        i = 0
        while i < len(segs):
            j = i + 1
            while j < len(segs):
                longer, shorter = segs[i], segs[j]
                outcome = _process_pair(longer, shorter, tree, cfg, theta)
                if not outcome.changed:
                    j += 1
                    continue
                _log.debug(
                    "Pair resolved",
                    decision=outcome.decision,
                    longer=round(longer.length, 4),
                    shorter=round(shorter.length, 4),
                )
                report.increment("joined" if outcome.decision == "joined" else "merged")
                segs[i] = outcome.segments[0]
                del segs[j]
                changed = True
            i += 1
        segs.sort(key=lambda s: -s.length)
        if not changed:
            break
    return segs


def _process_pair(
    longer: Segment, shorter: Segment, tree: Octree, cfg: PipelineConfig, theta: float
) -> PairOutcome:
    if overlap(longer, shorter, cfg.overlap_semantics):  # type: ignore[arg-type]
        return merge_pair(longer, shorter, tree, cfg, theta)
    return join_pair(longer, shorter, tree, cfg, theta)


def refine(
    segments: Sequence[Segment],
    cloud: GaussianCloud,
    cfg: PipelineConfig,
    eval_cfg: EvalConfig | None = None,
    threads: int = 1,
    tree: Octree | None = None,
) -> RefinementResult:
    """Run every stage; with ``eval_cfg`` the report also carries metrics before and after."""
    if not segments:
        raise ValueError("refine needs at least one segment")
    if len(cloud) == 0:
        raise ValueError("refine needs a non-empty cloud")
    cfg.validate()
    tree = tree if tree is not None else build_scene_tree(segments, cloud, cfg)
    r = cfg.working_radius
    report = RefinementReport(len(segments))
    _log.info("Refinement started", segments=len(segments), indexed_points=tree.indexed_count)

    report.start_stage("translate", len(segments))
    current = parallel_map(lambda s: translate_segment(s, tree, cfg), list(segments), threads)
    report.end_stage(len(current))

    report.start_stage("crop", len(current))
    outcomes = parallel_map(lambda s: crop_segment_detailed(s, tree, cfg), current, threads)
    current = [o.segment for o in outcomes]
    report.increment("cropped", sum(o.cropped for o in outcomes))
    report.increment("crop_flagged", sum(o.flagged for o in outcomes))
    report.end_stage(len(current))

    report.start_stage("outliers", len(current))
    stats = parallel_map(lambda s: segment_stats(s, tree, r), current, threads)
    theta = outlier_threshold(stats, cfg.outlier_scaler)
    report.theta = theta
    # empty cylinders and collapsed crops never survive, even when theta is 0
    candidates = [
        (s, st) for s, st, o in zip(current, stats, outcomes)
        if not o.flagged and st.covered_count > 0
    ]
    survivors = remove_outliers([s for s, _ in candidates], [st for _, st in candidates], theta)
    report.increment("outliers_removed", len(current) - len(survivors))
    current = survivors
    report.end_stage(len(current))
    _log.info("Outlier filter applied", theta=theta, kept=len(current))

    report.start_stage("cluster", len(current))
    refined: list[Segment] = []
    if current:
        universe = cluster(current, cfg.lambda_sim, cfg.cluster_c, cfg.similarity_branch)
        groups = universe.clusters()
        report.counters["clusters"] = len(groups)
        report.end_stage(len(current))

        report.start_stage("merge", len(current))
        for members in groups:
            group = [current[i] for i in members]
            if len(group) > 1:
                group = resolve_cluster(group, tree, cfg, theta, report)
            refined.extend(group)
    else:
        report.end_stage(0)
        report.start_stage("merge", 0)
    report.end_stage(len(refined))

    result = RefinementResult(refined, report, tree)
    if eval_cfg is not None:
        result.before = evaluate(segments, cloud, tree, eval_cfg)
        report.metrics_before = result.before.summary()
        if refined:
            result.after = evaluate(refined, cloud, tree, eval_cfg)
            report.metrics_after = result.after.summary()
            report.comparison = compare_reports(result.before, result.after)
    _log.info("Refinement finished", segments_out=len(refined), **report.counters)
    return result
