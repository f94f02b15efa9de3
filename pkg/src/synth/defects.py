"""
Defect injection: turns ground-truth edges into the kind of segment set a multi-view
reconstructor produces (biased, overextended, spurious, duplicated and broken segments).
"""
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.geometry import BoundingBox, Segment, closest_points
from src.synth.manifest import OUTLIER_EDGE, ManifestEntry
from src.utils.logger import get_logger

_log = get_logger("synth")

MAX_OUTLIER_ATTEMPTS = 10_000


@dataclass(frozen=True)
class DefectSpec:
    """Magnitudes of each defect class; zero disables a class. Lengths in meters."""

    position_bias: float = 0.0
    overextension: float = 0.0
    outliers: int = 0
    duplication: int = 0
    duplication_jitter: float = 0.002
    duplication_trim: tuple[float, float] = (0.05, 0.15)
    discontinuity: int = 0
    discontinuity_gap: float = 0.05
    outlier_clearance: float = 0.1
    outlier_length: tuple[float, float] = (0.2, 0.6)

    def validate(self) -> "DefectSpec":
        scalars = {
            "position_bias": self.position_bias,
            "overextension": self.overextension,
            "outliers": self.outliers,
            "duplication": self.duplication,
            "duplication_jitter": self.duplication_jitter,
            "discontinuity": self.discontinuity,
            "discontinuity_gap": self.discontinuity_gap,
            "outlier_clearance": self.outlier_clearance,
        }
        for name, value in scalars.items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        lo, hi = self.duplication_trim
        if not 0.0 <= lo <= hi < 0.5:
            raise ValueError("duplication_trim must satisfy 0 <= lo <= hi < 0.5")
        lo, hi = self.outlier_length
        if not 0.0 < lo <= hi:
            raise ValueError("outlier_length must satisfy 0 < lo <= hi")
        return self

    @property
    def is_empty(self) -> bool:
        return not (
            self.position_bias or self.overextension or self.outliers
            or self.duplication or self.discontinuity
        )


@dataclass(frozen=True)
class InjectedSegments:
    segments: list[Segment]
    manifest: list[ManifestEntry]


def _perpendicular_unit(direction: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    while True:
        v = rng.normal(size=3)
        v -= np.dot(v, direction) * direction
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm


def _split(edge: Segment, splits: int, gap: float) -> list[Segment]:
    """``splits + 1`` evenly spaced pieces separated by ``gap`` meters."""
    if splits == 0:
        return [edge]
    half = min(gap / edge.length, 1.0 / (splits + 1)) / 2.0
    cuts = [k / (splits + 1) for k in range(1, splits + 1)]
    bounds = [0.0, *[x for c in cuts for x in (c - half, c + half)], 1.0]
    return [edge.sub_segment(bounds[2 * k], bounds[2 * k + 1]) for k in range(splits + 1)]


def _duplicate(piece: Segment, spec: DefectSpec, rng: np.random.Generator) -> Segment:
    lo, hi = spec.duplication_trim
    trim = rng.uniform(lo, hi)
    share = rng.uniform(0.0, 1.0)
    copy = piece.sub_segment(trim * share, 1.0 - trim * (1.0 - share))
    if spec.duplication_jitter > 0:
        jitter = rng.normal(0.0, spec.duplication_jitter, size=(2, 3))
        copy = Segment.from_arrays(copy.start + jitter[0], copy.end + jitter[1])
    return copy


def _segment_gap(s1: Segment, s2: Segment) -> float:
    p, q = closest_points(s1, s2)
    return float(np.linalg.norm(p - q))


def plant_outliers(
    edges: Sequence[Segment], spec: DefectSpec, rng: np.random.Generator
) -> list[Segment]:
    """Random segments inside the edge box, each farther than ``outlier_clearance`` from all edges."""
    box = BoundingBox.of_segments(edges)
    if box is None:
        raise ValueError("outliers need at least one edge to place them around")
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    length_lo, length_hi = spec.outlier_length
    placed: list[Segment] = []
    for _ in range(MAX_OUTLIER_ATTEMPTS):
        if len(placed) == spec.outliers:
            return placed
        start = rng.uniform(lo, hi)
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        end = start + rng.uniform(length_lo, length_hi) * direction
        if not box.contains(end[None, :])[0]:
            continue
        candidate = Segment.from_arrays(start, end)
        if all(_segment_gap(candidate, e) > spec.outlier_clearance for e in edges):
            placed.append(candidate)
    if len(placed) < spec.outliers:
        raise RuntimeError(
            f"placed only {len(placed)} of {spec.outliers} outliers with clearance "
            f"{spec.outlier_clearance} m"
        )
    return placed


def inject_defects(
    edges: Sequence[Segment], spec: DefectSpec | None = None, seed: int = 0
) -> InjectedSegments:
    """
    Perturb ``edges`` edge by edge: overextend, split, bias, then duplicate each piece.

    Outliers are appended after all edge-derived segments. The manifest has one entry per
    output segment, in output order.
    """
    spec = (spec or DefectSpec()).validate()
    rng = np.random.default_rng(seed)
    segments: list[Segment] = []
    manifest: list[ManifestEntry] = []

    def emit(s: Segment, edge_id: int, defects: list[str]) -> None:
        manifest.append(ManifestEntry(len(segments), edge_id, tuple(defects)))
        segments.append(s)

    for edge_id, edge in enumerate(edges):
        base = edge
        tags: list[str] = []
        if spec.overextension > 0:
            side = "start" if rng.integers(2) == 0 else "end"
            extra = spec.overextension * edge.length * edge.direction
            if side == "start":
                base = Segment.from_arrays(edge.start - extra, edge.end)
            else:
                base = Segment.from_arrays(edge.start, edge.end + extra)
            tags.append(f"overextension:{side}")
        pieces = _split(base, spec.discontinuity, spec.discontinuity_gap)
        offset = np.zeros(3)
        if spec.position_bias > 0:
            offset = spec.position_bias * _perpendicular_unit(edge.direction, rng)
            tags.append("position_bias")
        for k, piece in enumerate(pieces):
            piece = piece.translated(offset)
            piece_tags = [*tags, f"piece:{k + 1}/{len(pieces)}"] if len(pieces) > 1 else list(tags)
            emit(piece, edge_id, piece_tags)
            for copy in range(spec.duplication):
                emit(_duplicate(piece, spec, rng), edge_id, [*piece_tags, f"duplicate:{copy + 1}"])

    if spec.outliers:
        for outlier in plant_outliers(edges, spec, rng):
            emit(outlier, OUTLIER_EDGE, ["outlier"])

    _log.debug("Injected defects", edges=len(edges), segments=len(segments))
    return InjectedSegments(segments, manifest)
