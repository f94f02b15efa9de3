"""
Synthetic wireframe scenes: Gaussian centers concentrated along known edges.
"""
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.formats import load_ply, load_segments, save_ply, save_segments
from src.geometry import BoundingBox, Segment
from src.spatial import GaussianCloud


@dataclass(frozen=True)
class SceneParams:
    points_per_meter: float = 500.0
    noise_sigma: float = 0.005
    # share of all points drawn uniformly in the padded edge box
    background_fraction: float = 0.0
    background_padding: float = 0.1

    def validate(self) -> "SceneParams":
        if self.points_per_meter < 0:
            raise ValueError("points_per_meter must be >= 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0.0 <= self.background_fraction < 1.0:
            raise ValueError("background_fraction must be in [0, 1)")
        if self.background_padding < 0:
            raise ValueError("background_padding must be >= 0")
        return self


@dataclass(frozen=True, eq=False)
class SyntheticScene:
    ground_truth_edges: tuple[Segment, ...]
    cloud: GaussianCloud
    noise_sigma: float
    points_per_meter: float
    background_fraction: float
    rng_seed: int


def cube_wireframe(size: float = 1.0, origin: Sequence[float] = (0.0, 0.0, 0.0)) -> list[Segment]:
    """The 12 edges of an axis-aligned cube."""
    o = np.asarray(origin, dtype=np.float64)
    corners = [o + size * np.array([x, y, z], dtype=np.float64)
               for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    edges = []
    for i, ci in enumerate(corners):
        for j in range(i + 1, len(corners)):
            # corners differing in exactly one coordinate
            if np.count_nonzero(ci != corners[j]) == 1:
                edges.append(Segment.from_arrays(ci, corners[j]))
    return edges


def sample_edge(edge: Segment, count: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    t = rng.uniform(0.0, 1.0, size=count)
    points = edge.start + t[:, None] * edge.vector
    if sigma > 0:
        points = points + rng.normal(0.0, sigma, size=(count, 3))
    return points


def generate_scene(
    edges: Sequence[Segment], params: SceneParams | None = None, seed: int = 0
) -> SyntheticScene:
    """Sample ``points_per_meter`` jittered points along every edge, plus uniform background."""
    params = (params or SceneParams()).validate()
    rng = np.random.default_rng(seed)
    chunks = []
    for edge in edges:
        count = int(round(params.points_per_meter * edge.length))
        if count:
            chunks.append(sample_edge(edge, count, params.noise_sigma, rng))
    on_edges = sum(c.shape[0] for c in chunks)

    box = BoundingBox.of_segments(edges, params.background_padding)
    if params.background_fraction > 0 and box is not None:
        extra = int(round(on_edges * params.background_fraction / (1.0 - params.background_fraction)))
        chunks.append(rng.uniform(np.asarray(box.lo), np.asarray(box.hi), size=(extra, 3)))

    points = np.concatenate(chunks) if chunks else np.empty((0, 3))
    return SyntheticScene(
        ground_truth_edges=tuple(edges),
        cloud=GaussianCloud(points),
        noise_sigma=params.noise_sigma,
        points_per_meter=params.points_per_meter,
        background_fraction=params.background_fraction,
        rng_seed=seed,
    )


def save_scene(scene: SyntheticScene, directory: str | Path) -> dict[str, Path]:
    out = Path(directory)
    return {
        "cloud": save_ply(scene.cloud, out / "cloud.ply"),
        "ground_truth": save_segments(scene.ground_truth_edges, out / "ground_truth.txt"),
    }


def load_scene(directory: str | Path) -> tuple[GaussianCloud, list[Segment]]:
    base = Path(directory)
    return load_ply(base / "cloud.ply"), load_segments(base / "ground_truth.txt")
