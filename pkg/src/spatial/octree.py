"""
Static octree over Gaussian centers answering exact capped-cylinder range queries.

Points are stored once, in leaf order, in a permutation array; every node owns the
contiguous slice ``[start, stop)`` of that array. Queries prune nodes with the conservative
sphere test of ``node_cylinder_intersects`` and verify each candidate point with
``cylinder_contains_many``.
"""
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from src.geometry import BoundingBox, Cylinder, Segment, cylinder_contains_many
from src.spatial.cloud import GaussianCloud
from src.utils.logger import get_logger

DEFAULT_MAX_DEPTH = 10
DEFAULT_LEAF_CAPACITY = 32

IndexArray = NDArray[np.intp]

_log = get_logger("octree")


@dataclass(frozen=True, eq=False)
class OctreeNode:
    box: BoundingBox
    depth: int
    start: int
    stop: int
    children: tuple["OctreeNode", ...] = ()
    # per-child pruning data, filled for internal nodes
    child_centers: np.ndarray = field(default_factory=lambda: np.empty((0, 3)))
    child_reach: np.ndarray = field(default_factory=lambda: np.empty(0))
    child_counts: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.intp))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def count(self) -> int:
        return self.stop - self.start


def _center_axis_distances(centers: np.ndarray, axis: Segment) -> np.ndarray:
    rel = centers - axis.start
    t = np.clip(rel @ axis.vector / (axis.length * axis.length), 0.0, 1.0)
    return np.linalg.norm(rel - np.outer(t, axis.vector), axis=1)


class Octree:
    """Immutable after construction; safe for concurrent read-only queries."""

    def __init__(
        self,
        cloud: GaussianCloud,
        seed_bbox: BoundingBox,
        max_depth: int = DEFAULT_MAX_DEPTH,
        leaf_capacity: int = DEFAULT_LEAF_CAPACITY,
    ):
        if max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {max_depth}")
        if leaf_capacity < 1:
            raise ValueError(f"leaf_capacity must be >= 1, got {leaf_capacity}")
        if seed_bbox.is_degenerate:
            raise ValueError("degenerate bounding box")
        self.cloud = cloud
        self.bbox = seed_bbox
        self.max_depth = max_depth
        self.leaf_capacity = leaf_capacity

        inside = np.flatnonzero(seed_bbox.contains(cloud.points))
        self.indexed_count = int(inside.size)
        self.dropped_count = len(cloud) - self.indexed_count

        self._slices: list[IndexArray] = []
        self._cursor = 0
        self.root = self._split(inside, np.asarray(seed_bbox.lo), np.asarray(seed_bbox.hi), 0)
        self._order: IndexArray = (
            np.concatenate(self._slices).astype(np.intp) if self._slices
            else np.empty(0, dtype=np.intp)
        )
        self._order.setflags(write=False)
        self._slices = []

    def _split(self, idx: IndexArray, lo: np.ndarray, hi: np.ndarray, depth: int) -> OctreeNode:
        start = self._cursor
        box = BoundingBox(tuple(lo), tuple(hi))
        if depth >= self.max_depth or idx.size <= self.leaf_capacity:
            self._slices.append(idx)
            self._cursor += idx.size
            return OctreeNode(box, depth, start, self._cursor)

        mid = (lo + hi) / 2.0
        upper = self.cloud.points[idx] >= mid
        code = upper[:, 0] * 4 + upper[:, 1] * 2 + upper[:, 2]
        children = []
        for octant in range(8):
            bits = np.array([(octant >> 2) & 1, (octant >> 1) & 1, octant & 1], dtype=bool)
            child_lo = np.where(bits, mid, lo)
            child_hi = np.where(bits, hi, mid)
            children.append(self._split(idx[code == octant], child_lo, child_hi, depth + 1))
        return OctreeNode(
            box,
            depth,
            start,
            self._cursor,
            tuple(children),
            child_centers=np.array([c.box.center for c in children]),
            child_reach=np.array([np.linalg.norm(c.box.extent) / 2.0 for c in children]),
            child_counts=np.array([c.count for c in children], dtype=np.intp),
        )

    def __len__(self) -> int:
        return self.indexed_count

    @property
    def indices(self) -> IndexArray:
        """Cloud indices of every indexed point, sorted."""
        return np.sort(self._order)

    def node_indices(self, node: OctreeNode) -> IndexArray:
        return self._order[node.start:node.stop]

    def iter_nodes(self) -> Iterator[OctreeNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def query_cylinder(self, c: Cylinder) -> IndexArray:
        """Sorted cloud indices of every indexed point inside the capped cylinder."""
        root = self.root
        if root.count == 0:
            return np.empty(0, dtype=np.intp)
        root_reach = np.linalg.norm(root.box.extent) / 2.0
        if _center_axis_distances(root.box.center[None, :], c.axis)[0] > c.radius + root_reach:
            return np.empty(0, dtype=np.intp)

        ranges: list[tuple[int, int]] = []
        stack = [root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                ranges.append((node.start, node.stop))
                continue
            dist = _center_axis_distances(node.child_centers, c.axis)
            keep = (node.child_counts > 0) & (dist <= c.radius + node.child_reach)
            stack.extend(node.children[i] for i in np.flatnonzero(keep))
        if not ranges:
            return np.empty(0, dtype=np.intp)
        candidates = np.concatenate([self._order[s:e] for s, e in ranges])
        hit = candidates[cylinder_contains_many(c, self.cloud.points[candidates])]
        return np.sort(hit)

    def query_segment(self, s: Segment, radius: float) -> IndexArray:
        return self.query_cylinder(Cylinder(s, radius))

    def points(self, indices: IndexArray) -> np.ndarray:
        return self.cloud.points[indices]


def build(
    cloud: GaussianCloud,
    max_depth: int = DEFAULT_MAX_DEPTH,
    seed_bbox: BoundingBox | None = None,
    leaf_capacity: int = DEFAULT_LEAF_CAPACITY,
) -> Octree:
    """Index the points of ``cloud`` inside ``seed_bbox`` (the cloud's own box when omitted)."""
    box = seed_bbox if seed_bbox is not None else cloud.bbox
    if box is None:
        raise ValueError("degenerate bounding box")
    tree = Octree(cloud, box, max_depth=max_depth, leaf_capacity=leaf_capacity)
    if tree.dropped_count:
        _log.info(
            "Dropped points outside the bounding box",
            dropped=tree.dropped_count,
            indexed=tree.indexed_count,
        )
    return tree
