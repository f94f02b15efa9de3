import unittest

import numpy as np
import pytest

from src.geometry import BoundingBox, Cylinder, Segment
from src.spatial import GaussianCloud, build
from src.synth.oracle import brute_force_query


def _random_cylinders(rng: np.random.Generator, count: int) -> list[Cylinder]:
    out = []
    while len(out) < count:
        a, b = rng.uniform(-0.2, 1.2, size=(2, 3))
        if np.linalg.norm(b - a) < 1e-3:
            continue
        out.append(Cylinder(Segment.from_arrays(a, b), float(rng.uniform(0.005, 0.3))))
    return out


class TestOctreeMatchesLinearScan(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(7)
        # mix of a dense line, a blob and points outside the indexed box
        line = np.column_stack([np.linspace(0, 1, 2000), np.full(2000, 0.5), np.full(2000, 0.5)])
        blob = rng.normal(0.5, 0.15, size=(3000, 3))
        outside = rng.uniform(1.5, 2.0, size=(200, 3))
        self.cloud = GaussianCloud(np.concatenate([line, blob, outside]))
        self.box = BoundingBox((0, 0, 0), (1, 1, 1))
        self.tree = build(self.cloud, max_depth=8, seed_bbox=self.box, leaf_capacity=16)
        self.cylinders = _random_cylinders(rng, 200)

    def test_every_query_equals_oracle(self):
        for c in self.cylinders:
            expected = brute_force_query(self.cloud, c, self.box)
            np.testing.assert_array_equal(self.tree.query_cylinder(c), expected)

    def test_radius_sweep_is_monotone(self):
        axis = Segment((0.1, 0.4, 0.5), (0.9, 0.6, 0.5))
        previous: set[int] = set()
        for r in (0.01, 0.02, 0.05, 0.1, 0.2):
            current = set(self.tree.query_segment(axis, r).tolist())
            self.assertTrue(previous <= current)
            previous = current

    def test_points_outside_box_are_dropped(self):
        self.assertEqual(self.tree.dropped_count, 200)
        self.assertEqual(len(self.tree), len(self.cloud) - 200)
        c = Cylinder(Segment((1.5, 1.5, 1.5), (2.0, 2.0, 2.0)), 0.5)
        self.assertEqual(self.tree.query_cylinder(c).size, 0)

    def test_results_sorted_without_duplicates(self):
        for c in self.cylinders[:20]:
            hits = self.tree.query_cylinder(c)
            self.assertTrue(np.all(np.diff(hits) > 0))


class TestOctreeStructure(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(1)
        self.cloud = GaussianCloud(rng.uniform(0, 1, size=(5000, 3)))
        self.tree = build(self.cloud, max_depth=6, leaf_capacity=32)

    def test_every_point_in_exactly_one_leaf(self):
        leaves = [n for n in self.tree.iter_nodes() if n.is_leaf]
        owned = np.concatenate([self.tree.node_indices(n) for n in leaves])
        self.assertEqual(owned.size, len(self.cloud))
        np.testing.assert_array_equal(np.sort(owned), np.arange(len(self.cloud)))

    def test_leaf_points_inside_leaf_box(self):
        for node in self.tree.iter_nodes():
            if node.is_leaf and node.count:
                pts = self.tree.points(self.tree.node_indices(node))
                self.assertTrue(node.box.contains(pts).all())

    def test_children_partition_parent(self):
        for node in self.tree.iter_nodes():
            if not node.is_leaf:
                self.assertEqual(len(node.children), 8)
                self.assertEqual(sum(c.count for c in node.children), node.count)

    def test_leaf_capacity_or_depth_limit(self):
        for node in self.tree.iter_nodes():
            if node.is_leaf:
                self.assertTrue(node.count <= 32 or node.depth == 6)

    def test_build_is_deterministic(self):
        again = build(self.cloud, max_depth=6, leaf_capacity=32)
        c = Cylinder(Segment((0, 0, 0), (1, 1, 1)), 0.1)
        np.testing.assert_array_equal(self.tree.query_cylinder(c), again.query_cylinder(c))
        self.assertEqual(
            [n.count for n in self.tree.iter_nodes()], [n.count for n in again.iter_nodes()]
        )


def test_coincident_points_stop_at_max_depth():
    cloud = GaussianCloud(np.tile([0.5, 0.5, 0.5], (100, 1)))
    tree = build(cloud, max_depth=4, seed_bbox=BoundingBox((0, 0, 0), (1, 1, 1)), leaf_capacity=8)
    assert max(n.depth for n in tree.iter_nodes()) == 4
    hits = tree.query_segment(Segment((0.5, 0.5, 0.0), (0.5, 0.5, 1.0)), 0.01)
    assert hits.size == 100


def test_empty_cloud_with_box_answers_empty():
    tree = build(GaussianCloud(np.empty((0, 3))), seed_bbox=BoundingBox((0, 0, 0), (1, 1, 1)))
    assert len(tree) == 0
    assert tree.query_segment(Segment((0, 0, 0), (1, 1, 1)), 1.0).size == 0


def test_empty_cloud_without_box_rejected():
    with pytest.raises(ValueError, match="degenerate"):
        build(GaussianCloud(np.empty((0, 3))))


def test_flat_box_rejected():
    cloud = GaussianCloud([[0.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    with pytest.raises(ValueError, match="degenerate"):
        build(cloud)


@pytest.mark.parametrize("max_depth, leaf_capacity", [(0, 32), (10, 0)])
def test_invalid_parameters_rejected(max_depth, leaf_capacity):
    cloud = GaussianCloud(np.random.default_rng(0).uniform(size=(10, 3)))
    with pytest.raises(ValueError):
        build(cloud, max_depth=max_depth, leaf_capacity=leaf_capacity)
