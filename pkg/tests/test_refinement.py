import math
import unittest

import numpy as np
import pytest

from src.config import PipelineConfig
from src.geometry import Segment, closest_points
from src.refinement import (
    ClusterUniverse,
    SegmentStats,
    cluster,
    crop_segment,
    crop_segment_detailed,
    gap_is_dense,
    gap_window,
    join_pair,
    merge_pair,
    outlier_threshold,
    probe_length,
    remove_outliers,
    segment_stats,
    similarity,
    similarity_matrix,
    sorted_edges,
    translate_segment,
    translation_vector,
    window_density,
)
from tests.scenes import cloud_of, line_points, tree_of

X_EDGE = Segment((0.0, 0.0, 0.0), (1.0, 0.0, 0.0))
CFG = PipelineConfig()


class TestSegmentStats(unittest.TestCase):
    def setUp(self):
        self.tree = tree_of(cloud_of(line_points(X_EDGE, offset=(0, 0.01, 0))))

    def test_counts_density_and_rms(self):
        st = segment_stats(X_EDGE, self.tree, 0.05)
        self.assertEqual(st.covered_count, 1001)
        self.assertAlmostEqual(st.density, 1001.0)
        self.assertAlmostEqual(st.e_rms, 0.01, places=12)
        self.assertAlmostEqual(st.ratio, 0.01 / 1001)

    def test_empty_cylinder(self):
        st = segment_stats(Segment((0, 1, 0), (1, 1, 0)), self.tree, 0.05)
        self.assertEqual(st, SegmentStats(0, 0.0, 0.0))
        self.assertIsNone(st.ratio)
        self.assertEqual(st.ratio_or_inf, math.inf)

    def test_radius_too_small(self):
        self.assertEqual(segment_stats(X_EDGE, self.tree, 0.005).covered_count, 0)

    def test_window_density(self):
        self.assertAlmostEqual(window_density(X_EDGE, 0.0, 0.5, self.tree, 0.05), 1000.0, delta=2.5)


class TestTranslate(unittest.TestCase):
    def test_moves_onto_points(self):
        tree = tree_of(cloud_of(line_points(X_EDGE, offset=(0, 0.01, -0.02))))
        moved = translate_segment(X_EDGE, tree, CFG)
        np.testing.assert_allclose(moved.start, [0, 0.01, -0.02], atol=1e-12)
        np.testing.assert_allclose(moved.end, [1, 0.01, -0.02], atol=1e-12)

    def test_axial_component_ignored(self):
        # points only on the first half must not drag the segment along its axis
        tree = tree_of(cloud_of(line_points(X_EDGE, offset=(0, 0.02, 0), t1=0.5)))
        moved = translate_segment(X_EDGE, tree, CFG)
        np.testing.assert_allclose(moved.start, [0, 0.02, 0], atol=1e-12)
        self.assertAlmostEqual(moved.length, 1.0, places=12)

    def test_no_points_no_move(self):
        tree = tree_of(cloud_of(line_points(X_EDGE, offset=(0, 0.5, 0))))
        self.assertEqual(translate_segment(X_EDGE, tree, CFG), X_EDGE)

    def test_translation_vector_of_nothing(self):
        np.testing.assert_array_equal(translation_vector(X_EDGE, np.empty((0, 3))), np.zeros(3))


class TestCrop(unittest.TestCase):
    def setUp(self):
        self.tree = tree_of(cloud_of(line_points(X_EDGE)))

    def test_overextended_end_cropped(self):
        outcome = crop_segment_detailed(Segment((0, 0, 0), (1.4, 0, 0)), self.tree, CFG)
        self.assertTrue(outcome.cropped_end)
        self.assertFalse(outcome.cropped_start)
        self.assertLess(abs(outcome.segment.b[0] - 1.0), 0.01)
        self.assertEqual(outcome.segment.a, (0.0, 0.0, 0.0))

    def test_overextended_start_cropped(self):
        cropped = crop_segment(Segment((-0.3, 0, 0), (1.0, 0, 0)), self.tree, CFG)
        self.assertLess(abs(cropped.a[0]), 0.01)
        np.testing.assert_allclose(cropped.b, [1.0, 0.0, 0.0], atol=1e-12)

    def test_both_ends(self):
        cropped = crop_segment(Segment((-0.3, 0, 0), (1.3, 0, 0)), self.tree, CFG)
        self.assertLess(abs(cropped.a[0]), 0.01)
        self.assertLess(abs(cropped.b[0] - 1.0), 0.01)

    def test_fitting_segment_untouched(self):
        outcome = crop_segment_detailed(X_EDGE, self.tree, CFG)
        self.assertFalse(outcome.cropped)
        self.assertEqual(outcome.segment, X_EDGE)

    def test_empty_interior_untouched(self):
        far = Segment((0, 0.5, 0), (1, 0.5, 0))
        outcome = crop_segment_detailed(far, self.tree, CFG)
        self.assertFalse(outcome.cropped or outcome.flagged)
        self.assertEqual(outcome.segment, far)

    def test_never_crosses_midpoint(self):
        long = Segment((-2.0, 0, 0), (1.2, 0, 0))
        cropped = crop_segment(long, self.tree, CFG)
        self.assertLessEqual(cropped.a[0], long.midpoint[0] + 1e-12)
        self.assertGreaterEqual(cropped.b[0], long.midpoint[0] - 1e-12)


def test_crop_with_gaussian_noise():
    rng = np.random.default_rng(0)
    t = rng.uniform(0, 1, 1000)
    pts = np.column_stack([t, np.zeros_like(t), np.zeros_like(t)]) + rng.normal(0, 0.005, (1000, 3))
    tree = tree_of(cloud_of(pts))
    cropped = crop_segment(Segment((0, 0, 0), (1.4, 0, 0)), tree, CFG)
    assert abs(cropped.b[0] - 1.0) < 0.02


class TestProbeLength(unittest.TestCase):
    def test_fraction_of_long_segment(self):
        long = Segment((0, 0, 0), (1.4, 0, 0))
        self.assertAlmostEqual(probe_length(long, 1000.0, CFG), 0.028)

    def test_point_floor_on_short_segment(self):
        short = Segment((0, 0, 0), (0.42, 0, 0))
        self.assertAlmostEqual(probe_length(short, 1000.0, CFG), 16 / 1000.0)
        self.assertAlmostEqual(probe_length(short, 500.0, CFG), 16 / 500.0)

    def test_capped_at_interior_window(self):
        short = Segment((0, 0, 0), (0.42, 0, 0))
        self.assertAlmostEqual(probe_length(short, 1.0, CFG), 0.25 * 0.42)


def test_crop_short_sparse_segment():
    # 300 random points on a 0.3 m edge; a plain 2% probe would expect about 8 of them
    edge = Segment((0, 0, 0), (0.3, 0, 0))
    t = np.random.default_rng(0).uniform(0, 1, 300)
    tree = tree_of(cloud_of(edge.start + t[:, None] * edge.vector))
    cropped = crop_segment(Segment((0, 0, 0), (0.42, 0, 0)), tree, CFG)
    assert abs(cropped.b[0] - 0.3) < 0.01


class TestOutliers(unittest.TestCase):
    def test_threshold_is_scaled_mean_density(self):
        stats = [SegmentStats(10, 100.0, 0.0), SegmentStats(30, 300.0, 0.0)]
        self.assertAlmostEqual(outlier_threshold(stats, 0.5), 100.0)

    def test_threshold_needs_segments(self):
        with self.assertRaises(ValueError):
            outlier_threshold([], 0.5)

    def test_keeps_order_and_boundary(self):
        segs = [X_EDGE, X_EDGE.reversed(), Segment((0, 0, 0), (0, 1, 0))]
        stats = [SegmentStats(1, 5.0, 0.0), SegmentStats(1, 1.0, 0.0), SegmentStats(1, 10.0, 0.0)]
        self.assertEqual(remove_outliers(segs, stats, 5.0), [segs[0], segs[2]])

    def test_length_mismatch(self):
        with self.assertRaises(ValueError):
            remove_outliers([X_EDGE], [], 1.0)


class TestSimilarity(unittest.TestCase):
    def test_identical_segments(self):
        self.assertAlmostEqual(similarity(X_EDGE, X_EDGE, 800.0), math.tanh(1.0))

    def test_collinear_length_ratio_two(self):
        half = Segment((0, 0, 0), (0.5, 0, 0))
        self.assertAlmostEqual(similarity(X_EDGE, half, 800.0), math.tanh(4.0))

    def test_symmetric(self):
        other = Segment((0.1, 0.02, 0), (0.7, 0.03, 0.01))
        self.assertEqual(similarity(X_EDGE, other, 800.0), similarity(other, X_EDGE, 800.0))

    def test_perpendicular_is_zero(self):
        self.assertEqual(similarity(X_EDGE, Segment((0, 0, 0), (0, 1, 0)), 800.0), 0.0)

    def test_distance_attenuates(self):
        near = similarity(X_EDGE, X_EDGE.translated([0, 0.01, 0]), 800.0)
        far = similarity(X_EDGE, X_EDGE.translated([0, 0.1, 0]), 800.0)
        self.assertLess(far, near)
        self.assertAlmostEqual(near, math.tanh(1.0) / (1 + 800 * 1e-4))

    def test_saturated_value_stays_below_one(self):
        tiny = Segment((0, 0, 0), (0.01, 0, 0))
        value = similarity(X_EDGE, tiny, 800.0)
        self.assertLess(value, 1.0)
        self.assertGreater(1.0 - value, 0.0)

    def test_paper_branch_drops_aligned_pairs(self):
        self.assertEqual(similarity(X_EDGE, X_EDGE, 800.0, "paper"), 0.0)
        skew = Segment((0, 0, 0), (0.2, 1.0, 0))
        self.assertGreater(similarity(X_EDGE, skew, 800.0, "paper"), 0.0)

    def test_matrix_matches_pairwise(self):
        rng = np.random.default_rng(5)
        segs = [
            Segment.from_arrays(a, a + [1, 0, 0] + rng.normal(0, 0.2, 3))
            for a in rng.uniform(0, 1, (15, 3))
        ]
        sim = similarity_matrix(segs, 800.0)
        self.assertTrue(np.array_equal(sim, sim.T))
        self.assertTrue(np.all(np.diag(sim) == 0.0))
        for i in range(len(segs)):
            for j in range(len(segs)):
                if i != j:
                    self.assertAlmostEqual(sim[i, j], similarity(segs[i], segs[j], 800.0), places=9)
        self.assertTrue(np.all((sim >= 0.0) & (sim < 1.0)))


class TestClustering(unittest.TestCase):
    def test_near_duplicates_join(self):
        universe = cluster([X_EDGE, X_EDGE.translated([0, 0.001, 0])], 800.0, 0.25)
        self.assertEqual(universe.clusters(), [[0, 1]])
        self.assertAlmostEqual(universe.admissions[0].weight, 1 - math.tanh(1) / 1.0008, places=9)

    def test_identical_segments_form_one_cluster(self):
        universe = cluster([X_EDGE] * 6, 800.0, 0.25)
        self.assertEqual(universe.clusters(), [list(range(6))])
        self.assertEqual(universe.num, 1)

    def test_perpendicular_segments_stay_apart(self):
        segs = [X_EDGE, Segment((0, 0, 0), (0, 1, 0)), Segment((0, 0, 0), (0, 0, 1))]
        self.assertEqual(cluster(segs, 800.0, 0.25).clusters(), [[0], [1], [2]])

    def test_distant_parallel_segments_stay_apart(self):
        segs = [X_EDGE, X_EDGE.translated([0, 1.0, 0])]
        self.assertEqual(cluster(segs, 800.0, 0.25).clusters(), [[0], [1]])

    def test_admissions_respect_thresholds(self):
        rng = np.random.default_rng(9)
        segs = [X_EDGE.translated(rng.normal(0, 0.01, 3)) for _ in range(10)]
        universe = cluster(segs, 800.0, 0.25)
        for adm in universe.admissions:
            self.assertLessEqual(adm.weight, adm.threshold_a)
            self.assertLessEqual(adm.weight, adm.threshold_b)
        self.assertEqual(len(universe.admissions), 10 - universe.num)

    def test_requires_segments(self):
        with self.assertRaises(ValueError):
            cluster([], 800.0, 0.25)


def test_sorted_edges_order():
    sim = np.array([
        [0.0, 0.5, 0.9, 0.0],
        [0.5, 0.0, 0.5, 0.0],
        [0.9, 0.5, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ])
    assert sorted_edges(sim) == [(0, 2, pytest.approx(0.1)), (0, 1, 0.5), (1, 2, 0.5)]


def test_universe_threshold_update():
    u = ClusterUniverse(3, c=0.3)
    assert u.admit(0, 1, 0.1)
    root = u.find(0)
    assert u.threshold[root] == pytest.approx(0.1 + 0.3 / 2)
    assert u.size(1) == 2
    assert not u.admit(1, 2, 0.31)
    assert u.admit(1, 2, 0.2)
    assert u.clusters() == [[0, 1, 2]]
    assert not u.admit(0, 2, 0.0)


class TestMergeJoin(unittest.TestCase):
    def test_merge_duplicates(self):
        tree = tree_of(cloud_of(line_points(X_EDGE, offset=(0, 0.01, 0))))
        shorter = Segment((0.1, 0.02, 0), (0.9, 0.02, 0))
        outcome = merge_pair(X_EDGE, shorter, tree, CFG, theta=1.0)
        self.assertEqual(outcome.decision, "merged")
        (merged,) = outcome.segments
        self.assertAlmostEqual(merged.a[1], 0.02 * 0.8 / 1.8, places=12)
        r = CFG.working_radius
        merged_ratio = segment_stats(merged, tree, r).ratio
        self.assertLess(merged_ratio, segment_stats(X_EDGE, tree, r).ratio)
        self.assertLess(merged_ratio, segment_stats(shorter, tree, r).ratio)

    def test_merge_keeps_longer_when_no_better(self):
        tree = tree_of(cloud_of(line_points(X_EDGE)))
        shorter = Segment((0.1, 0.02, 0), (0.9, 0.02, 0))
        outcome = merge_pair(X_EDGE, shorter, tree, CFG, theta=1.0)
        self.assertEqual(outcome.decision, "kept_longer")
        self.assertEqual(outcome.segments, (X_EDGE,))

    def test_merge_blocked_by_sparse_gap(self):
        tree = tree_of(cloud_of(line_points(X_EDGE)))
        shorter = Segment((0.1, 0.3, 0), (0.9, 0.3, 0))
        outcome = merge_pair(X_EDGE, shorter, tree, CFG, theta=1000.0)
        self.assertEqual(outcome.decision, "kept_both")

    def test_join_halves(self):
        pts = line_points(X_EDGE)
        pts[:, 1] = np.where(np.arange(len(pts)) % 2 == 0, 0.002, -0.002)
        tree = tree_of(cloud_of(pts))
        first = Segment((0, 0, 0), (0.45, 0, 0))
        second = Segment((0.55, 0, 0), (1, 0, 0))
        outcome = join_pair(first, second, tree, CFG, theta=1.0)
        self.assertEqual(outcome.decision, "joined")
        self.assertEqual(outcome.segments, (X_EDGE,))

    def test_join_blocked_by_empty_gap(self):
        pts = line_points(X_EDGE)
        pts = pts[(pts[:, 0] <= 0.44) | (pts[:, 0] >= 0.56)]
        tree = tree_of(cloud_of(pts))
        first = Segment((0, 0, 0), (0.45, 0, 0))
        second = Segment((0.55, 0, 0), (1, 0, 0))
        outcome = join_pair(first, second, tree, CFG, theta=100.0)
        self.assertEqual(outcome.decision, "kept_both")
        self.assertEqual(outcome.segments, (first, second))

    def test_millimeter_duplicate_over_jittered_points(self):
        # no point sits in the 1 mm slab between the two axes
        pts = line_points(X_EDGE)
        pts[:, 1] = np.where(np.arange(len(pts)) % 2 == 0, 0.003, -0.003)
        tree = tree_of(cloud_of(pts))
        shorter = Segment((0.1, 0.001, 0), (0.9, 0.001, 0))
        p, q = closest_points(X_EDGE, shorter)
        self.assertAlmostEqual(float(np.linalg.norm(q - p)), 0.001, places=12)
        self.assertTrue(gap_is_dense(p, q, tree, CFG, theta=10.0))
        outcome = merge_pair(X_EDGE, shorter, tree, CFG, theta=10.0)
        self.assertIn(outcome.decision, ("merged", "kept_longer"))
        self.assertEqual(len(outcome.segments), 1)

    def test_l_corner_not_joined(self):
        up = Segment((1, 0, 0), (1, 1, 0))
        tree = tree_of(cloud_of(line_points(X_EDGE), line_points(up)))
        outcome = join_pair(X_EDGE, up, tree, CFG, theta=1.0)
        self.assertEqual(outcome.decision, "kept_both")
        self.assertFalse(outcome.changed)


class TestGapWindow(unittest.TestCase):
    def test_short_gap_stretched_about_midpoint(self):
        p, q = np.array([0.5, 0.0, 0.0]), np.array([0.5, 0.002, 0.0])
        window = gap_window(p, q, CFG)
        self.assertAlmostEqual(window.length, CFG.working_radius, places=12)
        np.testing.assert_allclose(window.midpoint, [0.5, 0.001, 0.0], atol=1e-15)
        self.assertAlmostEqual(abs(float(window.direction[1])), 1.0, places=12)

    def test_long_gap_unchanged(self):
        p, q = np.array([0.45, 0.0, 0.0]), np.array([0.55, 0.0, 0.0])
        self.assertEqual(gap_window(p, q, CFG), Segment((0.45, 0, 0), (0.55, 0, 0)))

    def test_coincident_points(self):
        p = np.array([1.0, 0.0, 0.0])
        self.assertIsNone(gap_window(p, p.copy(), CFG))
        empty = tree_of(cloud_of(line_points(X_EDGE, offset=(0, 0.5, 0))))
        self.assertTrue(gap_is_dense(p, p.copy(), empty, CFG, theta=1e6))

    def test_short_gap_in_empty_space_is_sparse(self):
        tree = tree_of(cloud_of(line_points(X_EDGE)))
        p, q = np.array([0.5, 0.5, 0.0]), np.array([0.5, 0.501, 0.0])
        self.assertFalse(gap_is_dense(p, q, tree, CFG, theta=1.0))
