"""Tests for refinement run bookkeeping."""
import unittest

from src.refinement import RefinementReport


def _run(report: RefinementReport, counts: list[int]) -> None:
    names = ["translate", "crop", "outliers", "cluster", "merge"]
    for name, (count_in, count_out) in zip(names, zip(counts, counts[1:])):
        report.start_stage(name, count_in)
        report.end_stage(count_out)


class TestRefinementReport(unittest.TestCase):
    def test_init(self):
        report = RefinementReport(10)
        self.assertEqual(report.input_count, 10)
        self.assertEqual(report.output_count, 10)
        self.assertEqual(report.counters["merged"], 0)
        self.assertIsNone(report.theta)

    def test_increment(self):
        report = RefinementReport(10)
        report.increment("merged")
        report.increment("merged", 3)
        self.assertEqual(report.counters["merged"], 4)

    def test_stage_records(self):
        report = RefinementReport(4)
        report.start_stage("translate", 4)
        record = report.end_stage(4)
        self.assertEqual(record.name, "translate")
        self.assertGreaterEqual(record.seconds, 0.0)
        self.assertEqual(report.output_count, 4)

    def test_end_without_start(self):
        with self.assertRaises(RuntimeError):
            RefinementReport(1).end_stage(1)

    def test_finalize(self):
        report = RefinementReport(10)
        _run(report, [10, 10, 10, 8, 8, 5])
        report.increment("outliers_removed", 2)
        report.increment("merged", 2)
        report.increment("joined", 1)
        report.theta = 4.5
        report.metrics_before = {"e_rms_cm": 2.0}
        report.metrics_after = {"e_rms_cm": 1.0}
        report.comparison = {"e_rms_cm_delta": -1.0}

        result = report.finalize()

        self.assertEqual(result["segments_in"], 10)
        self.assertEqual(result["segments_out"], 5)
        self.assertEqual(result["outlier_threshold"], 4.5)
        self.assertEqual(result["stage.outliers.in"], 10)
        self.assertEqual(result["stage.outliers.out"], 8)
        self.assertEqual(result["before.e_rms_cm"], 2.0)
        self.assertEqual(result["after.e_rms_cm"], 1.0)
        self.assertEqual(result["comparison.e_rms_cm_delta"], -1.0)
        self.assertFalse(any("seconds" in key for key in result))

    def test_finalize_unbalanced(self):
        report = RefinementReport(10)
        _run(report, [10, 10, 10, 8, 8, 5])
        report.increment("outliers_removed", 2)
        self.assertFalse(report.balanced())
        with self.assertRaisesRegex(RuntimeError, "bookkeeping"):
            report.finalize()

    def test_get_summary(self):
        report = RefinementReport(3)
        _run(report, [3, 3, 3, 2, 2, 2])
        report.increment("outliers_removed")
        report.comparison = {"score_improvement_pct": 42.0}
        summary = report.get_summary()
        self.assertIn("Refinement: 3 -> 2 segments", summary)
        self.assertIn("outliers", summary)
        self.assertIn("score improvement: 42.0%", summary)
