"""
Refinement run bookkeeping.
Tracks per-stage segment counts, timings and the merge/join tallies of one refine run.
"""
import time
from dataclasses import dataclass, field
from typing import Any


@dataclass
class StageRecord:
    name: str
    count_in: int
    count_out: int
    seconds: float


class RefinementReport:
    """
    Counters for one refinement run.
    ``finalize`` checks that ``input - outliers_removed - merged - joined == output``.
    """

    def __init__(self, input_count: int):
        self.input_count = input_count
        self.stages: list[StageRecord] = []
        self.counters: dict[str, Any] = {
            "cropped": 0,
            "crop_flagged": 0,
            "outliers_removed": 0,
            "clusters": 0,
            "merged": 0,
            "joined": 0,
            "merge_sweeps": 0,
        }
        self.theta: float | None = None
        self.metrics_before: dict[str, Any] | None = None
        self.metrics_after: dict[str, Any] | None = None
        self.comparison: dict[str, Any] | None = None
        self._stage_start: float | None = None
        self._stage_name = ""
        self._stage_in = 0

    def start_stage(self, name: str, count_in: int) -> None:
        self._stage_name = name
        self._stage_in = count_in
        self._stage_start = time.monotonic()

    def end_stage(self, count_out: int) -> StageRecord:
        if self._stage_start is None:
            raise RuntimeError("end_stage called without start_stage")
        record = StageRecord(
            self._stage_name, self._stage_in, count_out, time.monotonic() - self._stage_start
        )
        self.stages.append(record)
        self._stage_start = None
        return record

    def increment(self, key: str, count: int = 1) -> None:
        self.counters[key] += count

    @property
    def output_count(self) -> int:
        return self.stages[-1].count_out if self.stages else self.input_count

    def balanced(self) -> bool:
        removed = self.counters["outliers_removed"] + self.counters["merged"] + self.counters["joined"]
        return self.input_count - removed == self.output_count

    def finalize(self) -> dict[str, Any]:
        """Flat key/value view of the run, ready for ``save_report``. Timings stay out of it."""
        if not self.balanced():
            raise RuntimeError(
                f"stage bookkeeping mismatch: {self.input_count} in, {self.output_count} out, "
                f"counters {self.counters}"
            )
        out: dict[str, Any] = {"segments_in": self.input_count, "segments_out": self.output_count}
        out.update(self.counters)
        if self.theta is not None:
            out["outlier_threshold"] = self.theta
        for record in self.stages:
            out[f"stage.{record.name}.in"] = record.count_in
            out[f"stage.{record.name}.out"] = record.count_out
        for prefix, metrics in (("before", self.metrics_before), ("after", self.metrics_after)):
            if metrics:
                out.update({f"{prefix}.{k}": v for k, v in metrics.items()})
        if self.comparison:
            out.update({f"comparison.{k}": v for k, v in self.comparison.items()})
        return out

    def get_summary(self) -> str:
        """Human-readable stage table."""
        lines = [f"Refinement: {self.input_count} -> {self.output_count} segments"]
        for record in self.stages:
            lines.append(
                f"  {record.name:<10} {record.count_in:>6} -> {record.count_out:<6} "
                f"({record.seconds:.2f}s)"
            )
        lines.append(
            "  outliers removed: {outliers_removed}, merged: {merged}, joined: {joined}, "
            "clusters: {clusters}".format(**self.counters)
        )
        if self.comparison and self.comparison.get("score_improvement_pct") is not None:
            lines.append(f"  score improvement: {self.comparison['score_improvement_pct']:.1f}%")
        return "\n".join(lines)
