"""Global density threshold and outlier removal."""
from collections.abc import Sequence

import numpy as np

from src.geometry import Segment
from src.refinement.stats import SegmentStats


def outlier_threshold(all_stats: Sequence[SegmentStats], xi: float) -> float:
    """theta = xi times the mean segment density."""
    if not all_stats:
        raise ValueError("outlier threshold needs at least one segment")
    return xi * float(np.mean([st.density for st in all_stats]))


def remove_outliers(
    segments: Sequence[Segment], stats: Sequence[SegmentStats], theta: float
) -> list[Segment]:
    """Keep, in order, the segments whose density reaches ``theta``."""
    if len(segments) != len(stats):
        raise ValueError(f"{len(segments)} segments but {len(stats)} stats")
    return [s for s, st in zip(segments, stats) if st.density >= theta]
