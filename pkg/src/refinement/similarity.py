"""
Pairwise segment similarity.

``tanh(R^2 cos) / (1 + lambda d^2)`` where R is the length ratio (longer over shorter),
cos the absolute direction cosine and d the largest distance from an endpoint of the
shorter segment to the longer segment's line. The ``aligned`` branch keeps pairs with
``cos >= 0.5``; ``paper`` inverts the gate and keeps ``cos < 0.5`` for comparison runs.
"""
import math
from collections.abc import Sequence

import numpy as np

from src.geometry import Segment, line_distances

# largest double below 1; tanh saturates to exactly 1.0 for large arguments
_BELOW_ONE = math.nextafter(1.0, 0.0)
_TIE_RTOL = 1e-12


def _gate(cos: np.ndarray | float, branch: str) -> np.ndarray | bool:
    return cos >= 0.5 if branch == "aligned" else cos < 0.5


def similarity(si: Segment, sj: Segment, lambda_sim: float, branch: str = "aligned") -> float:
    cos = min(abs(float(si.direction @ sj.direction)), 1.0)
    if not _gate(cos, branch):
        return 0.0
    longer, shorter = (si, sj) if si.length >= sj.length else (sj, si)
    ratio = longer.length / shorter.length
    d = float(line_distances([shorter.start, shorter.end], longer).max())
    if abs(si.length - sj.length) <= _TIE_RTOL * max(si.length, sj.length):
        d = max(d, float(line_distances([longer.start, longer.end], shorter).max()))
    value = math.tanh(ratio * ratio * cos) / (1.0 + lambda_sim * d * d)
    return min(value, _BELOW_ONE)


def _endpoint_line_distances(
    points: np.ndarray, origins: np.ndarray, dirs: np.ndarray
) -> np.ndarray:
    """Distance from ``points[k]`` to the line ``origins[k] + t dirs[k]``, row-wise."""
    rel = points - origins
    along = np.einsum("ij,ij->i", rel, dirs)
    return np.linalg.norm(rel - along[:, None] * dirs, axis=1)


def similarity_matrix(
    segments: Sequence[Segment], lambda_sim: float, branch: str = "aligned"
) -> np.ndarray:
    """Symmetric ``(n, n)`` similarity matrix with a zero diagonal."""
    n = len(segments)
    out = np.zeros((n, n))
    if n < 2:
        return out
    starts = np.array([s.start for s in segments])
    ends = np.array([s.end for s in segments])
    dirs = np.array([s.direction for s in segments])
    lengths = np.array([s.length for s in segments])

    for i in range(n - 1):
        j = np.arange(i + 1, n)
        cos = np.minimum(np.abs(dirs[j] @ dirs[i]), 1.0)
        keep = _gate(cos, branch)
        if not np.any(keep):
            continue
        j, cos = j[keep], cos[keep]
        m = j.size
        oi = np.broadcast_to(starts[i], (m, 3))
        di = np.broadcast_to(dirs[i], (m, 3))
        # endpoints of j against the line of i, and endpoints of i against the lines of j
        d_on_i = np.maximum(
            _endpoint_line_distances(starts[j], oi, di),
            _endpoint_line_distances(ends[j], oi, di),
        )
        d_on_j = np.maximum(
            _endpoint_line_distances(np.broadcast_to(starts[i], (m, 3)), starts[j], dirs[j]),
            _endpoint_line_distances(np.broadcast_to(ends[i], (m, 3)), starts[j], dirs[j]),
        )
        li, lj = lengths[i], lengths[j]
        i_longer = li >= lj
        tie = np.abs(li - lj) <= _TIE_RTOL * np.maximum(li, lj)
        d = np.where(tie, np.maximum(d_on_i, d_on_j), np.where(i_longer, d_on_i, d_on_j))
        ratio = np.maximum(li, lj) / np.minimum(li, lj)
        value = np.minimum(np.tanh(ratio * ratio * cos) / (1.0 + lambda_sim * d * d), _BELOW_ONE)
        out[i, j] = value
        out[j, i] = value
    return out
