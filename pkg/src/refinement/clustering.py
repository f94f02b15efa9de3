"""
Graph-based segment clustering with an adaptive per-component admission threshold.

Edges carry dissimilarity ``w = 1 - similarity`` and are visited in ascending order; two
components join when the edge is within both components' thresholds, after which the new
root's threshold becomes ``w + c / size``.
"""
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.geometry import Segment
from src.refinement.similarity import similarity_matrix


@dataclass(frozen=True)
class Admission:
    """One accepted edge, with the thresholds it was checked against."""

    a: int
    b: int
    weight: float
    threshold_a: float
    threshold_b: float


class ClusterUniverse:
    """Disjoint-set forest with union by rank and path compression."""

    def __init__(self, num_elements: int, c: float):
        self.num = num_elements
        self.c = c
        self._parent = list(range(num_elements))
        self._rank = [0] * num_elements
        self._size = [1] * num_elements
        self.threshold = [c] * num_elements
        self.admissions: list[Admission] = []

    def find(self, x: int) -> int:
        root = x
        while root != self._parent[root]:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def size(self, x: int) -> int:
        return self._size[self.find(x)]

    def join(self, x: int, y: int) -> int:
        x, y = self.find(x), self.find(y)
        if x == y:
            return x
        if self._rank[x] > self._rank[y]:
            x, y = y, x
        self._parent[x] = y
        self._size[y] += self._size[x]
        if self._rank[x] == self._rank[y]:
            self._rank[y] += 1
        self.num -= 1
        return y

    def admit(self, a: int, b: int, weight: float) -> bool:
        """Apply one edge; returns whether the two components were joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        ta, tb = self.threshold[ra], self.threshold[rb]
        if weight > ta or weight > tb:
            return False
        root = self.join(ra, rb)
        self.threshold[root] = weight + self.c / self._size[root]
        self.admissions.append(Admission(a, b, weight, ta, tb))
        return True

    def clusters(self) -> list[list[int]]:
        """Members per component, each sorted, ordered by smallest member."""
        groups: dict[int, list[int]] = {}
        for i in range(len(self._parent)):
            groups.setdefault(self.find(i), []).append(i)
        return sorted(groups.values(), key=lambda members: members[0])


def sorted_edges(sim: np.ndarray) -> list[tuple[int, int, float]]:
    """Edges ``(i, j, 1 - s)`` for ``i < j`` and ``s > 0``, ascending by weight then index."""
    i, j = np.nonzero(np.triu(sim, k=1) > 0.0)
    w = 1.0 - sim[i, j]
    order = np.lexsort((j, i, w))
    return [(int(i[k]), int(j[k]), float(w[k])) for k in order]


def cluster(
    segments: Sequence[Segment],
    lambda_sim: float,
    cluster_c: float,
    branch: str = "aligned",
) -> ClusterUniverse:
    if not segments:
        raise ValueError("clustering needs at least one segment")
    universe = ClusterUniverse(len(segments), cluster_c)
    for a, b, w in sorted_edges(similarity_matrix(segments, lambda_sim, branch)):
        universe.admit(a, b, w)
    return universe
