"""
Spatial indexing of Gaussian centers.
"""
from .cloud import GaussianCloud
from .octree import DEFAULT_LEAF_CAPACITY, DEFAULT_MAX_DEPTH, Octree, OctreeNode, build

__all__ = [
    "DEFAULT_LEAF_CAPACITY",
    "DEFAULT_MAX_DEPTH",
    "GaussianCloud",
    "Octree",
    "OctreeNode",
    "build",
]
