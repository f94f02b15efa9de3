"""
Synthetic scenes, defect injection and brute-force oracles.
"""
from .defects import DefectSpec, InjectedSegments, inject_defects, plant_outliers
from .manifest import (
    OUTLIER_EDGE,
    ManifestEntry,
    format_manifest,
    load_manifest,
    parse_manifest,
    save_manifest,
)
from .oracle import brute_force_evaluate, brute_force_query
from .scene import (
    SceneParams,
    SyntheticScene,
    cube_wireframe,
    generate_scene,
    load_scene,
    sample_edge,
    save_scene,
)

__all__ = [
    "OUTLIER_EDGE",
    "DefectSpec",
    "InjectedSegments",
    "ManifestEntry",
    "SceneParams",
    "SyntheticScene",
    "brute_force_evaluate",
    "brute_force_query",
    "cube_wireframe",
    "format_manifest",
    "generate_scene",
    "inject_defects",
    "load_manifest",
    "load_scene",
    "parse_manifest",
    "plant_outliers",
    "sample_edge",
    "save_manifest",
    "save_scene",
]
