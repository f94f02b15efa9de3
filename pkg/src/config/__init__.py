"""
Configuration management module.
"""
from .settings import (
    KEY_ALIASES,
    PRESETS,
    SIMILARITY_BRANCHES,
    ConfigError,
    EvalConfig,
    PipelineConfig,
    RunConfig,
    Settings,
    apply_overrides,
    format_config,
    load_config,
    parse_assignment,
    save_config,
    valid_keys,
)

__all__ = [
    "KEY_ALIASES",
    "PRESETS",
    "SIMILARITY_BRANCHES",
    "ConfigError",
    "EvalConfig",
    "PipelineConfig",
    "RunConfig",
    "Settings",
    "apply_overrides",
    "format_config",
    "load_config",
    "parse_assignment",
    "save_config",
    "valid_keys",
]
