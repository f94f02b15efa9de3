"""
Refinement and evaluation settings, the ``key = value`` config file, and environment settings.
"""
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from src.geometry import OVERLAP_SEMANTICS

SIMILARITY_BRANCHES = ("aligned", "paper")

OUTPUT_DIR_ENV = "LINEREFINE_OUTPUT_DIR"
THREADS_ENV = "LINEREFINE_THREADS"
DEFAULT_OUTPUT_DIR = "results"


class ConfigError(ValueError):
    """Invalid configuration key or value."""


def _parse_positive_int(value: str | None, default: int, env_name: str) -> int:
    """Parse a positive integer env var value or raise a clear validation error."""
    if value is None:
        return default

    try:
        parsed = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{env_name} must be a positive integer") from exc

    if parsed <= 0:
        raise ConfigError(f"{env_name} must be a positive integer")
    return parsed


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the refinement stages. Lengths in meters."""

    working_radius: float = 0.05
    outlier_scaler: float = 0.02
    # 1/m^2; None resolves to 2 / working_radius**2
    similarity_weight: float | None = None
    cluster_c: float = 0.25
    crop_max_iters: int = 10
    crop_min_interval: float = 1e-4
    crop_window_fraction: float = 0.25
    crop_probe_fraction: float = 0.02
    # expected dense-side points in the probe; lengthens it on short or sparse segments
    crop_probe_min_points: int = 16
    crop_density_ratio: float = 0.5
    merge_gap_density_factor: float = 1.0
    overlap_semantics: str = "conjunction"
    similarity_branch: str = "aligned"
    octree_depth: int = 10
    leaf_capacity: int = 32
    bbox_padding: float = 0.10
    max_merge_sweeps: int = 10

    @property
    def lambda_sim(self) -> float:
        if self.similarity_weight is not None:
            return self.similarity_weight
        return 2.0 / (self.working_radius * self.working_radius)

    def validate(self) -> "PipelineConfig":
        _require(self.working_radius > 0, "working_radius must be > 0")
        _require(0 < self.outlier_scaler <= 1, "outlier_scaler (xi) must be in (0, 1]")
        _require(
            self.similarity_weight is None or self.similarity_weight > 0,
            "similarity_weight must be > 0",
        )
        _require(self.cluster_c > 0, "cluster_c must be > 0")
        _require(self.crop_max_iters >= 1, "crop_max_iters must be >= 1")
        _require(self.crop_min_interval > 0, "crop_min_interval must be > 0")
        _require(0 < self.crop_window_fraction <= 0.5, "crop_window_fraction must be in (0, 0.5]")
        _require(0 < self.crop_probe_fraction <= 0.5, "crop_probe_fraction must be in (0, 0.5]")
        _require(self.crop_probe_min_points >= 1, "crop_probe_min_points must be >= 1")
        _require(0 < self.crop_density_ratio < 1, "crop_density_ratio must be in (0, 1)")
        _require(self.merge_gap_density_factor >= 0, "merge_gap_density_factor must be >= 0")
        _require(
            self.overlap_semantics in OVERLAP_SEMANTICS,
            f"overlap_semantics must be one of: {', '.join(OVERLAP_SEMANTICS)}",
        )
        _require(
            self.similarity_branch in SIMILARITY_BRANCHES,
            f"similarity_branch must be one of: {', '.join(SIMILARITY_BRANCHES)}",
        )
        _require(self.octree_depth >= 1, "octree_depth must be >= 1")
        _require(self.leaf_capacity >= 1, "leaf_capacity must be >= 1")
        _require(self.bbox_padding >= 0, "bbox_padding must be >= 0")
        _require(self.max_merge_sweeps >= 1, "max_merge_sweeps must be >= 1")
        return self


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation radius, score scaler and the radii of a sweep."""

    eval_radius: float = 0.10
    score_scaler: float = 1.0
    radius_sweep: tuple[float, ...] = (0.01, 0.02, 0.05, 0.10)

    def validate(self) -> "EvalConfig":
        _require(self.eval_radius > 0, "eval_radius must be > 0")
        _require(self.score_scaler > 0, "score_scaler must be > 0")
        _require(len(self.radius_sweep) >= 1, "radius_sweep needs at least one radius")
        _require(all(r > 0 for r in self.radius_sweep), "radius_sweep radii must be > 0")
        _require(
            all(a < b for a, b in zip(self.radius_sweep, self.radius_sweep[1:])),
            "radius_sweep radii must be strictly increasing",
        )
        return self


@dataclass(frozen=True)
class RunConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    evaluation: EvalConfig = field(default_factory=EvalConfig)

    def validate(self) -> "RunConfig":
        self.pipeline.validate()
        self.evaluation.validate()
        return self

    def as_dict(self) -> dict[str, Any]:
        """Resolved key/value view; ``similarity_weight`` shows its effective value."""
        out: dict[str, Any] = {}
        for section in (self.pipeline, self.evaluation):
            for f in fields(section):
                out[f.name] = getattr(section, f.name)
        out["similarity_weight"] = self.pipeline.lambda_sim
        return out


# short names accepted in config files and --set
KEY_ALIASES: dict[str, str] = {
    "r": "working_radius",
    "xi": "outlier_scaler",
    "lambda_sim": "similarity_weight",
    "lambda": "score_scaler",
}

PRESETS: dict[str, dict[str, str]] = {
    "abc-nef": {"working_radius": "0.03", "score_scaler": "0.1"},
    "scene": {"working_radius": "0.05", "score_scaler": "1.0"},
}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def valid_keys() -> list[str]:
    return sorted(f.name for f in (*fields(PipelineConfig), *fields(EvalConfig)))


def _coerce(key: str, raw: str, annotation: Any) -> Any:
    text = raw.strip()
    try:
        if key == "radius_sweep":
            return tuple(float(part) for part in text.split(",") if part.strip())
        if key == "similarity_weight":
            return None if text.lower() in ("", "none", "auto") else float(text)
        if annotation is int or annotation == "int":
            return int(text)
        if annotation is float or annotation == "float":
            return float(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key}: {raw!r}") from exc


def apply_overrides(config: RunConfig, overrides: dict[str, str]) -> RunConfig:
    """Return a copy of ``config`` with string ``overrides`` parsed and applied."""
    pipeline_fields = {f.name: f for f in fields(PipelineConfig)}
    eval_fields = {f.name: f for f in fields(EvalConfig)}
    pipeline_updates: dict[str, Any] = {}
    eval_updates: dict[str, Any] = {}
    for name, raw in overrides.items():
        key = KEY_ALIASES.get(name, name)
        if key in pipeline_fields:
            pipeline_updates[key] = _coerce(key, raw, pipeline_fields[key].type)
        elif key in eval_fields:
            eval_updates[key] = _coerce(key, raw, eval_fields[key].type)
        else:
            raise ConfigError(f"unknown config key {key!r}; valid keys: {', '.join(valid_keys())}")
    return RunConfig(
        replace(config.pipeline, **pipeline_updates),
        replace(config.evaluation, **eval_updates),
    )


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    entries: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"line {number}: expected 'key = value', got {line.strip()!r}")
        key, value = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigError(f"line {number}: empty key")
        entries[key] = value
    return entries


def load_config(
    path: str | Path | None = None,
    overrides: dict[str, str] | None = None,
    preset: str | None = None,
) -> RunConfig:
    """Resolve defaults, then ``preset``, then the file at ``path``, then ``overrides``."""
    config = RunConfig()
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; valid presets: {', '.join(PRESETS)}")
        config = apply_overrides(config, PRESETS[preset])
    if path is not None:
        config = apply_overrides(config, parse_config_text(Path(path).read_text(encoding="utf-8")))
    if overrides:
        config = apply_overrides(config, overrides)
    return config.validate()


def format_config(config: RunConfig) -> str:
    """Render every field as ``key = value``; ``load_config`` reads it back unchanged."""
    lines = []
    for section in (config.pipeline, config.evaluation):
        for f in fields(section):
            value = getattr(section, f.name)
            if value is None:
                text = "auto"
            elif isinstance(value, tuple):
                text = ",".join(f"{v:.9g}" for v in value)
            elif isinstance(value, float):
                text = f"{value:.9g}"
            else:
                text = str(value)
            lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> tuple[str, str]:
    """Split a ``--set key=value`` argument."""
    if "=" not in text:
        raise ConfigError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


@dataclass
class Settings:
    """
    Process-level settings taken from the environment.
    """
    output_dir: str = DEFAULT_OUTPUT_DIR
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Create settings from environment variables (``.env`` is honoured).

        Returns:
            Settings instance populated from environment
        """
        load_dotenv()
        return cls(
            output_dir=os.getenv(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR).strip() or DEFAULT_OUTPUT_DIR,
            threads=_parse_positive_int(os.getenv(THREADS_ENV), os.cpu_count() or 1, THREADS_ENV),
        )


def save_config(config: RunConfig, path: str | Path) -> Path:
    from src.utils.atomic import write_text_atomic

    return write_text_atomic(path, format_config(config))
