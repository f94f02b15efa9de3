"""
Report files: a flat ``key = value`` text file plus a JSON twin with the same keys.

Floats are written with 9 significant digits in the text file. The resolved run
configuration is echoed under ``config.*`` keys.
"""
import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from src.config import RunConfig
from src.utils.atomic import write_text_atomic


def format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, tuple):
        return list(value)
    return value


def with_config(values: Mapping[str, Any], config: RunConfig | None) -> dict[str, Any]:
    out = dict(values)
    if config is not None:
        out.update({f"config.{k}": v for k, v in config.as_dict().items()})
    return out


def format_report(values: Mapping[str, Any]) -> str:
    return "".join(f"{key} = {format_value(value)}\n" for key, value in values.items())


def save_report(
    values: Mapping[str, Any], path: str | Path, config: RunConfig | None = None
) -> tuple[Path, Path]:
    """Write ``path`` (text) and ``path`` with a ``.json`` suffix; returns both paths."""
    merged = with_config(values, config)
    text_path = Path(path)
    json_path = text_path.with_suffix(".json")
    write_text_atomic(text_path, format_report(merged))
    payload = {k: _json_value(v) for k, v in merged.items()}
    write_text_atomic(json_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return text_path, json_path


def load_report(path: str | Path) -> dict[str, Any]:
    """Read the JSON twin of a report written by ``save_report``."""
    target = Path(path)
    if target.suffix != ".json":
        target = target.with_suffix(".json")
    return json.loads(target.read_text(encoding="utf-8"))
