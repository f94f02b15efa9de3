"""Structured logger with run ID support."""
import os
import sys
import uuid
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any

UTC = timezone.utc  # datetime.UTC alias (3.11+)

_run_id: ContextVar[str] = ContextVar("run_id", default="")

LOG_LEVEL_ENV = "LINEREFINE_LOG_LEVEL"


def new_run_id() -> str:
    rid = uuid.uuid4().hex[:8]
    _run_id.set(rid)
    return rid


def get_run_id() -> str:
    return _run_id.get()


class StructuredLogger:
    """Emits consistent, parseable lines: timestamp, level, name, run id, message, extras."""

    LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40, "CRITICAL": 50}

    def __init__(self, name: str, min_level: str | None = None):
        """``min_level`` None follows ``LINEREFINE_LOG_LEVEL`` as it is when each line is emitted."""
        self.name = name
        self._fixed = min_level

    @property
    def min_level(self) -> int:
        level = self._fixed if self._fixed is not None else os.getenv(LOG_LEVEL_ENV, "INFO")
        return self.LEVELS.get(level.upper(), 20)

    def enabled_for(self, level: str) -> bool:
        return self.LEVELS.get(level.upper(), 0) >= self.min_level

    def _emit(self, level: str, message: str, **extra: Any) -> None:
        if not self.enabled_for(level):
            return
        now = datetime.now(UTC).strftime("%Y-%m-%dT%H:%M:%S")
        rid = get_run_id()
        parts = [f"[{now}]", f"[{level}]", f"[{self.name}]"]
        if rid:
            parts.append(f"[run:{rid}]")
        parts.append(message)
        if extra:
            kv = " ".join(f"{k}={_format_value(v)}" for k, v in extra.items())
            parts.append(f"| {kv}")
        stream = sys.stderr if level in ("ERROR", "CRITICAL") else sys.stdout
        print(" ".join(parts), file=stream)

    def debug(self, msg: str, **kw: Any) -> None:
        self._emit("DEBUG", msg, **kw)

    def info(self, msg: str, **kw: Any) -> None:
        self._emit("INFO", msg, **kw)

    def warning(self, msg: str, **kw: Any) -> None:
        self._emit("WARNING", msg, **kw)

    def error(self, msg: str, **kw: Any) -> None:
        self._emit("ERROR", msg, **kw)

    def critical(self, msg: str, **kw: Any) -> None:
        self._emit("CRITICAL", msg, **kw)


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return repr(value)


def get_logger(name: str) -> StructuredLogger:
    return StructuredLogger(name)
