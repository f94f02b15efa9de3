"""
Plain-text segment files: six whitespace-separated floats ``ax ay az bx by bz`` per line, meters.
Blank lines and lines starting with ``#`` are ignored.
"""
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from src.geometry import DegenerateSegmentError, Segment
from src.utils.atomic import write_text_atomic
from src.utils.logger import get_logger

_log = get_logger("segments")


class SegmentFileError(ValueError):
    """Unparseable segment record; ``line_number`` is 1-based."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class SegmentFile:
    segments: list[Segment] = field(default_factory=list)
    skipped: int = 0


def parse_segments(data: bytes | str) -> SegmentFile:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SegmentFileError("not valid UTF-8 text", data[: exc.start].count(b"\n") + 1) from None
    else:
        text = data

    segments: list[Segment] = []
    skipped = 0
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.strip()
        if not content or content.startswith("#"):
            continue
        fields = content.split()
        if len(fields) != 6:
            raise SegmentFileError(f"expected 6 values, got {len(fields)}", number)
        try:
            values = [float(v) for v in fields]
        except ValueError:
            raise SegmentFileError(f"not a number in {content!r}", number) from None
        if not all(math.isfinite(v) for v in values):
            raise SegmentFileError("non-finite coordinate", number)
        try:
            segments.append(Segment(tuple(values[:3]), tuple(values[3:])))  # type: ignore[arg-type]
        except DegenerateSegmentError:
            skipped += 1
    return SegmentFile(segments, skipped)


def read_segment_file(path: str | Path) -> SegmentFile:
    parsed = parse_segments(Path(path).read_bytes())
    if parsed.skipped:
        _log.warning("Skipped zero-length segments", path=str(path), count=parsed.skipped)
    return parsed


def load_segments(path: str | Path) -> list[Segment]:
    """Segments of the file at ``path`` in file order; zero-length records are skipped."""
    return read_segment_file(path).segments


def format_segments(segments: Iterable[Segment]) -> str:
    return "".join(" ".join(f"{v:.9g}" for v in s.as_row()) + "\n" for s in segments)


def save_segments(segments: Iterable[Segment], path: str | Path) -> Path:
    return write_text_atomic(path, format_segments(segments))
