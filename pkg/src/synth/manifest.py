"""
Defect manifest: one line ``index edge_id defect...`` per injected segment.

``edge_id`` is the ground-truth edge index, ``-1`` for planted outliers. Defect tokens are
``position_bias``, ``overextension:start|end``, ``piece:k/n``, ``duplicate:k`` and ``outlier``.
"""
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

from src.utils.atomic import write_text_atomic

OUTLIER_EDGE = -1


@dataclass(frozen=True)
class ManifestEntry:
    index: int
    edge_id: int
    defects: tuple[str, ...] = ()

    @property
    def is_outlier(self) -> bool:
        return self.edge_id == OUTLIER_EDGE

    def has(self, defect: str) -> bool:
        return any(token.split(":", 1)[0] == defect for token in self.defects)


def format_manifest(entries: Iterable[ManifestEntry]) -> str:
    lines = ["# index edge_id defects..."]
    for e in entries:
        lines.append(" ".join([str(e.index), str(e.edge_id), *e.defects]))
    return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> list[ManifestEntry]:
    entries = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.strip()
        if not content or content.startswith("#"):
            continue
        words = content.split()
        if len(words) < 2:
            raise ValueError(f"manifest line {number}: expected 'index edge_id defects...'")
        try:
            entries.append(ManifestEntry(int(words[0]), int(words[1]), tuple(words[2:])))
        except ValueError:
            raise ValueError(f"manifest line {number}: index and edge_id must be integers") from None
    return entries


def save_manifest(entries: Iterable[ManifestEntry], path: str | Path) -> Path:
    return write_text_atomic(path, format_manifest(entries))


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))
