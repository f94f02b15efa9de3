"""
PLY reader/writer for Gaussian centers.

Only the ``x``/``y``/``z`` float properties of the ``vertex`` element are read; every other
property of a splatting export (normals, SH coefficients, opacity, scale, rotation) is ignored.
The header is scanned before decoding so problems are reported with a byte offset.
"""
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from plyfile import PlyData, PlyElement

from src.spatial import GaussianCloud
from src.utils.atomic import atomic_open
from src.utils.logger import get_logger

_log = get_logger("ply")

SUPPORTED_FORMATS = ("ascii", "binary_little_endian")
_FLOAT_TYPES = {"float", "float32", "double", "float64"}


class PlyFormatError(ValueError):
    """Unreadable PLY content; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class PlyHeader:
    format: str
    vertex_count: int
    body_offset: int


def scan_header(data: bytes) -> PlyHeader:
    """Validate the header grammar, encoding and vertex layout of ``data``."""
    if not data.startswith(b"ply"):
        raise PlyFormatError("missing 'ply' magic", 0)
    end = data.find(b"end_header")
    if end < 0:
        raise PlyFormatError("header has no end_header line", len(data))
    newline = data.find(b"\n", end)
    body = len(data) if newline < 0 else newline + 1

    fmt: str | None = None
    vertex_count: int | None = None
    in_vertex = False
    props: dict[str, tuple[str, int]] = {}
    offset = 0
    for raw in data[:body].splitlines(keepends=True):
        words = raw.decode("ascii", errors="replace").split()
        keyword = words[0] if words else ""
        if keyword == "format":
            fmt = words[1] if len(words) > 1 else ""
            if fmt == "binary_big_endian":
                raise PlyFormatError("binary big-endian PLY is not supported", offset)
            if fmt not in SUPPORTED_FORMATS:
                raise PlyFormatError(f"unsupported PLY format {fmt!r}", offset)
        elif keyword == "element":
            in_vertex = len(words) > 1 and words[1] == "vertex"
            if in_vertex:
                try:
                    vertex_count = int(words[2])
                except (IndexError, ValueError):
                    raise PlyFormatError("vertex element has no valid count", offset) from None
                if vertex_count < 0:
                    raise PlyFormatError("vertex count is negative", offset)
        elif keyword == "property" and in_vertex and len(words) >= 3:
            if words[1] == "list":
                props[words[-1]] = ("list", offset)
            else:
                props[words[2]] = (words[1], offset)
        offset += len(raw)

    if fmt is None:
        raise PlyFormatError("header has no format line", 0)
    if vertex_count is None:
        raise PlyFormatError("header declares no vertex element", end)
    for axis in "xyz":
        if axis not in props:
            raise PlyFormatError(f"vertex element has no '{axis}' property", end)
        kind, where = props[axis]
        if kind not in _FLOAT_TYPES:
            raise PlyFormatError(f"vertex property '{axis}' must be float, got {kind}", where)
    return PlyHeader(fmt, vertex_count, body)


def parse_ply(data: bytes) -> GaussianCloud:
    header = scan_header(data)
    try:
        ply = PlyData.read(io.BytesIO(data))
        vertex = ply["vertex"]
        points = np.column_stack(
            [np.asarray(vertex[axis], dtype=np.float64) for axis in "xyz"]
        ).reshape(-1, 3)
    except Exception as exc:
        raise PlyFormatError(f"malformed PLY body: {exc}", header.body_offset) from exc
    if points.shape[0] != header.vertex_count:
        raise PlyFormatError(
            f"expected {header.vertex_count} vertices, parsed {points.shape[0]}",
            header.body_offset,
        )
    finite = np.isfinite(points).all(axis=1)
    dropped = int((~finite).sum())
    if dropped:
        _log.warning("Dropped non-finite points", count=dropped, total=header.vertex_count)
        points = points[finite]
    return GaussianCloud(points)


def load_ply(path: str | Path) -> GaussianCloud:
    """Read Gaussian centers from an ASCII or binary little-endian PLY file."""
    data = Path(path).read_bytes()
    cloud = parse_ply(data)
    _log.info("Loaded point cloud", path=str(path), points=len(cloud))
    return cloud


def save_ply(cloud: GaussianCloud, path: str | Path, binary: bool = True) -> Path:
    """Write ``cloud`` as double-precision ``x``/``y``/``z`` vertices."""
    vertices = np.empty(len(cloud), dtype=[("x", "<f8"), ("y", "<f8"), ("z", "<f8")])
    for i, axis in enumerate("xyz"):
        vertices[axis] = cloud.points[:, i]
    element = PlyElement.describe(vertices, "vertex")
    with atomic_open(path, binary=True) as fh:
        PlyData([element], text=not binary, byte_order="<").write(fh)
    return Path(path)
