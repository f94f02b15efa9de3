"""
File formats: PLY point clouds, segment text files and report files.
"""
from .ply import PlyFormatError, load_ply, parse_ply, save_ply, scan_header
from .reports import format_report, format_value, load_report, save_report
from .segments import (
    SegmentFile,
    SegmentFileError,
    format_segments,
    load_segments,
    parse_segments,
    read_segment_file,
    save_segments,
)

__all__ = [
    "PlyFormatError",
    "SegmentFile",
    "SegmentFileError",
    "format_report",
    "format_segments",
    "format_value",
    "load_ply",
    "load_report",
    "load_segments",
    "parse_ply",
    "parse_segments",
    "read_segment_file",
    "save_ply",
    "save_report",
    "save_segments",
    "scan_header",
]
