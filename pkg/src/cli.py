"""
Command-line runner: refine, evaluate, sweep, synthesize and inspect.
Usage: uv run linerefine <command> [--ply cloud.ply] [--segments lines.txt] [--set key=value ...]

Exit codes: 0 success, 1 invalid input or configuration, 2 unreadable input or unwritable output.
"""
import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src.config import ConfigError, RunConfig, Settings, load_config, parse_assignment, save_config
from src.evaluation import compare_reports, evaluate, radius_sweep
from src.formats import (
    format_value,
    load_ply,
    load_segments,
    read_segment_file,
    save_report,
    save_segments,
)
from src.geometry import BoundingBox, Segment
from src.refinement import build_scene_tree, refine
from src.spatial import GaussianCloud
from src.synth import (
    DefectSpec,
    SceneParams,
    cube_wireframe,
    generate_scene,
    inject_defects,
    save_manifest,
    save_scene,
)
from src.utils.atomic import write_text_atomic
from src.utils.health import EXIT_IO, EXIT_VALIDATION, HealthReport, run_health_checks
from src.utils.logger import get_logger, new_run_id

_log = get_logger("linerefine")

COMMANDS = ("refine", "eval", "sweep", "synth", "inspect")

# files read by each command, and which of them must be given
_INPUT_FLAGS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "refine": (("ply", "segments", "config"), ("ply", "segments")),
    "eval": (("ply", "segments", "config"), ("ply", "segments")),
    "sweep": (("ply", "segments", "config"), ("ply", "segments")),
    "synth": (("edges",), ()),
    "inspect": (("ply", "segments"), ()),
}


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="Override one config key (repeatable, applied after --config)",
    )
    p.add_argument("--preset", help="Parameter preset applied before --config (abc-nef, scene)")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="Output directory (default: $LINEREFINE_OUTPUT_DIR or results)")
    p.add_argument("--threads", type=int, help="Worker threads (default: $LINEREFINE_THREADS or CPU count)")
    p.add_argument("--seed", type=int, default=0, help="Seed for downsampling and synthesis")


def _add_cloud_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ply", help="Gaussian centers (PLY)")
    p.add_argument(
        "--downsample", type=float, metavar="FRACTION",
        help="Keep a seeded random fraction of the Gaussian centers",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linerefine",
        description="Refine reconstructed 3D line segments against Gaussian-splatting centers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("refine", help="Run the refinement pipeline")
    _add_cloud_flags(p)
    p.add_argument("--segments", help="Input segments (6 floats per line)")
    p.add_argument("--overlap-semantics", choices=("conjunction", "paper-union"))
    p.add_argument("--similarity-branch", choices=("aligned", "paper"))
    p.add_argument("--radius", type=float, help="Evaluation radius for the before/after metrics")
    p.add_argument("--skip-eval", action="store_true", help="Do not compute before/after metrics")
    _add_config_flags(p)
    _add_run_flags(p)

    p = sub.add_parser("eval", help="Evaluate one or more segment sets")
    _add_cloud_flags(p)
    p.add_argument("--segments", nargs="+", help="Segment files; the first is the baseline")
    p.add_argument("--radius", type=float, help="Evaluation radius in meters")
    _add_config_flags(p)
    _add_run_flags(p)

    p = sub.add_parser("sweep", help="Evaluate at several radii")
    _add_cloud_flags(p)
    p.add_argument("--segments", help="Segment file")
    p.add_argument("--radii", help="Comma-separated radii, e.g. 0.01,0.05,0.1")
    _add_config_flags(p)
    _add_run_flags(p)

    p = sub.add_parser("synth", help="Generate a synthetic scene with planted defects")
    p.add_argument("--edges", help="Ground-truth segment file (default: unit cube wireframe)")
    p.add_argument("--cube-size", type=float, default=1.0)
    p.add_argument("--points-per-meter", type=float, default=500.0)
    p.add_argument("--sigma", type=float, default=0.005, help="Isotropic point noise in meters")
    p.add_argument("--background", type=float, default=0.0, help="Fraction of uniform points")
    p.add_argument("--bias", type=float, default=0.0, help="Position bias magnitude in meters")
    p.add_argument("--overextension", type=float, default=0.0, help="Added length fraction")
    p.add_argument("--outliers", type=int, default=0, help="Spurious segments to plant")
    p.add_argument("--duplicates", type=int, default=0, help="Jittered copies per piece")
    p.add_argument("--splits", type=int, default=0, help="Breaks per edge")
    p.add_argument("--gap", type=float, default=0.05, help="Break length in meters")
    p.add_argument("--clearance", type=float, default=0.1, help="Outlier distance to any edge")
    _add_run_flags(p)

    p = sub.add_parser("inspect", help="Print summary statistics of a PLY or segment file")
    p.add_argument("--ply", help="Gaussian centers (PLY)")
    p.add_argument("--segments", help="Segment file")
    p.add_argument("--bins", type=int, default=10, help="Length histogram bins")
    return parser


# --- Helpers -------------------------------------------------------------------

def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, preset, config file, ``--set`` overrides, then the dedicated flags."""
    overrides: dict[str, str] = dict(parse_assignment(item) for item in args.set)
    dedicated = {
        "overlap_semantics": getattr(args, "overlap_semantics", None),
        "similarity_branch": getattr(args, "similarity_branch", None),
        "eval_radius": getattr(args, "radius", None),
        "radius_sweep": getattr(args, "radii", None),
    }
    overrides.update({k: str(v) for k, v in dedicated.items() if v is not None})
    return load_config(args.config, overrides, args.preset)


def _load_cloud(args: argparse.Namespace) -> GaussianCloud:
    cloud = load_ply(args.ply)
    if args.downsample is not None:
        cloud = cloud.downsample(args.downsample, seed=args.seed)
        _log.info("Downsampled cloud", fraction=args.downsample, points=len(cloud))
    return cloud


def _out_dir(args: argparse.Namespace, settings: Settings) -> Path:
    return Path(args.out or settings.output_dir)


def _require_segments(segments: list[Segment], path: str) -> list[Segment]:
    if not segments:
        raise ValueError(f"{path} contains no usable segments")
    return segments


# --- Commands ------------------------------------------------------------------

def cmd_refine(args: argparse.Namespace, config: RunConfig, settings: Settings, threads: int) -> dict[str, Any]:
    cloud = _load_cloud(args)
    segments = _require_segments(load_segments(args.segments), args.segments)
    result = refine(
        segments,
        cloud,
        config.pipeline,
        eval_cfg=None if args.skip_eval else config.evaluation,
        threads=threads,
    )
    out = _out_dir(args, settings)
    save_segments(result.segments, out / "refined_segments.txt")
    save_report(result.report.finalize(), out / "refine_report.txt", config)
    save_config(config, out / "resolved_config.txt")
    print(result.report.get_summary())
    return {"segments_out": len(result.segments), "output_dir": str(out)}


def cmd_eval(args: argparse.Namespace, config: RunConfig, settings: Settings, threads: int) -> dict[str, Any]:
    cloud = _load_cloud(args)
    sets = [_require_segments(load_segments(p), p) for p in args.segments]
    # one box over every set so all reports share the same indexed cloud
    tree = build_scene_tree([s for group in sets for s in group], cloud, config.pipeline)
    out = _out_dir(args, settings)
    reports = [evaluate(group, cloud, tree, config.evaluation) for group in sets]

    names = ["eval_report"] if len(sets) == 1 else [
        f"eval_{i}_{Path(p).stem}" for i, p in enumerate(args.segments)
    ]
    for name, path, report in zip(names, args.segments, reports):
        save_report({"segments_file": path, **report.summary()}, out / f"{name}.txt", config)
        _print_metrics(name, report.summary())

    if len(reports) > 1:
        comparison: dict[str, Any] = {"baseline": args.segments[0]}
        for name, report in zip(names[1:], reports[1:]):
            comparison.update({f"{name}.{k}": v for k, v in compare_reports(reports[0], report).items()})
        save_report(comparison, out / "comparison.txt", config)
        _print_metrics("comparison", comparison)
    return {"reports": len(reports), "output_dir": str(out)}


def cmd_sweep(args: argparse.Namespace, config: RunConfig, settings: Settings, threads: int) -> dict[str, Any]:
    cloud = _load_cloud(args)
    segments = _require_segments(load_segments(args.segments), args.segments)
    tree = build_scene_tree(segments, cloud, config.pipeline)
    out = _out_dir(args, settings)
    rows = radius_sweep(segments, cloud, tree, config.evaluation, threads=threads)
    for radius, report in rows:
        save_report(report.summary(), out / f"sweep_r{radius:.9g}.txt", config)
    table = format_sweep_table(rows)
    write_text_atomic(out / "sweep_summary.txt", table)
    print(table, end="")
    return {"radii": len(rows), "output_dir": str(out)}


def format_sweep_table(rows: Sequence[tuple[float, Any]]) -> str:
    header = f"{'radius_m':>10} {'e_rms_cm':>10} {'r_covered_pct':>14} {'r_l':>10} {'score':>10}"
    lines = [header]
    for radius, report in rows:
        r_l = "-" if report.r_l is None else f"{report.r_l:.4f}"
        score = "-" if report.score is None else f"{report.score:.4f}"
        lines.append(
            f"{radius:>10.4f} {report.e_rms_cm:>10.4f} {report.r_covered_pct:>14.4f} "
            f"{r_l:>10} {score:>10}"
        )
    return "\n".join(lines) + "\n"


def cmd_synth(args: argparse.Namespace, config: RunConfig, settings: Settings, threads: int) -> dict[str, Any]:
    edges = (
        _require_segments(load_segments(args.edges), args.edges) if args.edges
        else cube_wireframe(args.cube_size)
    )
    params = SceneParams(
        points_per_meter=args.points_per_meter,
        noise_sigma=args.sigma,
        background_fraction=args.background,
    )
    spec = DefectSpec(
        position_bias=args.bias,
        overextension=args.overextension,
        outliers=args.outliers,
        duplication=args.duplicates,
        discontinuity=args.splits,
        discontinuity_gap=args.gap,
        outlier_clearance=args.clearance,
    )
    scene = generate_scene(edges, params, seed=args.seed)
    injected = inject_defects(edges, spec, seed=args.seed)
    out = _out_dir(args, settings)
    save_scene(scene, out)
    save_segments(injected.segments, out / "segments.txt")
    save_manifest(injected.manifest, out / "manifest.txt")
    details = {
        "seed": args.seed,
        "edges": len(edges),
        "points": len(scene.cloud),
        "segments": len(injected.segments),
        "points_per_meter": params.points_per_meter,
        "noise_sigma": params.noise_sigma,
        "background_fraction": params.background_fraction,
        **{f"defect.{k}": v for k, v in vars(spec).items()},
    }
    save_report(details, out / "scene.txt")
    _print_metrics("synth", details)
    return {"segments": len(injected.segments), "output_dir": str(out)}


def cmd_inspect(args: argparse.Namespace) -> dict[str, Any]:
    if bool(args.ply) == bool(args.segments):
        raise ValueError("inspect needs exactly one of --ply or --segments")
    if args.bins < 1:
        raise ValueError("--bins must be >= 1")
    if args.ply:
        cloud = load_ply(args.ply)
        info: dict[str, Any] = {"points": len(cloud)}
        if cloud.bbox is not None:
            info["bbox_min"] = cloud.bbox.lo
            info["bbox_max"] = cloud.bbox.hi
        _print_metrics(args.ply, info)
        return info

    parsed = read_segment_file(args.segments)
    info = {"segments": len(parsed.segments), "skipped": parsed.skipped}
    box = BoundingBox.of_segments(parsed.segments)
    if box is None:
        _print_metrics(args.segments, info)
        return info
    lengths = np.array([s.length for s in parsed.segments])
    info.update(
        bbox_min=box.lo,
        bbox_max=box.hi,
        total_length=float(lengths.sum()),
        min_length=float(lengths.min()),
        max_length=float(lengths.max()),
    )
    _print_metrics(args.segments, info)
    print(format_length_histogram(lengths, args.bins), end="")
    return info


def format_length_histogram(lengths: np.ndarray, bins: int = 10, width: int = 40) -> str:
    counts, edges = np.histogram(lengths, bins=bins)
    peak = max(int(counts.max()), 1)
    lines = []
    for count, lo, hi in zip(counts, edges[:-1], edges[1:]):
        bar = "#" * int(round(width * int(count) / peak))
        lines.append(f"  [{lo:9.4f}, {hi:9.4f}) {int(count):>7} {bar}")
    return "\n".join(lines) + "\n"


def _print_metrics(title: str, values: dict[str, Any]) -> None:
    print(f"{title}:")
    for key, value in values.items():
        print(f"  {key} = {format_value(value)}")


_HANDLERS = {
    "refine": cmd_refine,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
}


def _preflight(args: argparse.Namespace, settings: Settings, threads: int | None) -> HealthReport:
    flags, required = _INPUT_FLAGS[args.command]
    inputs: dict[str, str | None] = {}
    for flag in flags:
        value = getattr(args, flag, None)
        if isinstance(value, list):
            inputs.update({f"{flag}[{i}]": v for i, v in enumerate(value)})
        else:
            inputs[flag] = value
    missing = tuple(flag for flag in required if not getattr(args, flag, None))
    out = None if args.command == "inspect" else str(_out_dir(args, settings))
    return run_health_checks(args.command, inputs, output_dir=out, threads=threads, missing=missing)


# --- CLI entry point -------------------------------------------------------------

def run_cli(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and return its exit code."""
    args = build_parser().parse_args(argv)
    rid = new_run_id()

    try:
        # .env is loaded before the first log line
        settings = Settings.from_env()
    except ConfigError as exc:
        _log.error(f"Invalid environment settings: {exc}")
        return EXIT_VALIDATION
    _log.info(f"Starting {args.command}", run_id=rid)

    requested = getattr(args, "threads", None)
    threads = settings.threads if requested is None else requested
    health = _preflight(args, settings, None if args.command == "inspect" else threads)
    _log.info("Health check results:\n" + health.summary())
    if not health.ok:
        _log.error("Pre-flight checks failed, aborting", exit_code=health.exit_code)
        return health.exit_code

    try:
        if args.command == "inspect":
            cmd_inspect(args)
        else:
            config = resolve_config(args) if hasattr(args, "set") else RunConfig()
            summary = _HANDLERS[args.command](args, config, settings, threads)
            _log.info(f"Finished {args.command}", **summary)
    except OSError as exc:
        _log.error(f"{args.command} failed: {exc}")
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        _log.error(f"{args.command} failed: {exc}")
        return EXIT_VALIDATION
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":  # pragma: no cover
    main()
