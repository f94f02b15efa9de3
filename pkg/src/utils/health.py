"""Pre-flight checks before a command touches any data."""
from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

EXIT_VALIDATION = 1
EXIT_IO = 2


@dataclass
class HealthReport:
    passed: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    io_errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and not self.io_errors

    @property
    def exit_code(self) -> int:
        if self.io_errors:
            return EXIT_IO
        return EXIT_VALIDATION if self.errors else 0

    def summary(self) -> str:
        lines = []
        for p in self.passed:
            lines.append(f"  ✅ {p}")
        for w in self.warnings:
            lines.append(f"  ⚠️  {w}")
        for e in [*self.io_errors, *self.errors]:
            lines.append(f"  ❌ {e}")
        return "\n".join(lines)


def run_health_checks(
    command: str,
    inputs: Mapping[str, str | None],
    output_dir: str | None = None,
    threads: int | None = None,
    missing: tuple[str, ...] = (),
) -> HealthReport:
    """Check input files and the output directory; ``missing`` lists absent required flags."""
    report = HealthReport()

    for flag in missing:
        report.errors.append(f"{command}: --{flag} is required")

    for flag, value in inputs.items():
        if not value:
            continue
        path = Path(value)
        if not path.exists():
            report.io_errors.append(f"--{flag}: {path} does not exist")
        elif not path.is_file():
            report.io_errors.append(f"--{flag}: {path} is not a file")
        elif not os.access(path, os.R_OK):
            report.io_errors.append(f"--{flag}: {path} is not readable")
        else:
            report.passed.append(f"--{flag}: {path}")

    if output_dir is not None:
        out = Path(output_dir)
        if out.exists() and not out.is_dir():
            report.io_errors.append(f"output path {out} exists and is not a directory")
        elif out.exists() and not os.access(out, os.W_OK):
            report.io_errors.append(f"output directory {out} is not writable")
        else:
            report.passed.append(f"output directory: {out}")

    if threads is not None:
        cpus = os.cpu_count() or 1
        if threads < 1:
            report.errors.append(f"--threads must be >= 1, got {threads}")
        elif threads > cpus:
            report.warnings.append(f"{threads} threads requested, {cpus} CPUs available")

    return report
