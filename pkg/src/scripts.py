import sys

from src.cli import run_cli


def _run(command: str) -> None:
    sys.exit(run_cli([command, *sys.argv[1:]]))

def refine(): _run("refine")
def evaluate(): _run("eval")
def sweep(): _run("sweep")
def synth(): _run("synth")
def inspect(): _run("inspect")
