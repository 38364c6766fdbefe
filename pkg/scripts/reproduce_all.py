#!/usr/bin/env python3
"""Regenerate every data artifact (figure CSVs and the amplitude table)
into results/, one subdirectory per command."""

import sys
from pathlib import Path

from lambda_sta.cli import main

RUNS = [
    ("design", ["design", "--m", "1"]),
    ("fit", ["fit", "--m", "1"]),
    ("fig1", ["fig1"]),
    ("fig2", ["fig2"]),
    ("fig3", ["fig3"]),
    ("fig4", ["fig4"]),
    ("fig5", ["fig5", "--grid", "21"]),
    ("table1", ["table1", "--max-m", "7"]),
]


def run_all(root="results"):
    for name, argv in RUNS:
        outdir = Path(root) / name
        print(f"== {name} -> {outdir}")
        status = main(["--outdir", str(outdir), *argv])
        if status != 0:
            return status
    return 0


if __name__ == "__main__":
    sys.exit(run_all(*sys.argv[1:]))
