#!/usr/bin/env python3
"""A miniature benchmark grid with records, resumption, and the report.

Runs three optimizers on one task over three seeds, shows that rerunning
reuses the cached records, then aggregates the records directory into rank
tables, pairwise significance, and a text summary (same code path as the
``mixbo run`` / ``mixbo report`` CLI verbs).
"""

from __future__ import annotations

import os
import tempfile

from mixbo.bench.harness import run_grid
from mixbo.bench.report import emit_report

CONFIG = {
    "tasks": ["sfu:ackley:d=5:cat=4"],
    "optimizers": [
        {"model": "gp_to", "acq": "ei", "acq_opt": "ls", "tr": "basic"},
        {"baseline": "rs"},
        {"baseline": "ga"},
    ],
    "seeds": "0..2",
    "budget": 25,
    "n_init": 8,
}


def main() -> None:
    root = tempfile.mkdtemp(prefix="mixbo_demo_")
    records = os.path.join(root, "runs")
    report = os.path.join(root, "report")

    summary = run_grid(CONFIG, records)
    print(f"first pass : ran {summary['ran']}, cached {summary['cached']}")
    summary = run_grid(CONFIG, records)
    print(f"second pass: ran {summary['ran']}, cached {summary['cached']} "
          "(records fingerprint-matched)")

    written = emit_report(records, report)
    print("\nreport files:")
    for path in written:
        print("  ", os.path.relpath(path, root))

    print("\n" + open(os.path.join(report, "summary.txt")).read())
    print(f"(everything under {root})")


if __name__ == "__main__":
    main()
