"""Command-line entry point for the benchmark harness.

Verbs: ``run`` executes a (task x optimizer x seed) grid from a JSON config,
``report`` aggregates a records directory into CSV tables (and optional SVG
plots), ``probe-fit`` runs the model-fit/performance probe, ``list-tasks``
and ``list-optimizers`` print the registries.  The OUTPUT_ROOT_ENV variable
supplies a default output root when --out is omitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..engine import list_optimizer_ids
from ..tasks import list_task_ids
from .harness import fit_quality_probe, parse_seed_spec, probe_correlation, run_grid
from .report import emit_report

OUTPUT_ROOT_ENV = "MIXBO_OUT_ROOT"


def _default_out(subdir: str) -> str:
    root = os.environ.get(OUTPUT_ROOT_ENV, "mixbo_out")
    return os.path.join(root, subdir)


def _cmd_run(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    out = args.out or _default_out("runs")
    summary = run_grid(payload, out, workers=args.workers)
    print(f"records: {summary['records_dir']}")
    print(f"ran {summary['ran']} runs, reused {summary['cached']} cached")
    return 0


def _cmd_report(args) -> int:
    out = args.out or _default_out("report")
    correction = None if args.uncorrected else "holm"
    written = emit_report(
        args.records, out, alpha=args.alpha, correction=correction, plots=args.plots
    )
    for path in written:
        print(path)
    return 0


def _cmd_probe_fit(args) -> int:
    kernels = tuple(k.strip() for k in args.kernels.split(",") if k.strip())
    rows = fit_quality_probe(
        args.task,
        parse_seed_spec(args.seeds),
        kernels=kernels,
        budget=args.budget,
        n_init=args.n_init,
        train_frac=args.train_frac,
    )
    out = args.out or _default_out("probe")
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "probe.csv")
    header = ["task", "kernel", "seed", "heldout_loglik", "improvement", "final_best"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(row[h]) if isinstance(row[h], float) else str(row[h]) for h in header))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(path)
    if len(rows) >= 2:
        print(f"pooled pearson(loglik, improvement) = {probe_correlation(rows):.6f}")
    else:
        print("pooled pearson(loglik, improvement) = n/a (single run)")
    return 0


def _cmd_list_tasks(_args) -> int:
    for task_id in list_task_ids():
        print(task_id)
    print("# grammar: sfu:<fn>[:d=N][:cat=K][:cont=M] for synthetic mixed variants")
    return 0


def _cmd_list_optimizers(_args) -> int:
    print(json.dumps(list_optimizer_ids(), indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixbo", description="benchmark harness for mixed-variable optimizers"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a benchmark grid from a JSON config")
    p.add_argument("--config", required=True, help="experiment config JSON file")
    p.add_argument("--out", default=None, help=f"records directory (default ${OUTPUT_ROOT_ENV}/runs)")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("report", help="aggregate records into CSV tables")
    p.add_argument("--records", required=True, help="records directory")
    p.add_argument("--out", default=None, help=f"report directory (default ${OUTPUT_ROOT_ENV}/report)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--plots", action="store_true", help="also render SVG plots (needs matplotlib)")
    p.add_argument("--uncorrected", action="store_true", help="skip the Holm correction")
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("probe-fit", help="held-out fit quality vs BO improvement probe")
    p.add_argument("--task", required=True)
    p.add_argument("--seeds", required=True, help='seed spec, e.g. "0..9" or "0,1,5"')
    p.add_argument("--kernels", default="o,to,hed")
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--n-init", type=int, default=20, dest="n_init")
    p.add_argument("--train-frac", type=float, default=0.75, dest="train_frac")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_probe_fit)

    p = sub.add_parser("list-tasks", help="print registered task ids")
    p.set_defaults(fn=_cmd_list_tasks)

    p = sub.add_parser("list-optimizers", help="print optimizer registries")
    p.set_defaults(fn=_cmd_list_optimizers)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
