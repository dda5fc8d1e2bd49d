"""Report emission: deterministic CSV/text tables and optional SVG plots.

Everything written here is a pure function of the record files: floats are
serialized with repr (shortest round-trip form), rows are sorted, and plots
(opt-in, needs matplotlib) pin the SVG hash salt and strip the date metadata
so re-emission is byte-identical.
"""

from __future__ import annotations

import os

import numpy as np

from .records import load_records
from .stats import friedman_test, pairwise_significance, rank_curves

REPORT_FACETS = ("optimizer", "model", "acq_opt", "tr")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _facet_applicable(records, facet: str) -> bool:
    if facet == "optimizer":
        return True
    return all(
        r["optimizer_id"].startswith("baseline-") or r["optimizer_id"].count("-") == 3
        for r in records
    )


def emit_report(
    records,
    out_dir: str,
    alpha: float = 0.05,
    correction: str | None = "holm",
    plots: bool = False,
) -> list[str]:
    """Write traces, rank curves per facet, significance matrix, summary.

    ``records`` is a directory path or a pre-loaded record list.  Returns the
    paths written.  ``plots=True`` additionally renders SVG rank curves.
    """
    if isinstance(records, (str, os.PathLike)):
        records = load_records(str(records))
    if not records:
        raise ValueError("no records to report on")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    rows = []
    for rec in records:
        for row, best in zip(rec["iterations"], rec["best"]):
            rows.append(
                [rec["task_id"], rec["optimizer_id"], rec["seed"], row["i"], row["y"], best]
            )
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    path = os.path.join(out_dir, "traces.csv")
    _write_csv(path, ["task", "optimizer", "seed", "iter", "y", "best"], rows)
    written.append(path)

    tables = {}
    for facet in REPORT_FACETS:
        if not _facet_applicable(records, facet):
            continue
        table = rank_curves(records, facet=facet)
        tables[facet] = table
        rows = []
        for li, label in enumerate(table.labels):
            for ti, step in enumerate(table.steps):
                rows.append(
                    [label, int(step), float(table.mean_rank[li, ti]), float(table.se_rank[li, ti])]
                )
        rows.sort(key=lambda r: (r[0], r[1]))
        path = os.path.join(out_dir, f"ranks_{facet}.csv")
        _write_csv(path, [facet, "iter", "mean_rank", "se_rank"], rows)
        written.append(path)

    sig = pairwise_significance(records, step=None, alpha=alpha, correction=correction)
    rows = [
        [s.optimizer_a, s.optimizer_b, s.p_raw, s.p_value, s.significant, s.insufficient]
        for s in sig
    ]
    path = os.path.join(out_dir, "significance.csv")
    _write_csv(
        path,
        ["optimizer_a", "optimizer_b", "p_raw", "p_corrected", "significant", "insufficient"],
        rows,
    )
    written.append(path)

    path = os.path.join(out_dir, "summary.txt")
    written.append(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_summary_text(records, tables.get("optimizer"), alpha, correction, sig))

    if plots:
        written.extend(_emit_plots(tables, out_dir))
    return written


def _summary_text(records, table, alpha, correction, sig) -> str:
    lines = ["final mean ranks (lower is better)", "=" * 40]
    if table is not None:
        order = np.argsort(table.mean_rank[:, -1], kind="stable")
        for li in order:
            lines.append(
                f"{table.labels[li]:<40s} {table.mean_rank[li, -1]:.4f} "
                f"+/- {table.se_rank[li, -1]:.4f}"
            )
        finals = table.cell_ranks[:, :, -1]
        if finals.shape[1] >= 2 and finals.shape[0] >= 2:
            stat, p = friedman_test(finals)
            lines.append("")
            lines.append(f"friedman chi2={stat:.6f} p={p:.6g} "
                         f"(k={finals.shape[1]}, blocks={finals.shape[0]})")
    n_sig = sum(1 for s in sig if s.significant)
    label = correction if correction else "uncorrected"
    lines.append("")
    lines.append(f"wilcoxon pairs significant at alpha={alpha} ({label}): {n_sig}/{len(sig)}")
    return "\n".join(lines) + "\n"


def _emit_plots(tables, out_dir: str) -> list[str]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "bench-report"
    written = []
    for facet, table in tables.items():
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for li, label in enumerate(table.labels):
            mean = table.mean_rank[li]
            se = table.se_rank[li]
            ax.plot(table.steps, mean, label=str(label))
            ax.fill_between(table.steps, mean - se, mean + se, alpha=0.2)
        ax.set_xlabel("iteration")
        ax.set_ylabel("mean rank")
        ax.set_title(f"rank curves by {facet}")
        ax.legend(fontsize=7)
        path = os.path.join(out_dir, f"ranks_{facet}.svg")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)
    return written
