"""Benchmark harness: grid runner, record files, rank/significance analysis."""

from .harness import (
    ExperimentConfig,
    fit_quality_probe,
    make_experiment_config,
    parse_seed_spec,
    probe_correlation,
    run_grid,
    run_one,
)
from .records import (
    canonical_json,
    config_fingerprint,
    load_records,
    read_record,
    record_filename,
    record_status,
    write_record,
)
from .report import emit_report
from .stats import (
    PairwiseResult,
    RankTable,
    WilcoxonResult,
    best_so_far,
    facet_label,
    friedman_test,
    holm_correction,
    pairwise_significance,
    pearson_corr,
    posthoc_wilcoxon,
    rank_curves,
    wilcoxon_signed_rank,
)

__all__ = [
    "ExperimentConfig",
    "PairwiseResult",
    "RankTable",
    "WilcoxonResult",
    "best_so_far",
    "canonical_json",
    "config_fingerprint",
    "emit_report",
    "facet_label",
    "fit_quality_probe",
    "friedman_test",
    "holm_correction",
    "load_records",
    "make_experiment_config",
    "pairwise_significance",
    "parse_seed_spec",
    "pearson_corr",
    "posthoc_wilcoxon",
    "probe_correlation",
    "rank_curves",
    "read_record",
    "record_filename",
    "record_status",
    "run_grid",
    "run_one",
    "wilcoxon_signed_rank",
    "write_record",
]
