"""Experiment harness: config parsing, resumable grid execution, fit probe.

A grid is tasks x optimizers x seeds at a fixed budget.  Every run writes one
record file named by its (task, optimizer, seed) triple and stamped with a
config fingerprint; reruns skip files whose fingerprint matches and fail
loudly on drift.  Runs are independent, so a worker pool can execute them in
parallel.
"""

from __future__ import annotations

import multiprocessing
import os
import time
from dataclasses import dataclass

import numpy as np

from ..engine import build_optimizer, optimizer_display_id
from ..space import transform
from ..surrogates.gp import gp_fit, heldout_log_likelihood
from ..surrogates.kernels import make_kernel
from ..tasks import get_task
from .records import (
    RECORD_VERSION,
    config_fingerprint,
    record_filename,
    record_status,
    write_manifest,
    write_record,
)
from .stats import pearson_corr


@dataclass(frozen=True)
class ExperimentConfig:
    tasks: tuple
    optimizers: tuple
    seeds: tuple
    budget: int
    n_init: int = 20


def parse_seed_spec(spec) -> list[int]:
    """Accept [0,1,2], "0..4" (inclusive), "0,3,7", or a single int."""
    if isinstance(spec, int):
        return [spec]
    if isinstance(spec, (list, tuple)):
        return [int(s) for s in spec]
    text = str(spec).strip()
    if ".." in text:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty seed range {spec!r}")
        return list(range(lo, hi + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def make_experiment_config(payload: dict) -> ExperimentConfig:
    try:
        tasks = tuple(payload["tasks"])
        optimizers = tuple(payload["optimizers"])
        seeds = tuple(parse_seed_spec(payload["seeds"]))
        budget = int(payload["budget"])
    except KeyError as exc:
        raise KeyError(f"experiment config missing field {exc}") from exc
    n_init = int(payload.get("n_init", 20))
    if not tasks or not optimizers or not seeds:
        raise ValueError("experiment config has an empty grid axis")
    if budget < n_init:
        raise ValueError(f"budget ({budget}) must be at least n_init ({n_init})")
    return ExperimentConfig(tasks, optimizers, seeds, budget, n_init)


def run_config_dict(task_id: str, optimizer: dict, seed: int, budget: int, n_init: int) -> dict:
    return {
        "task": task_id,
        "optimizer": optimizer,
        "seed": int(seed),
        "budget": int(budget),
        "n_init": int(n_init),
    }


def run_one(task_id: str, optimizer: dict, seed: int, budget: int, n_init: int) -> tuple[dict, list[dict]]:
    """Execute one run and return (meta, iteration rows); no file IO."""
    task = get_task(task_id)
    opt = build_optimizer(task.space, optimizer, n_init, seed)
    iterations = []
    for i in range(budget):
        x = opt.suggest()
        tr_state = getattr(opt, "trust_region", None)
        tr_snap = tr_state.snapshot() if tr_state is not None else None
        y = float(task.evaluate(x))
        opt.observe(x, y)
        diag = opt.model_diagnostics() if hasattr(opt, "model_diagnostics") else None
        iterations.append(
            {
                "i": i + 1,
                "x": [float(v) for v in x],
                "y": y,
                "best": float(opt.best_y),
                "tr": tr_snap,
                "model": diag,
            }
        )
    cfg = run_config_dict(task_id, optimizer, seed, budget, n_init)
    meta = {
        "version": RECORD_VERSION,
        "task_id": task_id,
        "optimizer_id": optimizer_display_id(optimizer),
        "seed": int(seed),
        "budget": int(budget),
        "n_init": int(n_init),
        "fingerprint": config_fingerprint(cfg),
        "run_config": cfg,
    }
    return meta, iterations


def _execute_job(job: tuple) -> tuple[str, float]:
    task_id, optimizer, seed, budget, n_init, path = job
    start = time.perf_counter()
    meta, iterations = run_one(task_id, optimizer, seed, budget, n_init)
    write_record(path, meta, iterations)
    return os.path.basename(path), time.perf_counter() - start


def run_grid(config: ExperimentConfig | dict, out_dir: str, workers: int = 1) -> dict:
    """Run the grid, skipping complete records; returns a run summary.

    Raises on fingerprint mismatch (the output directory holds records from a
    different configuration of the same names).
    """
    if isinstance(config, dict):
        config = make_experiment_config(config)
    os.makedirs(out_dir, exist_ok=True)
    jobs, entries = [], []
    for task_id in config.tasks:
        for optimizer in config.optimizers:
            opt_id = optimizer_display_id(optimizer)
            for seed in config.seeds:
                cfg = run_config_dict(task_id, optimizer, seed, config.budget, config.n_init)
                fp = config_fingerprint(cfg)
                path = os.path.join(out_dir, record_filename(task_id, opt_id, seed))
                status = record_status(path, fp, config.budget)
                if status == "mismatch":
                    raise RuntimeError(
                        f"fingerprint mismatch for {path}: the directory holds a record "
                        "for a different config (config drift); use a fresh --out"
                    )
                entry = {
                    "file": os.path.basename(path),
                    "task": task_id,
                    "optimizer_id": opt_id,
                    "seed": int(seed),
                    "fingerprint": fp,
                    "status": "cached" if status == "complete" else "ran",
                    "wall_clock_s": None,
                }
                entries.append(entry)
                if status != "complete":
                    jobs.append(
                        (task_id, optimizer, seed, config.budget, config.n_init, path)
                    )
    if jobs:
        if workers > 1:
            with multiprocessing.Pool(processes=workers) as pool:
                results = pool.map(_execute_job, jobs)
        else:
            results = [_execute_job(job) for job in jobs]
        timing = dict(results)
        for entry in entries:
            if entry["file"] in timing:
                entry["wall_clock_s"] = round(timing[entry["file"]], 6)
    entries.sort(key=lambda e: e["file"])
    write_manifest(os.path.join(out_dir, "manifest.json"), entries)
    return {
        "records_dir": out_dir,
        "ran": sum(1 for e in entries if e["status"] == "ran"),
        "cached": sum(1 for e in entries if e["status"] == "cached"),
    }


def _trajectory(task, optimizer: dict, seed: int, budget: int, n_init: int):
    opt = build_optimizer(task.space, optimizer, n_init, seed)
    X, y = [], []
    for _ in range(budget):
        x = opt.suggest()
        val = float(task.evaluate(x))
        opt.observe(x, val)
        X.append(x)
        y.append(val)
    return np.array(X), np.array(y)


def fit_quality_probe(
    task_id: str,
    seeds,
    kernels=("o", "to", "hed"),
    budget: int = 100,
    n_init: int = 20,
    train_frac: float = 0.75,
    bo_acq_opt_params: dict | None = None,
) -> list[dict]:
    """Held-out fit quality vs. realized BO improvement, per kernel and seed.

    For each seed, a GA-baseline trajectory supplies a model-agnostic design;
    each kernel's GP fits the first ``train_frac`` fraction and is scored by
    predictive log-likelihood on the rest.  The same kernel then drives a
    trust-region BO run whose improvement is best-at-init-end minus final
    best.  Rows feed the pooled correlation analysis.

    ``bo_acq_opt_params`` overrides the inner-optimizer parameters of the BO
    arm, identically for every kernel; the read-out compares kernels, so only
    cross-kernel fairness matters, not absolute search strength.
    """
    task = get_task(task_id)
    n_train = int(round(train_frac * budget))
    if n_train < 2 or budget - n_train < 1:
        raise ValueError(
            f"trajectory of {budget} points cannot support a {train_frac} split"
        )
    cat_only = task.space.n_numeric == 0
    rows = []
    for seed in parse_seed_spec(seeds):
        X, y = _trajectory(task, {"baseline": "ga"}, seed, budget, n_init)
        U = transform(task.space, X)
        for kernel in kernels:
            model = gp_fit(U[:n_train], y[:n_train], make_kernel(kernel, task.space))
            loglik = heldout_log_likelihood(model, U[n_train:], y[n_train:])
            bo = {
                "model": f"gp_{kernel}",
                "acq": "ei",
                "acq_opt": "ls" if cat_only else "is",
                "tr": "basic",
            }
            if bo_acq_opt_params:
                bo["acq_opt_params"] = dict(bo_acq_opt_params)
            _, y_bo = _trajectory(task, bo, seed, budget, n_init)
            improvement = float(np.min(y_bo[:n_init]) - np.min(y_bo))
            rows.append(
                {
                    "task": task_id,
                    "kernel": kernel,
                    "seed": int(seed),
                    "heldout_loglik": float(loglik),
                    "improvement": improvement,
                    "final_best": float(np.min(y_bo)),
                }
            )
    return rows


def probe_correlation(rows: list[dict]) -> float:
    """Pooled Pearson correlation of within-task z-scored (loglik, improvement)."""
    tasks = sorted({row["task"] for row in rows})
    zx, zy = [], []
    for t in tasks:
        sub = [row for row in rows if row["task"] == t]
        ll = np.array([row["heldout_loglik"] for row in sub])
        imp = np.array([row["improvement"] for row in sub])
        zx.extend(_zscore(ll))
        zy.extend(_zscore(imp))
    return pearson_corr(np.array(zx), np.array(zy))


def _zscore(v: np.ndarray) -> np.ndarray:
    std = float(np.std(v))
    if std < 1e-12:
        return np.zeros_like(v)
    return (v - np.mean(v)) / std
