"""Run record serialization: one JSON-lines file per run plus a manifest.

A record file holds a meta line (ids, budget, config fingerprint) followed by
one line per iteration.  Record files contain no timing, so reruns of the
same config are byte-identical; wall-clock lives in the manifest instead.
"""

from __future__ import annotations

import hashlib
import json
import os
import re

RECORD_VERSION = 1


def canonical_json(obj) -> str:
    """Key-sorted, whitespace-free JSON; the fingerprint input format."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_fingerprint(run_config: dict) -> str:
    return hashlib.sha256(canonical_json(run_config).encode("utf-8")).hexdigest()


def record_filename(task_id: str, optimizer_id: str, seed: int) -> str:
    safe = lambda s: re.sub(r"[^A-Za-z0-9_.-]", "_", s)
    return f"{safe(task_id)}__{safe(optimizer_id)}__s{int(seed)}.jsonl"


def write_record(path: str, meta: dict, iterations: list[dict]) -> None:
    lines = [canonical_json(meta)]
    lines.extend(canonical_json(row) for row in iterations)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_record(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line]
    if not lines:
        raise ValueError(f"empty record file: {path}")
    meta = json.loads(lines[0])
    iterations = [json.loads(line) for line in lines[1:]]
    best = []
    current = float("inf")
    for row in iterations:
        current = min(current, row["y"])
        best.append(current)
    return {
        "meta": meta,
        "task_id": meta["task_id"],
        "optimizer_id": meta["optimizer_id"],
        "seed": meta["seed"],
        "iterations": iterations,
        "best": best,
    }


def record_status(path: str, fingerprint: str, budget: int) -> str:
    """missing | complete | incomplete | mismatch, for resume decisions."""
    if not os.path.exists(path):
        return "missing"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line for line in fh.read().splitlines() if line]
        meta = json.loads(lines[0])
    except (json.JSONDecodeError, IndexError):
        return "incomplete"
    if meta.get("fingerprint") != fingerprint:
        return "mismatch"
    if len(lines) - 1 == budget:
        return "complete"
    return "incomplete"


def load_records(records_dir: str) -> list[dict]:
    """All record files under a directory, in stable sorted order."""
    names = sorted(n for n in os.listdir(records_dir) if n.endswith(".jsonl"))
    records = [read_record(os.path.join(records_dir, n)) for n in names]
    records.sort(key=lambda r: (r["task_id"], r["optimizer_id"], r["seed"]))
    return records


def write_manifest(path: str, entries: list[dict]) -> None:
    payload = {"version": RECORD_VERSION, "runs": entries}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
