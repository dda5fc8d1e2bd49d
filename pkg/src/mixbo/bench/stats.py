"""Rank aggregation and nonparametric tests over benchmark records.

Records here are plain dicts carrying ``task_id``, ``optimizer_id``,
``seed``, and a ``best`` best-so-far series; one (task, seed) pair is one
block/cell.  Friedman uses the tie-corrected chi-square statistic with an
optional exact permutation route; Wilcoxon is exact (doubled-rank dynamic
program) up to n = 25 and a continuity-corrected normal approximation above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, norm, rankdata


def best_so_far(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("best_so_far needs a non-empty series")
    return np.minimum.accumulate(values)


def pearson_corr(x, y) -> float:
    """Two-pass textbook Pearson correlation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("pearson_corr needs two equal-length samples of size >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    denom = np.sqrt(np.sum(dx * dx) * np.sum(dy * dy))
    if denom == 0:
        return 0.0
    return float(np.sum(dx * dy) / denom)


# ---------------------------------------------------------------- rank curves


@dataclass(frozen=True)
class RankTable:
    """Per-step mean ranks with standard errors over (task, seed) cells."""

    labels: tuple
    steps: np.ndarray
    mean_rank: np.ndarray  # (len(labels), n_steps)
    se_rank: np.ndarray
    cell_ranks: np.ndarray  # (n_cells, len(labels), n_steps)
    cells: tuple


def facet_label(optimizer_id: str, facet: str) -> str:
    """Project a display id onto one primitive facet."""
    if facet == "optimizer" or optimizer_id.startswith("baseline-"):
        return optimizer_id
    parts = optimizer_id.split("-")
    if len(parts) != 4:
        raise ValueError(f"cannot facet optimizer id {optimizer_id!r}")
    idx = {"model": 0, "acq": 1, "acq_opt": 2, "tr": 3}
    if facet not in idx:
        raise KeyError(f"unknown facet {facet!r}")
    return parts[idx[facet]]


def rank_curves(records, facet: str = "optimizer") -> RankTable:
    """Rank optimizers by best-so-far within every (task, seed) cell.

    Lower objective gets the lower (better) rank; ties share the average
    rank.  Facet aggregation averages the member optimizers' ranks within
    each cell before taking the mean and standard error over cells.
    """
    by_cell: dict = {}
    optimizers: set = set()
    for rec in records:
        cell = (rec["task_id"], rec["seed"])
        opt = rec["optimizer_id"]
        optimizers.add(opt)
        slot = by_cell.setdefault(cell, {})
        if opt in slot:
            raise ValueError(f"duplicate record for {cell} / {opt}")
        slot[opt] = np.asarray(rec["best"], dtype=float)
    optimizers = sorted(optimizers)
    cells = sorted(by_cell)
    if not cells or len(optimizers) < 2:
        raise ValueError("rank_curves needs at least two optimizers and one cell")
    lengths = {len(series) for slot in by_cell.values() for series in slot.values()}
    if len(lengths) != 1:
        raise ValueError("records disagree on budget length")
    budget = lengths.pop()
    for cell in cells:
        missing = [o for o in optimizers if o not in by_cell[cell]]
        if missing:
            raise ValueError(f"incomplete grid: cell {cell} lacks {missing}")

    labels = sorted({facet_label(o, facet) for o in optimizers})
    members = {lab: [o for o in optimizers if facet_label(o, facet) == lab] for lab in labels}
    cell_ranks = np.empty((len(cells), len(labels), budget))
    for ci, cell in enumerate(cells):
        Y = np.array([by_cell[cell][o] for o in optimizers])
        ranks = rankdata(Y, axis=0)
        for li, lab in enumerate(labels):
            rows = [optimizers.index(o) for o in members[lab]]
            cell_ranks[ci, li] = ranks[rows].mean(axis=0)
    mean = cell_ranks.mean(axis=0)
    if len(cells) > 1:
        se = cell_ranks.std(axis=0, ddof=1) / np.sqrt(len(cells))
    else:
        se = np.zeros_like(mean)
    return RankTable(
        labels=tuple(labels),
        steps=np.arange(1, budget + 1),
        mean_rank=mean,
        se_rank=se,
        cell_ranks=cell_ranks,
        cells=tuple(cells),
    )


# ------------------------------------------------------------- Friedman test


def _doubled_ranks(row: np.ndarray) -> tuple:
    return tuple(int(round(2 * v)) for v in rankdata(row))


def friedman_test(values: np.ndarray, method: str = "chi2") -> tuple[float, float]:
    """Tie-corrected Friedman test over an (N blocks, k treatments) matrix.

    ``method="chi2"`` uses the chi-square reference distribution with k-1
    degrees of freedom; ``method="exact"`` enumerates the permutation null
    over within-block rank rearrangements (dynamic program over column-sum
    states, exact for small N and k).  Fully tied data returns (0, 1).
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    n_blocks, k = values.shape
    if k < 2 or n_blocks < 2:
        raise ValueError("friedman_test needs k >= 2 treatments and N >= 2 blocks")
    ranks = rankdata(values, axis=1)
    col_sums = ranks.sum(axis=0)
    center = n_blocks * (k + 1) / 2.0
    t_obs = float(np.sum((col_sums - center) ** 2))
    denom = float(np.sum(ranks**2) - n_blocks * k * (k + 1) ** 2 / 4.0)
    if denom <= 1e-12:
        return 0.0, 1.0
    stat = (k - 1) * t_obs / denom

    if method == "chi2":
        return stat, float(chi2.sf(stat, k - 1))
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")

    # Exact route: the statistic is monotone in sum_j (R_j - c)^2 because the
    # tie denominator is permutation-invariant, so convolve column-sum states.
    dist: dict[tuple, int] = {tuple([0] * k): 1}
    for row in ranks:
        drow = _doubled_ranks(row)
        perms = list(itertools.permutations(drow))
        new: dict[tuple, int] = {}
        for state, count in dist.items():
            for perm in perms:
                nxt = tuple(s + p for s, p in zip(state, perm))
                new[nxt] = new.get(nxt, 0) + count
        dist = new
    total = 0
    tail = 0
    for state, count in dist.items():
        total += count
        t_perm = sum((s / 2.0 - center) ** 2 for s in state)
        if t_perm >= t_obs - 1e-9:
            tail += count
    return stat, tail / total


# ------------------------------------------------------- Wilcoxon signed-rank


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W+ (sum of positive-difference ranks)
    p_value: float
    n_effective: int
    insufficient: bool
    method: str


def wilcoxon_signed_rank(x, y=None, exact_max: int = 25) -> WilcoxonResult:
    """Two-sided paired Wilcoxon with zero exclusion and average-rank ties.

    Two-sided p is P(min(W+, W-) <= observed min) under the sign-flip null:
    exact by enumeration (dynamic program on doubled ranks) for n <= 25,
    normal approximation with tie-corrected variance and continuity
    correction above.  Fewer than 5 non-zero pairs yields p = 1 with the
    insufficient flag set.
    """
    d = np.asarray(x, dtype=float)
    if y is not None:
        d = d - np.asarray(y, dtype=float)
    d = d[d != 0.0]
    n = len(d)
    if n < 5:
        return WilcoxonResult(0.0, 1.0, n, True, "insufficient")
    r = rankdata(np.abs(d))
    w_plus = float(np.sum(r[d > 0]))
    dr = np.rint(2 * r).astype(int)
    total2 = int(dr.sum())
    w2 = int(round(2 * w_plus))
    s_obs = min(w2, total2 - w2)

    if n <= exact_max:
        counts = {0: 1}
        for val in dr:
            new: dict[int, int] = {}
            for w, c in counts.items():
                new[w] = new.get(w, 0) + c
                new[w + val] = new.get(w + val, 0) + c
            counts = new
        hits = sum(c for w, c in counts.items() if min(w, total2 - w) <= s_obs)
        return WilcoxonResult(w_plus, hits / (1 << n), n, False, "exact")

    mu = n * (n + 1) / 4.0
    tie_counts = np.unique(np.abs(d), return_counts=True)[1]
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    if var <= 0:
        return WilcoxonResult(w_plus, 1.0, n, False, "normal")
    z = w_plus - mu
    z -= 0.5 * np.sign(z)
    z /= np.sqrt(var)
    return WilcoxonResult(w_plus, min(1.0, 2.0 * float(norm.sf(abs(z)))), n, False, "normal")


def holm_correction(p_values) -> np.ndarray:
    """Step-down Holm adjustment, monotone and capped at 1."""
    p = np.asarray(p_values, dtype=float)
    m = len(p)
    order = np.argsort(p, kind="stable")
    adjusted = np.empty(m)
    running = 0.0
    for pos, idx in enumerate(order):
        running = max(running, (m - pos) * p[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


@dataclass(frozen=True)
class PairwiseResult:
    optimizer_a: str
    optimizer_b: str
    p_raw: float
    p_value: float
    significant: bool
    insufficient: bool


def _paired_finals(records, step: int | None):
    by_cell: dict = {}
    optimizers = set()
    for rec in records:
        idx = len(rec["best"]) - 1 if step is None else step - 1
        by_cell.setdefault((rec["task_id"], rec["seed"]), {})[rec["optimizer_id"]] = float(
            rec["best"][idx]
        )
        optimizers.add(rec["optimizer_id"])
    return by_cell, sorted(optimizers)


def pairwise_significance(
    records, step: int | None = None, alpha: float = 0.05, correction: str | None = "holm"
) -> list[PairwiseResult]:
    """All-pairs Wilcoxon with family-wise Holm correction (or none)."""
    by_cell, optimizers = _paired_finals(records, step)
    pairs = list(itertools.combinations(optimizers, 2))
    raw, insufficient = [], []
    for a, b in pairs:
        cells = sorted(c for c, slot in by_cell.items() if a in slot and b in slot)
        da = np.array([by_cell[c][a] for c in cells])
        db = np.array([by_cell[c][b] for c in cells])
        res = wilcoxon_signed_rank(da, db)
        raw.append(res.p_value)
        insufficient.append(res.insufficient)
    if correction == "holm":
        adj = holm_correction(raw)
    elif correction is None:
        adj = np.asarray(raw)
    else:
        raise ValueError(f"unknown correction {correction!r}")
    out = []
    for (a, b), p0, p1, flag in zip(pairs, raw, adj, insufficient):
        out.append(
            PairwiseResult(
                optimizer_a=a,
                optimizer_b=b,
                p_raw=float(p0),
                p_value=float(p1),
                significant=bool(p1 < alpha and not flag),
                insufficient=bool(flag),
            )
        )
    return out


def posthoc_wilcoxon(
    records,
    pair: tuple[str, str],
    step: int | None = None,
    alpha: float = 0.05,
    correction: str | None = "holm",
) -> PairwiseResult:
    """Corrected significance for one optimizer pair at one budget step."""
    results = pairwise_significance(records, step=step, alpha=alpha, correction=correction)
    want = tuple(sorted(pair))
    for res in results:
        if (res.optimizer_a, res.optimizer_b) == want:
            return res
    raise KeyError(f"pair {pair!r} not present in the records")
