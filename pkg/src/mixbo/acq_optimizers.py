"""Acquisition maximizers over mixed categorical/numeric spaces.

Five strategies share one calling convention: ``acq_fn`` maps a batch of
unit-space points (numeric dims scaled to [0, 1], categorical dims holding
category indices) to larger-is-better utilities, and every optimizer returns
a raw-space point plus its utility.  All of them score the incumbent seed, so
the returned value never degrades below it; all respect an active trust
region (Hamming ball over categorical dims, per-dimension box over numeric
dims) and registered constraints.  Numeric gradients are central finite
differences in unit space; integer dims snap half-up only at return.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .space import (
    REJECTION_CAP,
    RejectionCapError,
    SearchSpace,
    check_constraints,
    inverse_transform,
    sample_uniform,
    transform,
)
from .trust_region import TrustRegionState, in_trust_region

OPTIMIZER_KINDS = ("ls", "sa", "ga", "is_hc_gd", "is_mab_gd")

DEFAULT_PARAMS = {
    "ls": {"n_vertices": 20000, "n_ascents": 20, "n_spray": 10},
    "sa": {
        "n_restarts": 3,
        "n_iters": 100,
        "init_temp": 1.0,
        "cooling": 0.95,
        "tolerance": 100,
        "num_sigma": 0.1,
        "proposal_cap": 100,
    },
    "ga": {
        "n_generations": 500,
        "population": 100,
        "n_parents": 20,
        "n_elite": 10,
        "tournament_size": 3,
        "num_sigma": 0.1,
        "repair_cap": 100,
    },
    "is_hc_gd": {
        "n_restarts": 3,
        "n_iters": 100,
        "max_n_perturb": 20,
        "num_lr": 1e-3,
        "gd_inner": 10,
        "fd_step": 1e-4,
        "stale_tol": 100,
    },
    "is_mab_gd": {
        "max_n_iters": 200,
        "resample_tol": 500,
        "n_cand": 5000,
        "cont_lr": 3e-3,
        "gd_inner": 100,
        "fd_step": 1e-4,
        "gamma": 0.1,
    },
}

_COUNT_PARAMS = {
    "n_vertices", "n_ascents", "n_spray", "n_restarts", "n_iters",
    "n_generations", "population", "n_parents", "n_elite", "tournament_size",
    "max_n_perturb", "gd_inner", "max_n_iters", "resample_tol", "n_cand",
    "tolerance", "stale_tol", "proposal_cap", "repair_cap",
}


@dataclass(frozen=True)
class AcqOptConfig:
    """An optimizer kind plus its fully merged hyperparameters."""

    kind: str
    params: dict


def make_acq_opt_config(kind: str, **overrides) -> AcqOptConfig:
    if kind not in OPTIMIZER_KINDS:
        raise KeyError(f"unknown acquisition optimizer kind {kind!r}")
    params = dict(DEFAULT_PARAMS[kind])
    for key, value in overrides.items():
        if key not in params:
            raise KeyError(f"unknown parameter {key!r} for optimizer {kind!r}")
        if key in _COUNT_PARAMS:
            value = int(value)
            if value < 1:
                raise ValueError(f"parameter {key!r} must be a positive count")
        else:
            value = float(value)
            if value < 0:
                raise ValueError(f"parameter {key!r} must be non-negative")
        params[key] = value
    return AcqOptConfig(kind=kind, params=params)


def _merged(kind: str, params: dict | None) -> dict:
    if params is None:
        return dict(DEFAULT_PARAMS[kind])
    return make_acq_opt_config(kind, **params).params


def tr_filter(points: np.ndarray, tr: TrustRegionState, space: SearchSpace) -> np.ndarray:
    """Keep the raw points inside the region: Hamming ball AND numeric box."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return points[in_trust_region(space, tr, points)]


def _active(tr: TrustRegionState | None) -> bool:
    return tr is not None and tr.center is not None


def _num_box(space: SearchSpace, tr: TrustRegionState | None) -> tuple[np.ndarray, np.ndarray]:
    """Unit-space bounds of the numeric block under the region, else [0,1]."""
    lo = np.zeros(space.n_numeric)
    hi = np.ones(space.n_numeric)
    if _active(tr) and space.n_numeric:
        cu = transform(space, tr.center)[space.numeric_idx]
        lo = np.maximum(lo, cu - tr.L_n)
        hi = np.minimum(hi, cu + tr.L_n)
    return lo, hi


def _feasible(space: SearchSpace, u: np.ndarray) -> bool:
    if not space.constraint_ids:
        return True
    return check_constraints(space, inverse_transform(space, u))


def _hamming_to_center(space: SearchSpace, tr: TrustRegionState, u: np.ndarray) -> int:
    c = np.asarray(tr.center, dtype=float)[space.categorical_idx]
    return int(np.count_nonzero(u[space.categorical_idx] != c))


def _sample_unit(
    space: SearchSpace,
    n: int,
    rng: np.random.Generator,
    tr: TrustRegionState | None,
) -> np.ndarray:
    """n unit-space points, uniform over the space or over the active region."""
    if not _active(tr):
        return np.atleast_2d(transform(space, sample_uniform(space, n, rng)))
    cu = transform(space, tr.center)
    lo, hi = _num_box(space, tr)
    sizes = space.category_sizes()
    out = np.empty((n, space.n_vars))
    for i in range(n):
        for attempt in range(REJECTION_CAP):
            u = cu.copy()
            if space.n_categorical:
                k = int(rng.integers(0, tr.L_h + 1))
                if k:
                    pos = rng.permutation(space.n_categorical)[:k]
                    for j in pos:
                        col = space.categorical_idx[j]
                        shift = int(rng.integers(1, sizes[j]))
                        u[col] = (int(cu[col]) + shift) % sizes[j]
            if space.n_numeric:
                u[space.numeric_idx] = rng.uniform(lo, hi)
            if _feasible(space, u):
                out[i] = u
                break
        else:
            raise RejectionCapError(
                "no feasible point found inside the trust region after "
                f"{REJECTION_CAP} attempts"
            )
    return out


def _one_hamming_neighbors(
    space: SearchSpace, u: np.ndarray, tr: TrustRegionState | None
) -> np.ndarray:
    """All single-category flips of u that stay in the region and feasible."""
    sizes = space.category_sizes()
    h0 = _hamming_to_center(space, tr, u) if _active(tr) else 0
    c = (
        np.asarray(tr.center, dtype=float)[space.categorical_idx]
        if _active(tr)
        else None
    )
    rows = []
    for j, col in enumerate(space.categorical_idx):
        cur = int(u[col])
        for cat in range(sizes[j]):
            if cat == cur:
                continue
            if c is not None:
                h = h0 - int(cur != int(c[j])) + int(cat != int(c[j]))
                if h > tr.L_h:
                    continue
            v = u.copy()
            v[col] = cat
            if _feasible(space, v):
                rows.append(v)
    return np.array(rows) if rows else np.empty((0, space.n_vars))


def _finalize(
    acq_fn,
    space: SearchSpace,
    best_u: np.ndarray,
    best_v: float,
    inc_raw: np.ndarray,
    inc_v: float,
) -> tuple[np.ndarray, float]:
    """Snap to raw space; fall back to the incumbent if snapping degraded."""
    raw = inverse_transform(space, best_u)
    u2 = transform(space, raw)
    v2 = best_v if np.array_equal(u2, best_u) else float(acq_fn(u2[None])[0])
    if v2 < inc_v:
        return np.asarray(inc_raw, dtype=float).copy(), inc_v
    return raw, v2


def _fd_gradient(acq_fn, u: np.ndarray, numeric_idx, step: float) -> np.ndarray:
    """Central-difference gradient of the acquisition on the numeric block."""
    dn = len(numeric_idx)
    batch = np.tile(u, (2 * dn, 1))
    for j, col in enumerate(numeric_idx):
        batch[2 * j, col] += step
        batch[2 * j + 1, col] -= step
    vals = np.asarray(acq_fn(batch), dtype=float)
    return (vals[0::2] - vals[1::2]) / (2.0 * step)


def optimize_ls(
    acq_fn,
    space: SearchSpace,
    incumbent: np.ndarray,
    seed: int,
    tr: TrustRegionState | None = None,
    params: dict | None = None,
) -> tuple[np.ndarray, float]:
    """Exhaustive local search: vertex sampling then greedy 1-Hamming ascents.

    Samples ``n_vertices`` region vertices, seeds ascents from the best
    ``n_ascents - n_spray`` of them plus ``n_spray`` random neighbors of the
    incumbent, and climbs each by full neighborhood enumeration until no
    improvement.  Categorical-only by contract.
    """
    if space.n_numeric:
        raise ValueError("local search requires a purely categorical space")
    p = _merged("ls", params)
    rng = np.random.default_rng(seed)
    u_inc = transform(space, np.asarray(incumbent, dtype=float))
    inc_v = float(acq_fn(u_inc[None])[0])
    best_u, best_v = u_inc.copy(), inc_v

    V = _sample_unit(space, p["n_vertices"], rng, tr)
    vals = np.asarray(acq_fn(V), dtype=float)
    top = np.argsort(vals)[::-1]
    if vals[top[0]] > best_v:
        best_u, best_v = V[top[0]].copy(), float(vals[top[0]])

    n_best = max(p["n_ascents"] - p["n_spray"], 0)
    starts = [V[i].copy() for i in top[:n_best]]
    nbrs_inc = _one_hamming_neighbors(space, u_inc, tr)
    for _ in range(p["n_spray"]):
        if len(nbrs_inc):
            starts.append(nbrs_inc[int(rng.integers(0, len(nbrs_inc)))].copy())
        else:
            starts.append(u_inc.copy())

    for u in starts:
        fu = float(acq_fn(u[None])[0])
        while True:
            nbrs = _one_hamming_neighbors(space, u, tr)
            if not len(nbrs):
                break
            nv = np.asarray(acq_fn(nbrs), dtype=float)
            j = int(np.argmax(nv))
            if nv[j] <= fu:
                break
            u, fu = nbrs[j].copy(), float(nv[j])
        if fu > best_v:
            best_u, best_v = u, fu
    return _finalize(acq_fn, space, best_u, best_v, incumbent, inc_v)


def _sa_propose(
    space: SearchSpace,
    u: np.ndarray,
    rng: np.random.Generator,
    tr: TrustRegionState | None,
    lo: np.ndarray,
    hi: np.ndarray,
    sigma: float,
    cap: int,
) -> np.ndarray | None:
    sizes = space.category_sizes()
    for _ in range(cap):
        v = u.copy()
        idx = int(rng.integers(0, space.n_vars))
        if idx in space.categorical_idx:
            j = list(space.categorical_idx).index(idx)
            shift = int(rng.integers(1, sizes[j]))
            v[idx] = (int(u[idx]) + shift) % sizes[j]
            if _active(tr) and _hamming_to_center(space, tr, v) > tr.L_h:
                continue
        else:
            j = list(space.numeric_idx).index(idx)
            v[idx] = float(np.clip(u[idx] + sigma * rng.standard_normal(), lo[j], hi[j]))
        if _feasible(space, v):
            return v
    return None


def optimize_sa(
    acq_fn,
    space: SearchSpace,
    incumbent: np.ndarray,
    seed: int,
    tr: TrustRegionState | None = None,
    params: dict | None = None,
) -> tuple[np.ndarray, float]:
    """Simulated annealing: restarts of Metropolis walks with geometric cooling.

    The first restart starts at the incumbent, later ones at random region
    points.  Temperature multiplies by the cooling factor before every step,
    so a factor of zero degenerates to pure hill climbing.  A restart stops
    early after ``tolerance`` steps without improving its best.
    """
    p = _merged("sa", params)
    rng = np.random.default_rng(seed)
    u_inc = transform(space, np.asarray(incumbent, dtype=float))
    inc_v = float(acq_fn(u_inc[None])[0])
    best_u, best_v = u_inc.copy(), inc_v
    lo, hi = _num_box(space, tr)

    for r in range(p["n_restarts"]):
        if r == 0:
            u, fu = u_inc.copy(), inc_v
        else:
            u = _sample_unit(space, 1, rng, tr)[0]
            fu = float(acq_fn(u[None])[0])
        if fu > best_v:
            best_u, best_v = u.copy(), fu
        temp = p["init_temp"]
        best_r = fu
        stale = 0
        for _ in range(p["n_iters"]):
            temp *= p["cooling"]
            v = _sa_propose(space, u, rng, tr, lo, hi, p["num_sigma"], p["proposal_cap"])
            if v is None:
                stale += 1
                if stale >= p["tolerance"]:
                    break
                continue
            fv = float(acq_fn(v[None])[0])
            delta = fv - fu
            if delta > 0 or (temp > 0 and rng.random() < np.exp(delta / temp)):
                u, fu = v, fv
            if fv > best_r:
                best_r = fv
                stale = 0
            else:
                stale += 1
            if fv > best_v:
                best_u, best_v = v.copy(), fv
            if stale >= p["tolerance"]:
                break
    return _finalize(acq_fn, space, best_u, best_v, incumbent, inc_v)


def _ga_repair(
    space: SearchSpace,
    child: np.ndarray,
    rng: np.random.Generator,
    tr: TrustRegionState | None,
    cap: int,
    fallback: np.ndarray,
) -> np.ndarray:
    """Pull a child back into the region/feasible set, gene by gene."""
    if _active(tr) and space.n_categorical:
        c = np.asarray(tr.center, dtype=float)[space.categorical_idx]
        diff = [j for j, col in enumerate(space.categorical_idx) if child[col] != c[j]]
        excess = len(diff) - tr.L_h
        if excess > 0:
            for j in rng.permutation(len(diff))[:excess]:
                child[space.categorical_idx[diff[j]]] = c[diff[j]]
    if _feasible(space, child):
        return child
    cu = transform(space, tr.center) if _active(tr) else None
    for _ in range(cap):
        idx = int(rng.integers(0, space.n_vars))
        if cu is not None:
            child[idx] = cu[idx]
        elif idx in space.categorical_idx:
            j = list(space.categorical_idx).index(idx)
            child[idx] = float(rng.integers(0, space.category_sizes()[j]))
        else:
            child[idx] = rng.random()
        if _feasible(space, child):
            return child
    return fallback.copy()


def optimize_ga(
    acq_fn,
    space: SearchSpace,
    incumbent: np.ndarray,
    seed: int,
    tr: TrustRegionState | None = None,
    params: dict | None = None,
) -> tuple[np.ndarray, float]:
    """Genetic algorithm: tournament parents, uniform crossover, elitism.

    Mutation hits each dimension with probability 1/d: categorical genes
    resample uniformly, numeric genes take Gaussian jitter clipped to the
    region box.  Children violating the region are repaired toward its
    center.  Elites carry over unchanged, so the best fitness never drops.
    """
    p = _merged("ga", params)
    if p["n_elite"] >= p["population"] or p["n_parents"] < 2:
        raise ValueError("population must exceed n_elite and n_parents must be >= 2")
    rng = np.random.default_rng(seed)
    u_inc = transform(space, np.asarray(incumbent, dtype=float))
    pop = _sample_unit(space, p["population"], rng, tr)
    pop[0] = u_inc
    fit = np.asarray(acq_fn(pop), dtype=float)
    inc_v = float(fit[0])
    j = int(np.argmax(fit))
    best_u, best_v = pop[j].copy(), float(fit[j])

    lo, hi = _num_box(space, tr)
    sizes = space.category_sizes()
    d = space.n_vars
    n_children = p["population"] - p["n_elite"]
    mut_rate = 1.0 / d

    for _ in range(p["n_generations"]):
        elite_idx = np.argsort(fit)[-p["n_elite"]:]
        elites = pop[elite_idx]
        elite_fit = fit[elite_idx]

        t_idx = rng.integers(0, p["population"], size=(p["n_parents"], p["tournament_size"]))
        winners = t_idx[np.arange(p["n_parents"]), np.argmax(fit[t_idx], axis=1)]
        parents = pop[winners]

        pa = rng.integers(0, p["n_parents"], size=n_children)
        pb = rng.integers(0, p["n_parents"], size=n_children)
        mask = rng.random((n_children, d)) < 0.5
        children = np.where(mask, parents[pa], parents[pb])

        mut = rng.random((n_children, d)) < mut_rate
        for j_cat, col in enumerate(space.categorical_idx):
            resampled = rng.integers(0, sizes[j_cat], size=n_children).astype(float)
            children[:, col] = np.where(mut[:, col], resampled, children[:, col])
        for j_num, col in enumerate(space.numeric_idx):
            jitter = children[:, col] + p["num_sigma"] * rng.standard_normal(n_children)
            jitter = np.clip(jitter, lo[j_num], hi[j_num])
            children[:, col] = np.where(mut[:, col], jitter, children[:, col])

        needs_repair = space.constraint_ids or (_active(tr) and space.n_categorical)
        if needs_repair:
            for i in range(n_children):
                children[i] = _ga_repair(
                    space, children[i], rng, tr, p["repair_cap"], parents[pa[i]]
                )

        child_fit = np.asarray(acq_fn(children), dtype=float)
        pop = np.vstack([elites, children])
        fit = np.concatenate([elite_fit, child_fit])
        j = int(np.argmax(fit))
        if fit[j] > best_v:
            best_u, best_v = pop[j].copy(), float(fit[j])
    return _finalize(acq_fn, space, best_u, best_v, incumbent, inc_v)


def optimize_is_hc_gd(
    acq_fn,
    space: SearchSpace,
    incumbent: np.ndarray,
    seed: int,
    tr: TrustRegionState | None = None,
    params: dict | None = None,
) -> tuple[np.ndarray, float]:
    """Interleaved search: hill-climbing flips alternating with Adam ascent.

    Each outer iteration takes one greedy step over at most ``max_n_perturb``
    sampled 1-Hamming moves, then ``gd_inner`` Adam steps on the numeric
    block using central finite differences.  Degenerates to pure hill
    climbing without numeric dims and to pure gradient ascent without
    categorical dims.  Adam state resets at every restart.
    """
    p = _merged("is_hc_gd", params)
    rng = np.random.default_rng(seed)
    u_inc = transform(space, np.asarray(incumbent, dtype=float))
    inc_v = float(acq_fn(u_inc[None])[0])
    best_u, best_v = u_inc.copy(), inc_v
    lo, hi = _num_box(space, tr)
    num_idx = space.numeric_idx

    for r in range(p["n_restarts"]):
        if r == 0:
            u, fu = u_inc.copy(), inc_v
        else:
            u = _sample_unit(space, 1, rng, tr)[0]
            fu = float(acq_fn(u[None])[0])
        if fu > best_v:
            best_u, best_v = u.copy(), fu
        m = np.zeros(len(num_idx))
        v_adam = np.zeros(len(num_idx))
        t = 0
        best_r = fu
        stale = 0
        for _ in range(p["n_iters"]):
            if space.n_categorical:
                nbrs = _one_hamming_neighbors(space, u, tr)
                if len(nbrs) > p["max_n_perturb"]:
                    pick = rng.permutation(len(nbrs))[: p["max_n_perturb"]]
                    nbrs = nbrs[pick]
                if len(nbrs):
                    nv = np.asarray(acq_fn(nbrs), dtype=float)
                    j = int(np.argmax(nv))
                    if nv[j] > fu:
                        u, fu = nbrs[j].copy(), float(nv[j])
            if space.n_numeric:
                for _ in range(p["gd_inner"]):
                    g = _fd_gradient(acq_fn, u, num_idx, p["fd_step"])
                    t += 1
                    m = 0.9 * m + 0.1 * g
                    v_adam = 0.999 * v_adam + 0.001 * g * g
                    m_hat = m / (1.0 - 0.9**t)
                    v_hat = v_adam / (1.0 - 0.999**t)
                    step = p["num_lr"] * m_hat / (np.sqrt(v_hat) + 1e-8)
                    u[num_idx] = np.clip(u[num_idx] + step, lo, hi)
                fu = float(acq_fn(u[None])[0])
            if fu > best_v:
                best_u, best_v = u.copy(), fu
            if fu > best_r:
                best_r = fu
                stale = 0
            else:
                stale += 1
            if stale >= p["stale_tol"]:
                break
    return _finalize(acq_fn, space, best_u, best_v, incumbent, inc_v)


def optimize_is_mab_gd(
    acq_fn,
    space: SearchSpace,
    incumbent: np.ndarray,
    seed: int,
    tr: TrustRegionState | None = None,
    params: dict | None = None,
) -> tuple[np.ndarray, float]:
    """Interleaved search: per-dimension adversarial bandits plus SGD ascent.

    One exponential-weights learner per categorical dimension samples a
    category assignment (resampled for region/constraint feasibility up to
    ``resample_tol`` times), the numeric block starts from the best of
    ``n_cand`` uniform seeds and ascends by SGD on finite-difference
    gradients, and every learner receives the acquisition value normalized
    to [0, 1] by the running min/max.  Learners update on importance-weighted
    losses at rate ``4*gamma/k`` and the uniform-exploration mixture anneals
    from ``gamma`` down to ``0.3*gamma`` over the budget; the short horizon
    (200 rounds) needs faster concentration than the regret-optimal schedule.
    Without categorical dims this is a single seeded gradient ascent.
    """
    p = _merged("is_mab_gd", params)
    rng = np.random.default_rng(seed)
    u_inc = transform(space, np.asarray(incumbent, dtype=float))
    inc_v = float(acq_fn(u_inc[None])[0])
    best_u, best_v = u_inc.copy(), inc_v
    lo, hi = _num_box(space, tr)
    num_idx = space.numeric_idx
    sizes = space.category_sizes()
    gamma = p["gamma"]

    def ascend(u: np.ndarray) -> tuple[np.ndarray, float]:
        cands = np.tile(u, (p["n_cand"], 1))
        cands[:, num_idx] = rng.uniform(lo, hi, size=(p["n_cand"], len(num_idx)))
        if space.constraint_ids:
            keep = np.array([_feasible(space, c) for c in cands])
            cands = cands[keep] if keep.any() else u[None]
        vals = np.asarray(acq_fn(cands), dtype=float)
        x = cands[int(np.argmax(vals))].copy()
        for _ in range(p["gd_inner"]):
            g = _fd_gradient(acq_fn, x, num_idx, p["fd_step"])
            x[num_idx] = np.clip(x[num_idx] + p["cont_lr"] * g, lo, hi)
        return x, float(acq_fn(x[None])[0])

    if not space.n_categorical:
        x, fx = ascend(u_inc.copy())
        if fx > best_v:
            best_u, best_v = x, fx
        return _finalize(acq_fn, space, best_u, best_v, incumbent, inc_v)

    restricted = _active(tr) and tr.L_h == 0
    center_cats = (
        np.asarray(tr.center, dtype=float)[space.categorical_idx] if _active(tr) else None
    )
    arms = [
        [int(center_cats[j])] if restricted else list(range(sizes[j]))
        for j in range(space.n_categorical)
    ]
    weights = [np.ones(len(a)) for a in arms]
    run_min = run_max = inc_v

    for it in range(p["max_n_iters"]):
        g = gamma * max(0.3, 1.0 - it / p["max_n_iters"])
        probs = [
            (1.0 - g) * w / w.sum() + g / len(w) for w in weights
        ]
        chosen = None
        for _ in range(p["resample_tol"]):
            pick = [int(rng.choice(len(a), p=pr)) for a, pr in zip(arms, probs)]
            u = u_inc.copy()
            for j, col in enumerate(space.categorical_idx):
                u[col] = float(arms[j][pick[j]])
            if _active(tr) and _hamming_to_center(space, tr, u) > tr.L_h:
                continue
            if space.n_numeric or _feasible(space, u):
                chosen = (pick, u)
                break
        if chosen is None:
            raise RejectionCapError(
                "bandit feasibility resampling exhausted inside the trust region"
            )
        pick, u = chosen
        if space.n_numeric:
            u, fu = ascend(u)
        else:
            fu = float(acq_fn(u[None])[0])
        if fu > best_v:
            best_u, best_v = u.copy(), fu
        run_min = min(run_min, fu)
        run_max = max(run_max, fu)
        span = run_max - run_min
        reward = 0.5 if span <= 0 else (fu - run_min) / span
        for j, w in enumerate(weights):
            k = len(w)
            est = (1.0 - reward) / probs[j][pick[j]]
            w[pick[j]] *= np.exp(-4.0 * gamma * est / k)
            w /= w.max()
    return _finalize(acq_fn, space, best_u, best_v, incumbent, inc_v)


_OPTIMIZERS = {
    "ls": optimize_ls,
    "sa": optimize_sa,
    "ga": optimize_ga,
    "is_hc_gd": optimize_is_hc_gd,
    "is_mab_gd": optimize_is_mab_gd,
}


def optimize_acq(
    acq_fn,
    space: SearchSpace,
    incumbent: np.ndarray,
    config: AcqOptConfig,
    seed: int,
    tr: TrustRegionState | None = None,
) -> tuple[np.ndarray, float]:
    """Dispatch to the configured optimizer; returns (raw point, utility)."""
    fn = _OPTIMIZERS[config.kind]
    return fn(acq_fn, space, incumbent, seed, tr=tr, params=config.params)
