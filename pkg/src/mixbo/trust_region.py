"""Trust-region bookkeeping: success/failure dynamics and shrink-triggered
restarts through a global auxiliary surrogate.

The region around the center is the product of a categorical Hamming ball of
radius ``L_h`` and a per-dimension numeric box of half-width ``L_n`` in unit
coordinates.  Three straight successes grow all radii by 1.5 (capped), forty
straight failures shrink them by 1.5; a shrink whose raw (pre-rounding) value
would cross the minimum radius (numeric 2^-5, nominal 1) yields RestartSignal
instead of a new state.  States are immutable; updates return fresh states.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .acquisitions import DEFAULT_LCB_BETA, lcb
from .space import SearchSpace, hamming_distance, round_half_up, sample_uniform, transform
from .surrogates.gp import gp_fit, gp_predict

SUCC_TOL = 3
FAIL_TOL = 40
RADIUS_MULTIPLIER = 1.5
NUM_RADIUS_MAX = 1.0
NUM_RADIUS_MIN = 2.0**-5
NOM_RADIUS_MIN = 1
INIT_FRACTION = 0.8


class RestartSignal:
    """Marker returned by tr_update when a shrink crosses a minimum radius."""

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "RestartSignal()"


@dataclass(frozen=True)
class TrustRegionState:
    """Immutable snapshot of the region and its counters.

    ``center`` is None until the first observation arrives; ``center_value``
    is +inf for an unobserved (restart-chosen) center so the next in-region
    observation recenters.  ``incumbents`` accumulates the (center, value)
    pair of every closed region for the restart surrogate.
    """

    n_cat_dims: int
    n_num_dims: int
    L_h: int
    L_n: np.ndarray
    succ_count: int = 0
    fail_count: int = 0
    restart_index: int = 0
    center: np.ndarray | None = None
    center_value: float = np.inf
    incumbents: tuple = field(default=())

    def snapshot(self) -> dict:
        return {
            "L_h": int(self.L_h),
            "L_n": [float(v) for v in self.L_n],
            "succ": int(self.succ_count),
            "fail": int(self.fail_count),
            "restart_index": int(self.restart_index),
            "center": None if self.center is None else [float(v) for v in self.center],
        }


def _init_radii(space: SearchSpace) -> tuple[int, np.ndarray]:
    d_h = space.n_categorical
    L_h = int(min(max(round_half_up(INIT_FRACTION * d_h), NOM_RADIUS_MIN), d_h)) if d_h else 0
    L_n = np.full(space.n_numeric, INIT_FRACTION * NUM_RADIUS_MAX)
    return L_h, L_n


def tr_init(space: SearchSpace) -> TrustRegionState:
    """Fresh region: radii at 0.8 of their maxima, counters zero, no center."""
    L_h, L_n = _init_radii(space)
    return TrustRegionState(
        n_cat_dims=space.n_categorical, n_num_dims=space.n_numeric, L_h=L_h, L_n=L_n
    )


def in_trust_region(space: SearchSpace, state: TrustRegionState, X: np.ndarray) -> np.ndarray:
    """Boolean membership mask: Hamming ball AND scaled numeric box."""
    if state.center is None:
        raise ValueError("trust region has no center yet")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    mask = np.ones(X.shape[0], dtype=bool)
    if space.n_categorical:
        C = X[:, space.categorical_idx]
        c = np.asarray(state.center, dtype=float)[space.categorical_idx]
        mask &= np.count_nonzero(C != c, axis=1) <= state.L_h
    if space.n_numeric:
        U = transform(space, X)[:, space.numeric_idx]
        cu = transform(space, state.center)[space.numeric_idx]
        mask &= np.all(np.abs(U - cu) <= state.L_n + 1e-12, axis=1)
    return mask


def tr_update(state: TrustRegionState, improved: bool) -> TrustRegionState | RestartSignal:
    """Advance the success/failure counters, resizing or signalling restart."""
    if improved:
        succ = state.succ_count + 1
        if succ < SUCC_TOL:
            return replace(state, succ_count=succ, fail_count=0)
        L_n = np.minimum(state.L_n * RADIUS_MULTIPLIER, NUM_RADIUS_MAX)
        L_h = state.L_h
        if state.n_cat_dims:
            L_h = int(min(round_half_up(state.L_h * RADIUS_MULTIPLIER), state.n_cat_dims))
        return replace(state, succ_count=0, fail_count=0, L_h=L_h, L_n=L_n)
    fail = state.fail_count + 1
    if fail < FAIL_TOL:
        return replace(state, succ_count=0, fail_count=fail)
    raw_n = state.L_n / RADIUS_MULTIPLIER
    # The restart comparison uses raw pre-rounding values: otherwise the
    # nominal radius rounds 1/1.5 back up to 1 and never terminates.
    if state.n_num_dims and np.any(raw_n < NUM_RADIUS_MIN):
        return RestartSignal()
    if state.n_cat_dims:
        raw_h = state.L_h / RADIUS_MULTIPLIER
        if raw_h < NOM_RADIUS_MIN:
            return RestartSignal()
        L_h = int(max(round_half_up(raw_h), NOM_RADIUS_MIN))
    else:
        L_h = state.L_h
    return replace(state, succ_count=0, fail_count=0, L_h=L_h, L_n=raw_n)


def tr_recenter(
    state: TrustRegionState, space: SearchSpace, new_best: np.ndarray, value: float
) -> TrustRegionState:
    """Move the center to a strictly better in-region point; ties keep it."""
    new_best = np.asarray(new_best, dtype=float)
    if state.center is None:
        return replace(state, center=new_best.copy(), center_value=float(value))
    if not bool(in_trust_region(space, state, new_best)[0]):
        raise ValueError("candidate center lies outside the current trust region")
    if value < state.center_value:
        return replace(state, center=new_best.copy(), center_value=float(value))
    return state


def tr_restart(
    state: TrustRegionState,
    space: SearchSpace,
    aux_kernel_factory,
    seed: int,
    beta: float = DEFAULT_LCB_BETA,
) -> TrustRegionState:
    """Close the current region and open a fresh one around a new center.

    The closed region's incumbent joins the restart history; with at least
    two incumbents a global GP is fitted on them and the best of
    min(100 d, 5000) uniform candidates under the LCB utility becomes the new
    center (unobserved: value +inf).  With fewer, the center is a uniform
    feasible draw.
    """
    incumbents = state.incumbents
    if state.center is not None and np.isfinite(state.center_value):
        incumbents = incumbents + ((np.asarray(state.center, dtype=float), float(state.center_value)),)
    if not incumbents:
        raise ValueError("restart requires at least one recorded incumbent")
    rng = np.random.default_rng(seed)
    if len(incumbents) < 2:
        center = sample_uniform(space, 1, rng)[0]
    else:
        X_inc = np.array([p for p, _ in incumbents])
        y_inc = np.array([v for _, v in incumbents])
        model = gp_fit(transform(space, X_inc), y_inc, aux_kernel_factory())
        n_cand = min(100 * space.n_vars, 5000)
        cands = sample_uniform(space, n_cand, rng)
        mu, var = gp_predict(model, transform(space, cands))
        center = cands[int(np.argmax(lcb(mu, np.sqrt(np.maximum(var, 0.0)), beta)))]
    L_h, L_n = _init_radii(space)
    return TrustRegionState(
        n_cat_dims=space.n_categorical,
        n_num_dims=space.n_numeric,
        L_h=L_h,
        L_n=L_n,
        restart_index=state.restart_index + 1,
        center=np.asarray(center, dtype=float),
        center_value=np.inf,
        incumbents=incumbents,
    )
