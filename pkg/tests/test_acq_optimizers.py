"""Acquisition-optimizer tests against brute-force and closed-form oracles.

The separable categorical oracle enumerates all 4^5 = 1024 assignments, so
"found the optimum" is exact.  Value tables are standard normal draws
rejection-sampled so the top two categories in every dimension differ by at
least 0.5: a near-tie is unrankable from 200 noisy samples and would test tie
resolution rather than optimizer correctness.
"""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from mixbo.acq_optimizers import (
    DEFAULT_PARAMS,
    OPTIMIZER_KINDS,
    make_acq_opt_config,
    optimize_acq,
    optimize_is_hc_gd,
    optimize_is_mab_gd,
    optimize_ls,
    optimize_sa,
    tr_filter,
)
from mixbo.space import (
    VariableSpec,
    check_constraints,
    make_space,
    register_constraint,
    sample_uniform,
    transform,
    validate_point,
)
from mixbo.trust_region import TrustRegionState, in_trust_region

HIT_THRESHOLDS = {"ls": 18, "sa": 18, "ga": 18, "is_hc_gd": 18, "is_mab_gd": 14}


def cat5_space():
    return make_space(
        [VariableSpec(f"c{i}", "cat", categories=("a", "b", "c", "d")) for i in range(5)]
    )


def mixed_space():
    return make_space(
        [
            VariableSpec("c0", "cat", categories=("a", "b", "c")),
            VariableSpec("c1", "cat", categories=("p", "q", "r", "s")),
            VariableSpec("k", "int", bounds=(1, 10)),
            VariableSpec("z", "cont", bounds=(-2.0, 2.0)),
        ]
    )


def numeric_space():
    return make_space(
        [
            VariableSpec("x0", "cont", bounds=(-1.0, 1.0)),
            VariableSpec("x1", "cont", bounds=(-1.0, 1.0)),
        ]
    )


def gapped_tables(seed: int, min_gap: float = 0.5) -> np.ndarray:
    """5x4 normal value tables whose per-dim top-two gap is at least min_gap."""
    rng = np.random.default_rng(100 + seed)
    while True:
        tables = rng.normal(size=(5, 4))
        srt = np.sort(tables, axis=1)
        if np.all(srt[:, 3] - srt[:, 2] >= min_gap):
            return tables


def separable_acq(tables: np.ndarray):
    def acq(U):
        U = np.atleast_2d(U)
        return tables[np.arange(tables.shape[0]), U.astype(int)].sum(axis=1)

    return acq


FULL_GRID = np.array(list(product(range(4), repeat=5)), dtype=float)


class TestSeparableOracle:
    @pytest.mark.parametrize("kind", OPTIMIZER_KINDS)
    def test_hit_rate_vs_enumeration(self, kind):
        cfg = make_acq_opt_config(kind)
        hits = 0
        for seed in range(20):
            acq = separable_acq(gapped_tables(seed))
            best = float(acq(FULL_GRID).max())
            inc = sample_uniform(cat5_space(), 1, seed=seed)[0]
            x, v = optimize_acq(acq, cat5_space(), inc, cfg, seed=seed)
            assert abs(v - float(acq(x[None])[0])) < 1e-12
            if abs(v - best) < 1e-9:
                hits += 1
        assert hits >= HIT_THRESHOLDS[kind]

    @pytest.mark.parametrize("kind", OPTIMIZER_KINDS)
    def test_returned_point_is_valid(self, kind):
        space = cat5_space()
        acq = separable_acq(gapped_tables(3))
        inc = sample_uniform(space, 1, seed=3)[0]
        x, _ = optimize_acq(acq, space, inc, make_acq_opt_config(kind), seed=3)
        validate_point(space, x)


class TestNonDegradation:
    """The returned utility never falls below the incumbent's."""

    @pytest.mark.parametrize("kind", OPTIMIZER_KINDS)
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_value_at_least_incumbent(self, kind, seed):
        space = cat5_space()
        w = np.random.default_rng(seed).normal(size=5)

        def rugged(U):
            U = np.atleast_2d(U)
            return np.sin(3.7 * U @ w) + 0.1 * (U @ w)

        inc = sample_uniform(space, 1, seed=seed)[0]
        inc_v = float(rugged(transform(space, inc)[None])[0])
        _, v = optimize_acq(rugged, space, inc, make_acq_opt_config(kind), seed=seed)
        assert v >= inc_v - 1e-12


class TestNumericAscent:
    def quadratic(self, U, c=np.array([0.62, 0.31])):
        U = np.atleast_2d(U)
        return -np.sum((U - c) ** 2, axis=1)

    def test_hc_gd_reaches_quadratic_peak(self):
        space = numeric_space()
        for seed in range(5):
            inc = sample_uniform(space, 1, seed=seed)[0]
            x, v = optimize_is_hc_gd(self.quadratic, space, inc, seed=seed)
            assert v >= -1e-2
            assert np.max(np.abs(transform(space, x) - [0.62, 0.31])) <= 0.1

    def test_mab_gd_reaches_quadratic_peak(self):
        space = numeric_space()
        for seed in range(5):
            inc = sample_uniform(space, 1, seed=seed)[0]
            x, v = optimize_is_mab_gd(self.quadratic, space, inc, seed=seed)
            assert v >= -1e-3
            assert np.max(np.abs(transform(space, x) - [0.62, 0.31])) <= 0.02

    def test_ls_rejects_numeric_space(self):
        space = numeric_space()
        inc = sample_uniform(space, 1, seed=0)[0]
        with pytest.raises(ValueError, match="categorical"):
            optimize_ls(self.quadratic, space, inc, seed=0)

    def test_sa_handles_numeric_space(self):
        space = numeric_space()
        inc = sample_uniform(space, 1, seed=0)[0]
        _, v = optimize_sa(self.quadratic, space, inc, seed=0)
        assert v >= -1e-2


def _mixed_acq(U):
    U = np.atleast_2d(U)
    return U[:, 0] + U[:, 1] - np.sum((U[:, 2:] - 0.4) ** 2, axis=1)


SMALL_MAB = {"max_n_iters": 20, "n_cand": 200, "gd_inner": 10}


class TestTrustRegionInteraction:
    def region(self, space, L_h=1, L_n=0.15):
        center = np.array([1.0, 2.0, 5.0, 0.0])
        return TrustRegionState(
            n_cat_dims=2,
            n_num_dims=2,
            L_h=L_h,
            L_n=np.full(2, L_n),
            center=center,
            center_value=0.0,
        )

    @pytest.mark.parametrize("kind", ["sa", "ga", "is_hc_gd", "is_mab_gd"])
    def test_returned_point_stays_in_region(self, kind):
        space = mixed_space()
        tr = self.region(space)
        over = SMALL_MAB if kind == "is_mab_gd" else {}
        cfg = make_acq_opt_config(kind, **over)
        for seed in range(3):
            x, _ = optimize_acq(_mixed_acq, space, tr.center, cfg, seed=seed, tr=tr)
            assert bool(in_trust_region(space, tr, x)[0])

    def test_ls_stays_in_hamming_ball(self):
        space = cat5_space()
        center = np.zeros(5)
        tr = TrustRegionState(
            n_cat_dims=5, n_num_dims=0, L_h=1, L_n=np.zeros(0), center=center
        )
        acq = separable_acq(gapped_tables(7))
        x, v = optimize_acq(acq, space, center, make_acq_opt_config("ls"), seed=7, tr=tr)
        assert np.count_nonzero(x != center) <= 1
        # best reachable point under the ball, by enumeration
        ball = FULL_GRID[np.count_nonzero(FULL_GRID != center, axis=1) <= 1]
        assert abs(v - float(acq(ball).max())) < 1e-12

    def test_mab_freezes_categories_at_zero_radius(self):
        space = mixed_space()
        tr = self.region(space, L_h=0)
        cfg = make_acq_opt_config("is_mab_gd", **SMALL_MAB)
        for seed in range(3):
            x, _ = optimize_acq(_mixed_acq, space, tr.center, cfg, seed=seed, tr=tr)
            assert x[0] == tr.center[0] and x[1] == tr.center[1]
            assert bool(in_trust_region(space, tr, x)[0])

    def test_tr_filter_hand_case(self):
        space = mixed_space()
        tr = self.region(space)  # center cats (1,2), int 5, z 0.0; L_n 0.15
        pts = np.array(
            [
                [1.0, 2.0, 5.0, 0.0],  # center itself
                [0.0, 2.0, 5.0, 0.0],  # 1 cat flip: in
                [0.0, 1.0, 5.0, 0.0],  # 2 cat flips: out
                [1.0, 2.0, 10.0, 0.0],  # int 5 -> 10 is 5/9 in unit: out
                [1.0, 2.0, 6.0, 0.5],  # 1/9 and 0.125 unit moves: in
            ]
        )
        kept = tr_filter(pts, tr, space)
        assert kept.shape == (3, 4)
        assert np.array_equal(kept, pts[[0, 1, 4]])


register_constraint("acqopt_first_two_differ", lambda x: x[0] != x[1])


class TestConstraints:
    def space(self):
        return make_space(
            [VariableSpec(f"c{i}", "cat", categories=("a", "b", "c", "d")) for i in range(3)],
            constraint_ids=("acqopt_first_two_differ",),
        )

    @pytest.mark.parametrize("kind", OPTIMIZER_KINDS)
    def test_returned_point_feasible(self, kind):
        space = self.space()
        acq = separable_acq(gapped_tables(11)[:3])
        inc = np.array([0.0, 1.0, 0.0])
        over = SMALL_MAB if kind == "is_mab_gd" else {}
        x, _ = optimize_acq(acq, space, inc, make_acq_opt_config(kind, **over), seed=11)
        assert check_constraints(space, x)
        validate_point(space, x)


class TestConfig:
    def test_defaults_match_documented_values(self):
        assert DEFAULT_PARAMS["ls"] == {"n_vertices": 20000, "n_ascents": 20, "n_spray": 10}
        assert DEFAULT_PARAMS["sa"] == {
            "n_restarts": 3,
            "n_iters": 100,
            "init_temp": 1.0,
            "cooling": 0.95,
            "tolerance": 100,
            "num_sigma": 0.1,
            "proposal_cap": 100,
        }
        assert DEFAULT_PARAMS["ga"] == {
            "n_generations": 500,
            "population": 100,
            "n_parents": 20,
            "n_elite": 10,
            "tournament_size": 3,
            "num_sigma": 0.1,
            "repair_cap": 100,
        }
        assert DEFAULT_PARAMS["is_hc_gd"] == {
            "n_restarts": 3,
            "n_iters": 100,
            "max_n_perturb": 20,
            "num_lr": 0.001,
            "gd_inner": 10,
            "fd_step": 0.0001,
            "stale_tol": 100,
        }
        assert DEFAULT_PARAMS["is_mab_gd"] == {
            "max_n_iters": 200,
            "resample_tol": 500,
            "n_cand": 5000,
            "cont_lr": 0.003,
            "gd_inner": 100,
            "fd_step": 0.0001,
            "gamma": 0.1,
        }

    def test_unknown_kind(self):
        with pytest.raises(KeyError, match="unknown acquisition optimizer kind"):
            make_acq_opt_config("lbfgs")

    def test_unknown_parameter(self):
        with pytest.raises(KeyError, match="unknown parameter"):
            make_acq_opt_config("ls", n_sprey=5)

    def test_nonpositive_count_rejected(self):
        with pytest.raises(ValueError, match="positive count"):
            make_acq_opt_config("ls", n_vertices=0)
        with pytest.raises(ValueError, match="positive count"):
            make_acq_opt_config("ga", population=-3)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            make_acq_opt_config("sa", num_sigma=-0.1)

    def test_float_counts_coerced_to_int(self):
        cfg = make_acq_opt_config("ls", n_spray=10.0)
        assert cfg.params["n_spray"] == 10
        assert isinstance(cfg.params["n_spray"], int)

    def test_default_params_not_shared_between_configs(self):
        a = make_acq_opt_config("sa")
        a.params["n_iters"] = 999
        assert make_acq_opt_config("sa").params["n_iters"] == 100
        assert DEFAULT_PARAMS["sa"]["n_iters"] == 100

    def test_dispatch_matches_direct_call(self):
        space = cat5_space()
        acq = separable_acq(gapped_tables(5))
        inc = sample_uniform(space, 1, seed=5)[0]
        cfg = make_acq_opt_config("sa", n_iters=50)
        xa, va = optimize_acq(acq, space, inc, cfg, seed=5)
        xb, vb = optimize_sa(acq, space, inc, seed=5, params={"n_iters": 50})
        assert np.array_equal(xa, xb) and va == vb


class TestDeterminism:
    @pytest.mark.parametrize("kind", OPTIMIZER_KINDS)
    def test_same_seed_same_output(self, kind):
        space = cat5_space() if kind == "ls" else mixed_space()
        acq = separable_acq(gapped_tables(9)) if kind == "ls" else _mixed_acq
        inc = sample_uniform(space, 1, seed=9)[0]
        over = SMALL_MAB if kind == "is_mab_gd" else {}
        cfg = make_acq_opt_config(kind, **over)
        xa, va = optimize_acq(acq, space, inc, cfg, seed=9)
        xb, vb = optimize_acq(acq, space, inc, cfg, seed=9)
        assert np.array_equal(xa, xb) and va == vb


class TestDegenerate:
    @pytest.mark.parametrize("kind", OPTIMIZER_KINDS)
    def test_constant_acquisition(self, kind):
        space = cat5_space()

        def flat(U):
            return np.zeros(len(np.atleast_2d(U)))

        inc = sample_uniform(space, 1, seed=2)[0]
        over = SMALL_MAB if kind == "is_mab_gd" else {}
        x, v = optimize_acq(flat, space, inc, make_acq_opt_config(kind, **over), seed=2)
        assert v == 0.0
        validate_point(space, x)

    def test_bandit_concentrates_on_rewarded_category(self):
        # single dim, indicator reward: the rewarded arm must dominate pulls
        space = make_space([VariableSpec("c0", "cat", categories=("a", "b", "c", "d"))])
        cfg = make_acq_opt_config("is_mab_gd")
        for seed in range(20):
            target = seed % 4
            rows: list[int] = []

            def indicator(U, target=target, rows=rows):
                U = np.atleast_2d(U)
                rows.extend(int(r[0]) for r in U)
                return (U[:, 0].astype(int) == target).astype(float)

            inc = sample_uniform(space, 1, seed=seed)[0]
            optimize_acq(indicator, space, inc, cfg, seed=seed)
            pulls = rows[1:]  # first evaluation is the incumbent
            assert len(pulls) == 200
            assert pulls.count(target) / len(pulls) > 0.5
