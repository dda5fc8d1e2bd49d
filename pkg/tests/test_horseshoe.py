"""Sparse Bayesian linear surrogate tests, including synthetic recovery.

The recovery oracle plants a single active binary feature with a known
weight and checks the Gibbs sampler finds it while zeroing the rest; the
sampled-objective tests rebuild predictions from an explicit feature
expansion.
"""

from __future__ import annotations

import numpy as np
import pytest

from mixbo.space import VariableSpec, make_space, sample_uniform
from mixbo.surrogates.horseshoe import (
    HorseshoeModel,
    feature_index,
    hs_features,
    hs_fit,
    hs_sample_objective,
)


def two_var_space():
    return make_space(
        [
            VariableSpec("c0", "cat", categories=("a", "b", "c")),
            VariableSpec("c1", "cat", categories=("a", "b")),
        ]
    )


def recovery_space():
    # One 12-way variable carrying the signal on category 1 plus two
    # 3-way nuisance variables; category 1 is rare enough that the
    # no-intercept standardization offset stays small.
    return make_space(
        [
            VariableSpec("c0", "cat", categories=tuple(f"v{j}" for j in range(12))),
            VariableSpec("n0", "cat", categories=("a", "b", "c")),
            VariableSpec("n1", "cat", categories=("a", "b", "c")),
        ]
    )


class TestFeatureIndex:
    def test_mains_then_pairs_reference_category_dropped(self):
        idx = feature_index(two_var_space())
        assert idx == [
            ("main", 0, 1),
            ("main", 0, 2),
            ("main", 1, 1),
            ("pair", (0, 1), (1, 1)),
            ("pair", (0, 2), (1, 1)),
        ]

    def test_feature_count_formula(self):
        # mains: sum (C_i - 1); pairs: sum over var pairs of products.
        idx = feature_index(recovery_space())
        assert len(idx) == (11 + 2 + 2) + (11 * 2 + 11 * 2 + 2 * 2)

    def test_rejects_non_categorical_space(self):
        mixed = make_space(
            [
                VariableSpec("c", "cat", categories=("a", "b")),
                VariableSpec("x", "cont", bounds=(0.0, 1.0)),
            ]
        )
        with pytest.raises(ValueError):
            feature_index(mixed)


class TestFeatureMatrix:
    def test_binary_indicators_hand_case(self):
        space = two_var_space()
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 1.0]])
        F = hs_features(space, X, feature_index(space))
        np.testing.assert_array_equal(
            F,
            [
                [0, 0, 0, 0, 0],
                [1, 0, 1, 1, 0],
                [0, 1, 1, 0, 1],
            ],
        )

    def test_default_index_matches_explicit(self):
        space = two_var_space()
        X = sample_uniform(space, 10, seed=0)
        np.testing.assert_array_equal(
            hs_features(space, X), hs_features(space, X, feature_index(space))
        )


class TestFit:
    def test_recovers_planted_coefficient(self):
        space = recovery_space()
        idx = feature_index(space)
        target = idx.index(("main", 0, 1))
        others = np.delete(np.arange(len(idx)), target)
        coefs, zero_fracs, max_nuisance = [], [], []
        for seed in range(20):
            X = sample_uniform(space, 120, seed=seed)
            noise = 0.05 * np.random.default_rng(900 + seed).normal(size=120)
            y = 3.0 * (X[:, 0] == 1.0) + noise
            model = hs_fit(space, X, y, seed=seed)
            post_mean = model.draws.mean(axis=0) * model.y_std
            coefs.append(post_mean[target])
            dead = np.all(model.draws[:, others] == 0.0, axis=0)
            zero_fracs.append(dead.mean())
            alive = np.abs(post_mean[others][~dead])
            max_nuisance.append(alive.max() if alive.size else 0.0)
        assert abs(np.median(coefs) - 3.0) <= 0.5
        # Inactive features: most are thresholded to exactly zero, and any
        # survivors (absorbing the centering offset) stay far below the signal.
        assert np.mean(zero_fracs) >= 0.8
        assert max(max_nuisance) < 0.5

    def test_deterministic_for_fixed_seed(self):
        space = two_var_space()
        X = sample_uniform(space, 30, seed=4)
        y = np.random.default_rng(5).normal(size=30)
        a = hs_fit(space, X, y, seed=9)
        b = hs_fit(space, X, y, seed=9)
        np.testing.assert_array_equal(a.draws, b.draws)
        assert not np.array_equal(a.draws, hs_fit(space, X, y, seed=10).draws)

    def test_draw_counts_respected(self):
        space = two_var_space()
        X = sample_uniform(space, 20, seed=1)
        y = np.random.default_rng(2).normal(size=20)
        model = hs_fit(space, X, y, seed=0, n_burn=10, n_draws=25)
        assert model.draws.shape == (25, model.n_features)

    def test_needs_two_observations(self):
        space = two_var_space()
        X = sample_uniform(space, 1, seed=0)
        with pytest.raises(ValueError):
            hs_fit(space, X, np.array([1.0]), seed=0)

    def test_two_point_smoke(self):
        space = two_var_space()
        X = sample_uniform(space, 2, seed=3)
        model = hs_fit(space, X, np.array([0.5, -0.5]), seed=0)
        assert np.all(np.isfinite(model.draws))

    def test_pure_noise_is_fully_thresholded(self):
        space = two_var_space()
        X = sample_uniform(space, 60, seed=6)
        y = 0.01 * np.random.default_rng(7).normal(size=60)
        model = hs_fit(space, X, y, seed=1)
        assert np.all(model.draws == 0.0)

    def test_standardization_stored(self):
        space = two_var_space()
        X = sample_uniform(space, 25, seed=8)
        y = 5.0 + np.random.default_rng(9).normal(size=25)
        model = hs_fit(space, X, y, seed=2)
        assert model.y_mean == pytest.approx(y.mean())
        assert model.y_std == pytest.approx(y.std())


class TestSampledObjective:
    def make_model(self):
        space = recovery_space()
        X = sample_uniform(space, 80, seed=11)
        y = 2.0 * (X[:, 0] == 1.0) - 1.0 * (X[:, 1] == 2.0) + 0.05 * np.random.default_rng(12).normal(size=80)
        return space, hs_fit(space, X, y, seed=3)

    def test_draw_selection_is_seeded(self):
        _, model = self.make_model()
        a = hs_sample_objective(model, seed=5)
        b = hs_sample_objective(model, seed=5)
        assert a.draw_index == b.draw_index
        np.testing.assert_array_equal(a.coefficients, b.coefficients)
        np.testing.assert_array_equal(a.coefficients, model.draws[a.draw_index])

    def test_coefficient_vector_length(self):
        _, model = self.make_model()
        assert len(hs_sample_objective(model, seed=0).coefficients) == model.n_features

    def test_evaluate_matches_feature_expansion_oracle(self):
        space, model = self.make_model()
        sampled = hs_sample_objective(model, seed=7)
        X = sample_uniform(space, 15, seed=13)
        F = hs_features(space, X, model.index)
        want = F @ sampled.coefficients * model.y_std + model.y_mean
        np.testing.assert_allclose(sampled.evaluate(X), want, rtol=1e-12)
        assert sampled.evaluate(X[0]) == pytest.approx(want[0], rel=1e-12)

    def test_empty_model_rejected(self):
        space = two_var_space()
        idx = feature_index(space)
        empty = HorseshoeModel(space, idx, np.zeros((0, len(idx))))
        with pytest.raises(ValueError):
            hs_sample_objective(empty, seed=0)
