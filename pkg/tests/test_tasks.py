"""Benchmark task tests against independently coded scalar oracles.

Every synthetic objective is re-derived here as a plain per-point Python
loop (math module only) and compared to the vectorized implementation, so a
transcription slip in either place shows up as a mismatch.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from mixbo.tasks import (
    PEST_CONTROL_V1,
    ackley,
    category_value_grid,
    get_task,
    griewank,
    levy,
    list_task_ids,
    make_ackley20,
    make_ackley53,
    make_pest_control,
    make_sfu_task,
    pest_control_objective,
    rastrigin,
    rosenbrock,
    rotated_hyper_ellipsoid,
    sphere,
    styblinski_tang,
)

# ------------------------------------------------------------ scalar oracles


def ackley_scalar(x, a=20.0, b=0.2, c=2.0 * math.pi):
    d = len(x)
    s1 = sum(v * v for v in x) / d
    s2 = sum(math.cos(c * v) for v in x) / d
    return -a * math.exp(-b * math.sqrt(s1)) - math.exp(s2) + a + math.e


def sphere_scalar(x):
    return sum(v * v for v in x)


def rhe_scalar(x):
    # Nested double sum; the implementation uses the weighted single sum.
    return sum(sum(x[j] ** 2 for j in range(i + 1)) for i in range(len(x)))


def rastrigin_scalar(x):
    return 10.0 * len(x) + sum(v * v - 10.0 * math.cos(2.0 * math.pi * v) for v in x)


def rosenbrock_scalar(x):
    return sum(
        100.0 * (x[i + 1] - x[i] ** 2) ** 2 + (x[i] - 1.0) ** 2 for i in range(len(x) - 1)
    )


def levy_scalar(x):
    w = [1.0 + (v - 1.0) / 4.0 for v in x]
    total = math.sin(math.pi * w[0]) ** 2
    for i in range(len(x) - 1):
        total += (w[i] - 1.0) ** 2 * (1.0 + 10.0 * math.sin(math.pi * w[i] + 1.0) ** 2)
    total += (w[-1] - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * w[-1]) ** 2)
    return total


def griewank_scalar(x):
    s = sum(v * v for v in x) / 4000.0
    p = 1.0
    for i, v in enumerate(x):
        p *= math.cos(v / math.sqrt(i + 1.0))
    return s - p + 1.0


def styblinski_scalar(x):
    return 0.5 * sum(v**4 - 16.0 * v * v + 5.0 * v for v in x)


ORACLE_PAIRS = [
    (ackley, ackley_scalar, 32.768),
    (sphere, sphere_scalar, 5.12),
    (rotated_hyper_ellipsoid, rhe_scalar, 65.536),
    (rastrigin, rastrigin_scalar, 5.12),
    (rosenbrock, rosenbrock_scalar, 2.048),
    (levy, levy_scalar, 10.0),
    (griewank, griewank_scalar, 600.0),
    (styblinski_tang, styblinski_scalar, 5.0),
]


def pest_oracle(actions):
    """Independent unrolling of the pest-control recurrence from the constants."""
    c = PEST_CONTROL_V1
    growth = np.random.default_rng(c["internal_seed"]).uniform(
        c["growth_lo"], c["growth_hi"], c["n_stations"]
    )
    uses = [0] * len(c["prices"])
    z = c["init_infestation"]
    cost = 0.0
    infested = 0.0
    for i in range(c["n_stations"]):
        k = int(actions[i])
        cost += c["prices"][k] * c["discount"] ** uses[k]
        kill = c["kill_rates"][k] * c["resistance"] ** uses[k]
        z = min(1.0, z * growth[i] * (1.0 - kill))
        infested += z
        uses[k] += 1
    return cost + c["penalty"] * infested


# ------------------------------------------------------------------- tests


class TestSyntheticFunctions:
    @pytest.mark.parametrize("fn,oracle,half_width", ORACLE_PAIRS, ids=lambda p: getattr(p, "__name__", ""))
    def test_matches_scalar_oracle(self, fn, oracle, half_width):
        rng = np.random.default_rng(42)
        for d in (1, 2, 5, 10):
            X = rng.uniform(-half_width, half_width, size=(8, d))
            got = fn(X)
            want = [oracle(list(row)) for row in X]
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_single_point_promotes_to_batch_of_one(self):
        assert ackley(np.zeros(4)).shape == (1,)

    def test_known_minima(self):
        np.testing.assert_allclose(ackley(np.zeros((1, 6))), [0.0], atol=1e-12)
        np.testing.assert_allclose(sphere(np.zeros((1, 6))), [0.0], atol=0)
        np.testing.assert_allclose(rastrigin(np.zeros((1, 6))), [0.0], atol=1e-12)
        np.testing.assert_allclose(rosenbrock(np.ones((1, 6))), [0.0], atol=0)
        np.testing.assert_allclose(levy(np.ones((1, 6))), [0.0], atol=1e-12)
        np.testing.assert_allclose(griewank(np.zeros((1, 6))), [0.0], atol=0)
        arg = np.full((1, 3), -2.903534027771177)
        np.testing.assert_allclose(styblinski_tang(arg), [3 * -39.166165703771415], rtol=1e-12)


class TestCategoryGrid:
    def test_endpoints_and_spacing(self):
        grid = category_value_grid((-32.768, 32.768), 11)
        assert grid[0] == -32.768 and grid[-1] == 32.768
        np.testing.assert_allclose(np.diff(grid), 6.5536, rtol=1e-12)
        assert grid[5] == 0.0

    def test_two_point_grid_is_the_bounds(self):
        np.testing.assert_allclose(category_value_grid((0.0, 1.0), 2), [0.0, 1.0])


class TestSfuTasks:
    def test_all_categorical_layout(self):
        task = make_sfu_task("ackley", n_dims=10, n_categories=5)
        assert task.space.n_vars == 10
        assert task.space.n_categorical == 10
        assert all(len(v.categories) == 5 for v in task.space.variables)

    def test_mixed_layout_puts_categoricals_first(self):
        task = make_sfu_task("sphere", n_dims=4, n_categories=3, n_continuous=2)
        kinds = [v.kind for v in task.space.variables]
        assert kinds == ["cat", "cat", "cont", "cont"]

    def test_category_index_decodes_to_grid_value(self):
        task = make_sfu_task("sphere", n_dims=4, n_categories=3)
        # Grid over [-5.12, 5.12] with 3 points: index 0 -> -5.12, index 1 -> 0.
        assert task.evaluate(np.zeros(4)) == pytest.approx(4 * 5.12**2, rel=1e-12)
        assert task.evaluate(np.ones(4)) == pytest.approx(0.0, abs=1e-12)

    def test_known_optimum_only_when_grid_contains_argmin(self):
        assert make_sfu_task("ackley", 10, 5).known_optimum == 0.0
        assert make_sfu_task("ackley", 10, 4).known_optimum is None
        assert make_sfu_task("rosenbrock", 4, 5).known_optimum is None
        assert make_sfu_task("sphere", 3, 0).known_optimum == 0.0

    def test_known_argmin_evaluates_to_known_optimum(self):
        task = make_sfu_task("styblinski_tang", 3, 0)
        assert task.evaluate(task.known_argmin) == pytest.approx(task.known_optimum, rel=1e-12)

    def test_batch_and_single_evaluation_agree(self):
        task = make_sfu_task("rastrigin", n_dims=5, n_categories=4, n_continuous=2)
        X = np.column_stack(
            [
                np.random.default_rng(0).integers(0, 4, size=(6, 3)),
                np.random.default_rng(1).uniform(-5.12, 5.12, size=(6, 2)),
            ]
        ).astype(float)
        batch = task.evaluate(X)
        np.testing.assert_allclose(batch, [task.evaluate(row) for row in X])

    def test_invalid_category_index_rejected(self):
        task = make_sfu_task("sphere", n_dims=4, n_categories=3)
        with pytest.raises(ValueError):
            task.evaluate(np.array([3.0, 0.0, 0.0, 0.0]))

    def test_continuous_only_requires_matching_counts(self):
        with pytest.raises(ValueError):
            make_sfu_task("ackley", n_dims=3, n_categories=0, n_continuous=5)


class TestFixedTasks:
    def test_ackley20_shape(self):
        task = make_ackley20()
        assert task.task_id == "ackley20"
        assert task.space.n_vars == 20 and task.space.n_categorical == 20
        assert all(len(v.categories) == 11 for v in task.space.variables)
        assert task.known_optimum == 0.0
        # The middle grid index decodes to 0, the global argmin.
        np.testing.assert_allclose(task.known_argmin, np.full(20, 5.0))
        assert task.evaluate(task.known_argmin) == pytest.approx(0.0, abs=1e-12)

    def test_ackley53_shape(self):
        task = make_ackley53()
        assert task.space.n_categorical == 50 and task.space.n_numeric == 3
        assert task.space.variables[0].categories == (0.0, 1.0)
        assert task.space.variables[-1].bounds == (-1.0, 1.0)
        assert task.evaluate(np.zeros(53)) == pytest.approx(0.0, abs=1e-12)
        assert task.evaluate(np.r_[1.0, np.zeros(52)]) > 0.1

    def test_pest_space(self):
        task = make_pest_control()
        assert task.space.n_vars == 25 and task.space.n_categorical == 25
        assert all(len(v.categories) == 5 for v in task.space.variables)
        assert task.known_optimum is None


class TestPestControl:
    def test_matches_independent_recurrence_oracle(self):
        rng = np.random.default_rng(123)
        for _ in range(20):
            actions = rng.integers(0, 5, size=25).astype(float)
            np.testing.assert_allclose(
                pest_control_objective(actions), pest_oracle(actions), rtol=1e-12
            )

    def test_constant_action_profiles_match_oracle(self):
        for k in range(5):
            actions = np.full(25, float(k))
            np.testing.assert_allclose(
                pest_control_objective(actions), pest_oracle(actions), rtol=1e-12
            )

    def test_frozen_goldens(self):
        # Pinned outputs guard both the recurrence and the internal growth draw.
        assert pest_control_objective(np.zeros(25)) == pytest.approx(
            15.570745807781979, abs=1e-12
        )
        assert pest_control_objective(np.ones(25)) == pytest.approx(
            17.996924231334585, abs=1e-12
        )
        assert pest_control_objective(np.full(25, 4.0)) == pytest.approx(
            15.508299418710862, abs=1e-12
        )

    def test_do_nothing_cost_is_pure_infestation(self):
        # Action 0 is free and kills nothing, so the objective is the
        # penalty-weighted sum of the saturating infestation recurrence.
        c = PEST_CONTROL_V1
        growth = np.random.default_rng(c["internal_seed"]).uniform(
            c["growth_lo"], c["growth_hi"], 25
        )
        z, total = c["init_infestation"], 0.0
        for g in growth:
            z = min(1.0, z * g)
            total += z
        assert pest_control_objective(np.zeros(25)) == pytest.approx(total, rel=1e-12)

    def test_task_evaluate_delegates(self):
        task = make_pest_control()
        actions = np.tile(np.arange(5.0), 5)
        assert task.evaluate(actions) == pytest.approx(pest_control_objective(actions))
        X = np.stack([np.zeros(25), actions])
        np.testing.assert_allclose(
            task.evaluate(X), [pest_control_objective(r) for r in X]
        )


class TestGetTask:
    def test_fixed_ids(self):
        for task_id in ("ackley20", "ackley53", "pest"):
            assert get_task(task_id).task_id == task_id

    def test_sfu_grammar(self):
        task = get_task("sfu:ackley:d=10:cat=5")
        assert task.space.n_vars == 10
        assert get_task("sfu:sphere").space.n_vars == 10
        mixed = get_task("sfu:rastrigin:d=6:cat=4:cont=2")
        assert mixed.space.n_categorical == 4 and mixed.space.n_numeric == 2

    def test_malformed_options_are_value_errors(self):
        with pytest.raises(ValueError):
            get_task("sfu:ackley:d=ten")
        with pytest.raises(ValueError):
            get_task("sfu:ackley:q=3")

    def test_unknown_ids_are_key_errors(self):
        with pytest.raises(KeyError):
            get_task("whatever")
        with pytest.raises(KeyError):
            get_task("sfu:nope")

    def test_listing_covers_fixed_tasks(self):
        ids = list_task_ids()
        for task_id in ("ackley20", "ackley53", "pest"):
            assert task_id in ids
