"""GP regression tests against a dense linear-algebra oracle.

The oracle below rebuilds every posterior quantity with plain
``np.linalg.solve``/``slogdet`` on the full covariance matrix, sharing no
code with the Cholesky implementation under test.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.stats import norm

from mixbo.space import VariableSpec, make_space, sample_uniform, transform
from mixbo.surrogates.gp import (
    NOISE_FLOOR,
    GPModel,
    gp_fit,
    gp_fit_fixed,
    gp_nll,
    gp_predict,
    heldout_log_likelihood,
    nll_value_and_grad,
    posterior_from_gram,
)
from mixbo.surrogates.kernels import make_kernel

# ------------------------------------------------------------------ oracles


def dense_predict_oracle(model: GPModel, U_test: np.ndarray):
    """Posterior mean/variance via a full solve, destandardized."""
    kernel = model.kernel
    kp = model.log_params[:-1]
    n = len(model.U_train)
    K = kernel.gram(kernel.prepare(model.U_train), kp)
    K = K + (model.noise + model.jitter) * np.eye(n)
    ks = kernel.cross(U_test, model.U_train, kp)
    kss = kernel.diag(U_test, kp)
    mu_s = ks @ np.linalg.solve(K, model.y_s)
    var_s = kss - np.sum(ks * np.linalg.solve(K, ks.T).T, axis=1)
    mu = mu_s * model.y_std + model.y_mean
    var = np.maximum(var_s, 0.0) * model.y_std**2
    return mu, var


def dense_nll_oracle(kernel, U, y_s, params):
    """Standardized-marginal negative log likelihood via slogdet."""
    n = len(U)
    noise = NOISE_FLOOR + math.exp(params[-1])
    K = kernel.gram(kernel.prepare(U), params[:-1]) + noise * np.eye(n)
    _, logdet = np.linalg.slogdet(K)
    quad = float(y_s @ np.linalg.solve(K, y_s))
    return 0.5 * quad + 0.5 * logdet + 0.5 * n * math.log(2.0 * math.pi)


def make_dataset(seed: int):
    """Random small mixed/categorical/numeric dataset with a smooth signal."""
    rng = np.random.default_rng(seed)
    layout = seed % 3
    if layout == 0:
        specs = [
            VariableSpec("c1", "cat", categories=("a", "b", "c")),
            VariableSpec("c2", "cat", categories=("a", "b", "c", "d")),
            VariableSpec("x1", "cont", bounds=(0.0, 1.0)),
            VariableSpec("x2", "cont", bounds=(-1.0, 1.0)),
        ]
    elif layout == 1:
        specs = [
            VariableSpec("c1", "cat", categories=("a", "b", "c", "d", "e")),
            VariableSpec("c2", "cat", categories=("a", "b")),
        ]
    else:
        specs = [
            VariableSpec("x1", "cont", bounds=(0.0, 1.0)),
            VariableSpec("x2", "cont", bounds=(0.0, 2.0)),
        ]
    space = make_space(specs)
    n = int(rng.integers(4, 13))
    X = sample_uniform(space, n, seed=rng.integers(0, 2**31))
    U = transform(space, X)
    y = np.sin(U.sum(axis=1) * 2.0) + 0.3 * rng.normal(size=n)
    return space, U, y


def fixed_model(seed: int):
    space, U, y = make_dataset(seed)
    kind = ("o", "to", "hed")[seed % 3]
    kernel = make_kernel(kind, space, hed_m=6, hed_seed=seed)
    rng = np.random.default_rng(1000 + seed)
    params = np.concatenate(
        [rng.uniform(-0.5, 0.5, kernel.n_params), [math.log(rng.uniform(0.005, 0.1))]]
    )
    return space, U, y, gp_fit_fixed(U, y, kernel, params)


class TestPosteriorFromGram:
    def test_one_point_closed_form(self):
        # K = [[1]], noise 0.01, y = 2: mean 2/1.01, variance 1 - 1/1.01.
        mu, var = posterior_from_gram(
            np.array([[1.0]]), np.array([[1.0]]), np.array([1.0]), np.array([2.0]), 0.01
        )
        assert mu[0] == pytest.approx(2.0 / 1.01, abs=1e-12)
        assert var[0] == pytest.approx(1.0 - 1.0 / 1.01, abs=1e-12)

    def test_matches_dense_solve(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(9, 4))
        K = A[:6] @ A[:6].T + 4.0 * np.eye(6)
        ks = A[6:] @ A[:6].T  # rows are test points
        kss = np.sum(A[6:] ** 2, axis=1) + 4.0
        y = rng.normal(size=6)
        mu, var = posterior_from_gram(K, ks, kss, y, 0.3)
        Kn = K + 0.3 * np.eye(6)
        np.testing.assert_allclose(mu, ks @ np.linalg.solve(Kn, y), atol=1e-10)
        np.testing.assert_allclose(
            var, kss - np.sum(ks * np.linalg.solve(Kn, ks.T).T, axis=1), atol=1e-10
        )


class TestPredictOracle:
    @pytest.mark.parametrize("seed", range(10))
    def test_prediction_matches_dense_oracle(self, seed):
        space, U, y, model = fixed_model(seed)
        U_test = transform(space, sample_uniform(space, 6, seed=5000 + seed))
        mu, var = gp_predict(model, U_test)
        mu_o, var_o = dense_predict_oracle(model, U_test)
        np.testing.assert_allclose(mu, mu_o, atol=1e-8)
        np.testing.assert_allclose(var, var_o, atol=1e-8)

    def test_trained_model_matches_oracle_too(self):
        space, U, y = make_dataset(0)
        model = gp_fit(U, y, make_kernel("to", space), epochs=15)
        U_test = transform(space, sample_uniform(space, 5, seed=77))
        mu, var = gp_predict(model, U_test)
        mu_o, var_o = dense_predict_oracle(model, U_test)
        np.testing.assert_allclose(mu, mu_o, atol=1e-8)
        np.testing.assert_allclose(var, var_o, atol=1e-8)

    def test_include_noise_adds_scaled_noise(self):
        _, _, _, model = fixed_model(1)
        _, U, _ = make_dataset(1)
        _, var = gp_predict(model, U)
        _, var_n = gp_predict(model, U, include_noise=True)
        np.testing.assert_allclose(var_n - var, model.noise * model.y_std**2, rtol=1e-9)

    def test_variance_nonnegative_and_shrinks_at_data(self):
        space, U, y, model = fixed_model(3)
        _, var_train = gp_predict(model, U)
        assert np.all(var_train >= 0.0)
        far = transform(space, sample_uniform(space, 50, seed=9))
        _, var_far = gp_predict(model, far)
        assert np.all(var_far >= 0.0)
        assert var_train.mean() < var_far.mean() + 1e-9

    def test_near_interpolation_at_small_noise(self):
        space, U, y = make_dataset(2)
        kernel = make_kernel("to", space)
        params = np.concatenate([kernel.init_params(), [math.log(1e-12)]])
        model = gp_fit_fixed(U, y, kernel, params)
        mu, _ = gp_predict(model, U)
        np.testing.assert_allclose(mu, y, atol=1e-3)


class TestNll:
    @pytest.mark.parametrize("seed", range(6))
    def test_value_matches_slogdet_oracle(self, seed):
        space, U, y = make_dataset(seed)
        kernel = make_kernel(("o", "to", "hed")[seed % 3], space, hed_m=5, hed_seed=0)
        y_s = (y - y.mean()) / (y.std() if y.std() > 1e-12 else 1.0)
        rng = np.random.default_rng(seed)
        params = np.concatenate(
            [rng.uniform(-0.4, 0.4, kernel.n_params), [math.log(0.05)]]
        )
        value, _, _ = nll_value_and_grad(kernel, kernel.prepare(U), U, y_s, params, with_grad=False)
        assert value == pytest.approx(dense_nll_oracle(kernel, U, y_s, params), rel=1e-10)

    @pytest.mark.parametrize("seed", range(4))
    def test_gradient_matches_finite_differences(self, seed):
        space, U, y = make_dataset(seed)
        kernel = make_kernel(("o", "to", "hed")[seed % 3], space, hed_m=5, hed_seed=1)
        y_s = (y - y.mean()) / (y.std() if y.std() > 1e-12 else 1.0)
        rng = np.random.default_rng(50 + seed)
        params = np.concatenate(
            [rng.uniform(-0.3, 0.3, kernel.n_params), [math.log(0.05)]]
        )
        cache = kernel.prepare(U)
        _, grad, _ = nll_value_and_grad(kernel, cache, U, y_s, params)
        step = 1e-6
        for j in range(len(params)):
            lo_p, hi_p = params.copy(), params.copy()
            lo_p[j] -= step
            hi_p[j] += step
            f_lo = nll_value_and_grad(kernel, cache, U, y_s, lo_p, with_grad=False)[0]
            f_hi = nll_value_and_grad(kernel, cache, U, y_s, hi_p, with_grad=False)[0]
            fd = (f_hi - f_lo) / (2.0 * step)
            assert grad[j] == pytest.approx(fd, rel=1e-3, abs=1e-6)

    def test_gp_nll_reports_model_value(self):
        _, _, _, model = fixed_model(4)
        assert gp_nll(model) == model.nll


class TestFit:
    def test_training_never_worsens_nll(self):
        space, U, y = make_dataset(5)
        model = gp_fit(U, y, make_kernel("o", space), epochs=30)
        assert model.nll <= model.nll_init + 1e-12
        assert model.epochs == 30

    def test_deterministic(self):
        space, U, y = make_dataset(6)
        a = gp_fit(U, y, make_kernel("to", space), epochs=10)
        b = gp_fit(U, y, make_kernel("to", space), epochs=10)
        np.testing.assert_array_equal(a.log_params, b.log_params)
        assert a.nll == b.nll

    def test_warm_start_and_clipping(self):
        space, U, y = make_dataset(7)
        kernel = make_kernel("o", space)
        init = np.concatenate([kernel.init_params() + 0.1, [math.log(0.02)]])
        model = gp_fit(U, y, kernel, epochs=0, init_params=init)
        np.testing.assert_allclose(model.log_params, init)
        wild = init.copy()
        wild[0] = 99.0
        clipped = gp_fit(U, y, kernel, epochs=0, init_params=wild)
        assert clipped.log_params[0] == kernel.hi[0]

    def test_noise_floor_enforced(self):
        space, U, y = make_dataset(8)
        kernel = make_kernel("to", space)
        model = gp_fit_fixed(U, y, kernel, np.concatenate([kernel.init_params(), [-40.0]]))
        assert model.noise >= NOISE_FLOOR

    def test_constant_targets_are_safe(self):
        space, U, _ = make_dataset(0)
        y = np.full(len(U), 3.5)
        model = gp_fit(U, y, make_kernel("to", space), epochs=5)
        assert model.y_std == 1.0
        mu, var = gp_predict(model, U)
        assert np.all(np.isfinite(mu)) and np.all(np.isfinite(var))
        np.testing.assert_allclose(mu, 3.5, atol=1e-6)

    def test_two_point_minimum(self):
        space, U, y = make_dataset(1)
        model = gp_fit(U[:2], y[:2], make_kernel("o", space), epochs=5)
        mu, var = gp_predict(model, U[:2])
        assert np.all(np.isfinite(mu)) and np.all(var >= 0)

    def test_diagnostics_payload(self):
        _, _, _, model = fixed_model(2)
        diag = model.diagnostics()
        assert set(diag) == {"nll", "jitter", "epochs", "noise"}
        assert diag["noise"] == model.noise


class TestHeldoutLogLikelihood:
    def test_matches_gaussian_density_oracle(self):
        space, U, y, model = fixed_model(5)
        U_test = transform(space, sample_uniform(space, 8, seed=21))
        y_test = np.random.default_rng(22).normal(size=8)
        mu, var = gp_predict(model, U_test, include_noise=True)
        want = float(np.sum(norm.logpdf(y_test, loc=mu, scale=np.sqrt(var))))
        got = heldout_log_likelihood(model, U_test, y_test)
        assert got == pytest.approx(want, rel=1e-12)

    def test_better_fit_scores_higher(self):
        space, U, y = make_dataset(3)
        good = gp_fit(U, y, make_kernel("to", space), epochs=40)
        kernel = make_kernel("to", space)
        awful = gp_fit_fixed(
            U, y, kernel, np.concatenate([kernel.init_params() - 4.0, [math.log(3.0)]])
        )
        U_test = transform(space, sample_uniform(space, 10, seed=30))
        y_test = np.sin(U_test.sum(axis=1) * 2.0)
        assert heldout_log_likelihood(good, U_test, y_test) > heldout_log_likelihood(
            awful, U_test, y_test
        )
