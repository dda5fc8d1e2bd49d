"""Exact GP regression with marginal-likelihood hyperparameter descent.

Targets are standardized per fit; the prior mean is zero on the standardized
scale.  Hyperparameters (kernel params + observation noise) are optimized in
log space by Adam on the negative log marginal likelihood with analytic
gradients; the best parameters seen during the descent are kept, so the final
NLL never exceeds the initial one.  Cholesky factorizations get escalating
diagonal jitter (1e-8 up to 1e-4) before giving up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, solve_triangular

NOISE_FLOOR = 1e-5
JITTER_START = 1e-8
JITTER_MAX = 1e-4
ADAM_LR = 0.03
ADAM_EPOCHS = 100
LOG_NOISE_BOUNDS = (-16.0, 4.0)


class FitError(RuntimeError):
    """Cholesky factorization failed even at the maximum jitter."""


def _chol_with_jitter(A: np.ndarray) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of A, escalating diagonal jitter on failure."""
    try:
        return cholesky(A, lower=True), 0.0
    except LinAlgError:
        pass
    jitter = JITTER_START
    eye = np.eye(A.shape[0])
    while jitter <= JITTER_MAX * (1.0 + 1e-12):
        try:
            return cholesky(A + jitter * eye, lower=True), jitter
        except LinAlgError:
            jitter *= 10.0
    raise FitError(f"covariance not positive definite at jitter {JITTER_MAX}")


def nll_value_and_grad(
    kernel, cache, U: np.ndarray, y_s: np.ndarray, params: np.ndarray, with_grad: bool = True
):
    """NLL of the standardized targets and its gradient in parameter space.

    params = kernel params + [log_noise_excess]; observation noise is
    NOISE_FLOOR + exp(log_noise_excess) so the floor is a hard bound.
    """
    n = len(y_s)
    noise = NOISE_FLOOR + np.exp(params[-1])
    K = kernel.gram(cache, params[:-1]) + noise * np.eye(n)
    L, jitter = _chol_with_jitter(K)
    alpha = cho_solve((L, True), y_s)
    nll = 0.5 * y_s @ alpha + np.sum(np.log(np.diag(L))) + 0.5 * n * np.log(2.0 * np.pi)
    if not with_grad:
        return nll, None, (L, alpha, noise, jitter)
    K_inv = cho_solve((L, True), np.eye(n))
    W = K_inv - np.outer(alpha, alpha)
    g_kernel = 0.5 * kernel.grad_dot(cache, params[:-1], W, K - noise * np.eye(n))
    g_noise = 0.5 * np.exp(params[-1]) * np.trace(W)
    grad = np.concatenate([g_kernel, [g_noise]])
    return nll, grad, (L, alpha, noise, jitter)


@dataclass
class GPModel:
    """Fitted GP: kernel, best hyperparameters, and cached factorization."""

    kernel: object
    log_params: np.ndarray
    noise: float
    U_train: np.ndarray
    y_mean: float
    y_std: float
    y_s: np.ndarray = field(repr=False)
    L: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    nll: float = np.nan
    nll_init: float = np.nan
    jitter: float = 0.0
    epochs: int = 0

    @property
    def n_train(self) -> int:
        return len(self.y_s)

    def diagnostics(self) -> dict:
        return {
            "nll": float(self.nll),
            "jitter": float(self.jitter),
            "epochs": int(self.epochs),
            "noise": float(self.noise),
        }


def gp_fit(
    U: np.ndarray,
    y: np.ndarray,
    kernel,
    epochs: int = ADAM_EPOCHS,
    lr: float = ADAM_LR,
    init_params: np.ndarray | None = None,
) -> GPModel:
    """Fit kernel + noise hyperparameters by Adam descent on the NLL.

    ``init_params`` warm-starts the full parameter vector (kernel params plus
    log noise excess); the returned model carries the best parameters visited.
    Deterministic: no randomness anywhere in the descent.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if len(y) < 2:
        raise ValueError("gp_fit needs at least 2 observations")
    if len(y) != U.shape[0]:
        raise ValueError("U and y length mismatch")
    if not np.all(np.isfinite(y)) or not np.all(np.isfinite(U)):
        raise ValueError("non-finite inputs")

    y_mean = float(np.mean(y))
    y_std = float(np.std(y))
    if y_std < 1e-12:
        y_std = 1.0
    y_s = (y - y_mean) / y_std

    lo = np.concatenate([kernel.lo, [LOG_NOISE_BOUNDS[0]]])
    hi = np.concatenate([kernel.hi, [LOG_NOISE_BOUNDS[1]]])
    if init_params is None:
        params = np.concatenate([kernel.init_params(), [np.log(1e-2)]])
    else:
        params = np.asarray(init_params, dtype=float).copy()
    params = np.clip(params, lo, hi)

    cache = kernel.prepare(U)
    m = np.zeros_like(params)
    v = np.zeros_like(params)
    beta1, beta2, eps = 0.9, 0.999, 1e-8

    best_params = params.copy()
    best_nll = np.inf
    nll_init = None
    for t in range(epochs + 1):
        nll, grad, _ = nll_value_and_grad(kernel, cache, U, y_s, params, with_grad=t < epochs)
        if nll_init is None:
            nll_init = nll
        if nll < best_nll:
            best_nll = nll
            best_params = params.copy()
        if t == epochs:
            break
        m = beta1 * m + (1.0 - beta1) * grad
        v = beta2 * v + (1.0 - beta2) * grad**2
        m_hat = m / (1.0 - beta1 ** (t + 1))
        v_hat = v / (1.0 - beta2 ** (t + 1))
        params = np.clip(params - lr * m_hat / (np.sqrt(v_hat) + eps), lo, hi)

    nll, _, (L, alpha, noise, jitter) = nll_value_and_grad(
        kernel, cache, U, y_s, best_params, with_grad=False
    )
    return GPModel(
        kernel=kernel,
        log_params=best_params,
        noise=noise,
        U_train=U,
        y_mean=y_mean,
        y_std=y_std,
        y_s=y_s,
        L=L,
        alpha=alpha,
        nll=float(nll),
        nll_init=float(nll_init),
        jitter=jitter,
        epochs=epochs,
    )


def gp_fit_fixed(U: np.ndarray, y: np.ndarray, kernel, params: np.ndarray) -> GPModel:
    """Condition the GP at fixed hyperparameters (no descent)."""
    return gp_fit(U, y, kernel, epochs=0, init_params=params)


def gp_predict(model: GPModel, U_test: np.ndarray, include_noise: bool = False):
    """Posterior mean and variance at test points, on the raw target scale.

    Variance is the latent k(x*,x*) - k^T (K + noise I)^-1 k, clamped at 0;
    ``include_noise`` adds the observation-noise term for predictive
    log-likelihoods of actual observations.
    """
    squeeze = np.asarray(U_test).ndim == 1
    U_test = np.atleast_2d(np.asarray(U_test, dtype=float))
    kp = model.log_params[:-1]
    k_star = model.kernel.cross(U_test, model.U_train, kp)
    mean_s = k_star @ model.alpha
    V = solve_triangular(model.L, k_star.T, lower=True)
    var_s = model.kernel.diag(U_test, kp) - np.sum(V**2, axis=0)
    if include_noise:
        var_s = var_s + model.noise
    var_s = np.maximum(var_s, 0.0)
    mean = mean_s * model.y_std + model.y_mean
    var = var_s * model.y_std**2
    return (float(mean[0]), float(var[0])) if squeeze else (mean, var)


def gp_nll(model: GPModel) -> float:
    return model.nll


def posterior_from_gram(
    K: np.ndarray, k_star: np.ndarray, k_star_star: np.ndarray, y: np.ndarray, noise: float
):
    """Closed-form posterior given explicit Gram pieces (no standardization).

    mean = k^T (K + noise I)^-1 y, var = k** - k^T (K + noise I)^-1 k.
    """
    n = K.shape[0]
    factor = cho_factor(K + noise * np.eye(n), lower=True)
    alpha = cho_solve(factor, y)
    k_star = np.atleast_2d(k_star)
    mean = k_star @ alpha
    sol = cho_solve(factor, k_star.T)
    var = np.maximum(np.asarray(k_star_star, dtype=float) - np.sum(k_star.T * sol, axis=0), 0.0)
    return mean, var


def heldout_log_likelihood(model: GPModel, U_test: np.ndarray, y_test: np.ndarray) -> float:
    """Sum of predictive log densities of held-out observations."""
    mean, var = gp_predict(model, U_test, include_noise=True)
    var = np.maximum(var, 1e-300)
    resid = np.asarray(y_test, dtype=float) - mean
    return float(np.sum(-0.5 * np.log(2.0 * np.pi * var) - 0.5 * resid**2 / var))
