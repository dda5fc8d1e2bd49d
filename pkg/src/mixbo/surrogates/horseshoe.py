"""Sparse Bayesian linear surrogate over order-2 binary features.

Categorical points are binarized with drop-first indicators (C-1 columns per
variable) and expanded with all cross-variable pairwise products; products
within one variable are identically zero and are excluded.  Coefficients get
a Horseshoe prior sampled with the auxiliary inverse-gamma Gibbs scheme; the
coefficient draw itself uses the fast O(n^2 p) sampler that stays exact when
the feature count exceeds the number of observations.  Posterior-mean
magnitudes below the sparsification threshold are zeroed across all stored
draws, so sampled objectives are genuinely sparse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..space import SearchSpace

HS_BURN_IN = 100
HS_DRAWS = 100
HS_A = 2.0
HS_B = 1.0
HS_THRESHOLD = 0.1


def feature_index(space: SearchSpace) -> list[tuple]:
    """Feature descriptors: ("main", var, cat) then ("pair", (vi, ci), (vj, cj))."""
    if space.n_categorical != space.n_vars:
        raise ValueError("horseshoe surrogate needs a purely categorical space")
    mains = []
    for var_pos, j in enumerate(space.categorical_idx):
        for cat in range(1, space.variables[j].n_categories):
            mains.append(("main", var_pos, cat))
    feats: list[tuple] = list(mains)
    for a in range(len(mains)):
        for b in range(a + 1, len(mains)):
            _, va, ca = mains[a]
            _, vb, cb = mains[b]
            if va != vb:
                feats.append(("pair", (va, ca), (vb, cb)))
    return feats


def hs_features(space: SearchSpace, X: np.ndarray, index: list[tuple] | None = None) -> np.ndarray:
    """Binary feature matrix (n, p) for raw categorical points."""
    X = np.atleast_2d(np.asarray(X, dtype=float)).astype(int)
    index = feature_index(space) if index is None else index
    F = np.empty((X.shape[0], len(index)))
    for col, feat in enumerate(index):
        if feat[0] == "main":
            _, var, cat = feat
            F[:, col] = X[:, var] == cat
        else:
            _, (va, ca), (vb, cb) = feat
            F[:, col] = (X[:, va] == ca) & (X[:, vb] == cb)
    return F


@dataclass
class HorseshoeModel:
    space: SearchSpace
    index: list[tuple] = field(repr=False)
    draws: np.ndarray = field(repr=False)  # (n_draws, p), standardized scale
    y_mean: float = 0.0
    y_std: float = 1.0

    @property
    def n_features(self) -> int:
        return len(self.index)


def _inv_gamma(rng: np.random.Generator, shape: float, scale: float) -> float:
    # X ~ InvGamma(shape, scale)  <=>  1/X ~ Gamma(shape, 1/scale)
    return 1.0 / rng.gamma(shape, 1.0 / max(scale, 1e-300))


def _sample_coefficients(
    rng: np.random.Generator, F: np.ndarray, y: np.ndarray, sigma2: float, prior_var: np.ndarray
) -> np.ndarray:
    """Draw beta ~ N(A^-1 F^T y / sigma2, A^-1), A = F^T F/sigma2 + diag(1/prior_var)."""
    n, p = F.shape
    sigma = np.sqrt(sigma2)
    Phi = F / sigma
    alpha = y / sigma
    u = rng.normal(size=p) * np.sqrt(prior_var)
    delta = rng.normal(size=n)
    v = Phi @ u + delta
    M = Phi * prior_var
    w = np.linalg.solve(M @ Phi.T + np.eye(n), alpha - v)
    return u + M.T @ w


def hs_fit(
    space: SearchSpace,
    X: np.ndarray,
    y: np.ndarray,
    seed: int = 0,
    n_burn: int = HS_BURN_IN,
    n_draws: int = HS_DRAWS,
    a: float = HS_A,
    b: float = HS_B,
    threshold: float = HS_THRESHOLD,
) -> HorseshoeModel:
    """Gibbs-sample the Horseshoe regression posterior on standardized targets."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if len(y) < 2:
        raise ValueError("hs_fit needs at least 2 observations")
    if not np.all(np.isfinite(y)):
        raise ValueError("non-finite targets")
    index = feature_index(space)
    F = hs_features(space, X, index)
    n, p = F.shape

    y_mean = float(np.mean(y))
    y_std = float(np.std(y))
    if y_std < 1e-12:
        y_std = 1.0
    y_s = (y - y_mean) / y_std

    rng = np.random.default_rng(seed)
    lam2 = np.ones(p)
    nu = np.ones(p)
    tau2 = 1.0
    xi = 1.0
    sigma2 = 1.0
    kept = np.empty((n_draws, p))
    for sweep in range(n_burn + n_draws):
        beta = _sample_coefficients(rng, F, y_s, sigma2, sigma2 * tau2 * lam2)
        lam2 = np.array(
            [_inv_gamma(rng, 1.0, 1.0 / nu[j] + beta[j] ** 2 / (2.0 * tau2 * sigma2)) for j in range(p)]
        )
        nu = np.array([_inv_gamma(rng, 1.0, 1.0 + 1.0 / lam2[j]) for j in range(p)])
        tau2 = _inv_gamma(rng, (p + 1.0) / 2.0, 1.0 / xi + np.sum(beta**2 / lam2) / (2.0 * sigma2))
        xi = _inv_gamma(rng, 1.0, 1.0 + 1.0 / tau2)
        resid = y_s - F @ beta
        sigma2 = _inv_gamma(
            rng,
            a + 0.5 * (n + p),
            b + 0.5 * resid @ resid + 0.5 * np.sum(beta**2 / (tau2 * lam2)),
        )
        if sweep >= n_burn:
            kept[sweep - n_burn] = beta

    post_mean = kept.mean(axis=0)
    kept[:, np.abs(post_mean) < threshold] = 0.0
    return HorseshoeModel(space=space, index=index, draws=kept, y_mean=y_mean, y_std=y_std)


@dataclass
class SampledObjective:
    """One posterior coefficient draw, evaluable as a raw-scale objective."""

    model: HorseshoeModel
    coefficients: np.ndarray
    draw_index: int

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        squeeze = np.asarray(X).ndim == 1
        F = hs_features(self.model.space, np.atleast_2d(X), self.model.index)
        vals = F @ self.coefficients * self.model.y_std + self.model.y_mean
        return float(vals[0]) if squeeze else vals


def hs_sample_objective(model: HorseshoeModel, seed: int = 0) -> SampledObjective:
    """Uniformly pick one retained coefficient draw (deterministic per seed)."""
    if model.draws.shape[0] == 0:
        raise ValueError("model holds no stored draws")
    idx = int(np.random.default_rng(seed).integers(0, model.draws.shape[0]))
    return SampledObjective(model=model, coefficients=model.draws[idx], draw_index=idx)
