"""Covariance functions over mixed categorical/numeric unit points.

Categorical kernels (weighted overlap, its exponentiated transform, and a
Hamming-embedding kernel) work on category-index columns; numeric dims use a
Matern-5/2 with ARD lengthscales on unit-scaled columns.  Mixed spaces combine
one categorical kernel with the Matern kernel as

    sigma * [lam * (K_cat + K_num) + (1 - lam) * K_cat * K_num]

with both sub-kernels normalized to unit diagonal and a single signal variance
outside; lam is learned through a sigmoid so it stays in (0, 1).

Hyperparameters live in log space (the mixture weight as a raw logit).  Every
kernel exposes the same small surface used by the GP fitter:

* ``prepare(U)``: cache pairwise structures for a fixed training set,
* ``gram(cache, params)``: the (n, n) covariance,
* ``grad_dot(cache, params, W, K)``: per-parameter sums W_ij dK_ij/dtheta,
  which is all the marginal-likelihood gradient needs,
* ``cross(U1, U2, params)`` and ``diag(U, params)`` for prediction.
"""

from __future__ import annotations

import numpy as np

SQRT5 = np.sqrt(5.0)

# Log-space hyperparameter boxes.  Categorical lengthscales are capped lower
# than numeric ones: the TO kernel exponentiates their mean, so exp(3) ~ 20
# keeps exp(smax) well inside float range.
LOG_SIGMA_BOUNDS = (-6.0, 6.0)
LOG_CAT_LS_BOUNDS = (-6.0, 3.0)
LOG_NUM_LS_BOUNDS = (-6.0, 6.0)
RAW_MIX_BOUNDS = (-10.0, 10.0)


def sigmoid(x: float | np.ndarray) -> float | np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.asarray(x)))


# ---------------------------------------------------------------------------
# scalar reference forms
# ---------------------------------------------------------------------------


def kernel_overlap(x1: np.ndarray, x2: np.ndarray, lengthscales: np.ndarray, sigma: float = 1.0) -> float:
    """Weighted category-overlap kernel: (sigma/d) * sum_p lam_p * [x1_p == x2_p]."""
    x1, x2, lam = np.asarray(x1), np.asarray(x2), np.asarray(lengthscales, dtype=float)
    if x1.shape != x2.shape or x1.shape != lam.shape:
        raise ValueError("x1, x2 and lengthscales must share a shape")
    if np.any(lam <= 0):
        raise ValueError("lengthscales must be positive")
    return float(sigma / x1.size * np.sum(lam * (x1 == x2)))


def kernel_transformed_overlap(
    x1: np.ndarray, x2: np.ndarray, lengthscales: np.ndarray, sigma: float = 1.0
) -> float:
    """Exponentiated overlap, normalized so k(x, x) = sigma."""
    x1, x2, lam = np.asarray(x1), np.asarray(x2), np.asarray(lengthscales, dtype=float)
    if x1.shape != x2.shape or x1.shape != lam.shape:
        raise ValueError("x1, x2 and lengthscales must share a shape")
    if np.any(lam <= 0):
        raise ValueError("lengthscales must be positive")
    s = np.sum(lam * (x1 == x2)) / x1.size
    s_max = np.sum(lam) / x1.size
    return float(sigma * np.expm1(s) / np.expm1(s_max))


def kernel_matern52(u1: np.ndarray, u2: np.ndarray, lengthscales: np.ndarray, sigma: float = 1.0) -> float:
    """Matern-5/2 with ARD lengthscales on numeric vectors."""
    u1, u2, ls = np.asarray(u1, float), np.asarray(u2, float), np.asarray(lengthscales, dtype=float)
    if u1.shape != u2.shape or u1.shape != ls.shape:
        raise ValueError("u1, u2 and lengthscales must share a shape")
    if np.any(ls <= 0):
        raise ValueError("lengthscales must be positive")
    r = np.sqrt(np.sum(((u1 - u2) / ls) ** 2))
    return float(sigma * (1.0 + SQRT5 * r + 5.0 * r**2 / 3.0) * np.exp(-SQRT5 * r))


def hed_embedding(X_cat: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Normalized Hamming distances to each anchor: (n, m) in [0, 1]."""
    X_cat = np.atleast_2d(X_cat)
    out = np.empty((X_cat.shape[0], anchors.shape[0]))
    # chunk over rows so huge candidate batches stay within memory
    step = max(1, int(2e7) // max(1, anchors.size))
    for lo in range(0, X_cat.shape[0], step):
        hi = min(lo + step, X_cat.shape[0])
        out[lo:hi] = (X_cat[lo:hi, None, :] != anchors[None, :, :]).mean(axis=2)
    return out


def kernel_hed(
    x1: np.ndarray, x2: np.ndarray, anchors: np.ndarray, lengthscales: np.ndarray, sigma: float = 1.0
) -> float:
    """Matern-5/2 over the normalized Hamming-embedding of categorical points."""
    z1 = hed_embedding(np.atleast_2d(x1), anchors)[0]
    z2 = hed_embedding(np.atleast_2d(x2), anchors)[0]
    return kernel_matern52(z1, z2, lengthscales, sigma)


def kernel_mixture(
    p1: np.ndarray,
    p2: np.ndarray,
    cat_idx: np.ndarray,
    num_idx: np.ndarray,
    cat_lengthscales: np.ndarray,
    num_lengthscales: np.ndarray,
    lam_mix: float,
    sigma: float = 1.0,
    cat_kind: str = "to",
    anchors: np.ndarray | None = None,
) -> float:
    """Mixed-space combination of a categorical kernel and Matern-5/2.

    Sub-kernels are evaluated at unit signal variance (the overlap variant is
    additionally divided by its own diagonal) so the combination has diagonal
    sigma * (1 + lam_mix).
    """
    p1, p2 = np.asarray(p1, float), np.asarray(p2, float)
    if len(cat_idx) == 0 or len(num_idx) == 0:
        raise ValueError("mixture kernel needs both categorical and numeric dims")
    if not 0.0 <= lam_mix <= 1.0:
        raise ValueError("lam_mix must lie in [0, 1]")
    x1, x2 = p1[cat_idx], p2[cat_idx]
    if cat_kind == "o":
        lam = np.asarray(cat_lengthscales, dtype=float)
        k_cat = float(np.sum(lam * (x1 == x2)) / np.sum(lam))
    elif cat_kind == "to":
        k_cat = kernel_transformed_overlap(x1, x2, cat_lengthscales)
    elif cat_kind == "hed":
        k_cat = kernel_hed(x1, x2, anchors, cat_lengthscales)
    else:
        raise ValueError(f"unknown categorical kernel kind: {cat_kind!r}")
    k_num = kernel_matern52(p1[num_idx], p2[num_idx], num_lengthscales)
    return float(sigma * (lam_mix * (k_cat + k_num) + (1.0 - lam_mix) * k_cat * k_num))


# ---------------------------------------------------------------------------
# vectorized cores (correlation part, gradients wrt own lengthscales)
# ---------------------------------------------------------------------------


class OverlapCore:
    """sum_p lam_p * delta_p, scaled by 1/d (standalone) or 1/sum(lam) (unit diag)."""

    def __init__(self, cols: np.ndarray, normalize: bool):
        self.cols = np.asarray(cols, dtype=int)
        self.normalize = normalize
        d = len(self.cols)
        self.names = [f"cat_ls_{i}" for i in range(d)]
        self.lo = np.full(d, LOG_CAT_LS_BOUNDS[0])
        self.hi = np.full(d, LOG_CAT_LS_BOUNDS[1])

    def init_params(self) -> np.ndarray:
        return np.zeros(len(self.cols))

    def prepare(self, U: np.ndarray) -> np.ndarray:
        V = U[:, self.cols]
        return (V[:, None, :] == V[None, :, :]).transpose(2, 0, 1).astype(float)

    def core(self, delta: np.ndarray, log_lam: np.ndarray) -> np.ndarray:
        lam = np.exp(log_lam)
        s = np.einsum("p,pij->ij", lam, delta)
        return s / np.sum(lam) if self.normalize else s / len(self.cols)

    def grad_dot(self, delta: np.ndarray, log_lam: np.ndarray, W: np.ndarray, C: np.ndarray) -> np.ndarray:
        lam = np.exp(log_lam)
        g = np.empty(len(lam))
        if self.normalize:
            lam_sum = np.sum(lam)
            for p in range(len(lam)):
                g[p] = lam[p] / lam_sum * np.sum(W * (delta[p] - C))
        else:
            d = len(self.cols)
            for p in range(len(lam)):
                g[p] = lam[p] / d * np.sum(W * delta[p])
        return g

    def cross(self, U1: np.ndarray, U2: np.ndarray, log_lam: np.ndarray) -> np.ndarray:
        lam = np.exp(log_lam)
        V1, V2 = U1[:, self.cols], U2[:, self.cols]
        s = np.zeros((V1.shape[0], V2.shape[0]))
        for p in range(len(lam)):
            s += lam[p] * (V1[:, p, None] == V2[None, :, p])
        return s / np.sum(lam) if self.normalize else s / len(self.cols)

    def diag_value(self, log_lam: np.ndarray) -> float:
        return 1.0 if self.normalize else float(np.mean(np.exp(log_lam)))


class TOCore:
    """expm1(mean weighted overlap) / expm1(mean weight): unit diagonal."""

    def __init__(self, cols: np.ndarray):
        self.cols = np.asarray(cols, dtype=int)
        d = len(self.cols)
        self.names = [f"cat_ls_{i}" for i in range(d)]
        self.lo = np.full(d, LOG_CAT_LS_BOUNDS[0])
        self.hi = np.full(d, LOG_CAT_LS_BOUNDS[1])

    def init_params(self) -> np.ndarray:
        return np.zeros(len(self.cols))

    def prepare(self, U: np.ndarray) -> np.ndarray:
        V = U[:, self.cols]
        return (V[:, None, :] == V[None, :, :]).transpose(2, 0, 1).astype(float)

    def _pieces(self, delta: np.ndarray, log_lam: np.ndarray):
        lam = np.exp(log_lam)
        d = len(lam)
        s = np.einsum("p,pij->ij", lam, delta) / d
        s_max = np.sum(lam) / d
        return lam, s, s_max

    def core(self, delta: np.ndarray, log_lam: np.ndarray) -> np.ndarray:
        _, s, s_max = self._pieces(delta, log_lam)
        return np.expm1(s) / np.expm1(s_max)

    def grad_dot(self, delta: np.ndarray, log_lam: np.ndarray, W: np.ndarray, C: np.ndarray) -> np.ndarray:
        lam, s, s_max = self._pieces(delta, log_lam)
        d = len(lam)
        B = np.expm1(s_max)
        es = np.exp(s)
        WA = W * es
        # d/dlam_p of expm1(s)/B: [exp(s)*delta_p/d - C*exp(s_max)/d] / B
        t_const = np.exp(s_max) / B * np.sum(W * (es - 1.0)) / B
        g = np.empty(d)
        for p in range(d):
            g[p] = lam[p] / d * (np.sum(WA * delta[p]) / B - t_const)
        return g

    def cross(self, U1: np.ndarray, U2: np.ndarray, log_lam: np.ndarray) -> np.ndarray:
        lam = np.exp(log_lam)
        d = len(lam)
        V1, V2 = U1[:, self.cols], U2[:, self.cols]
        s = np.zeros((V1.shape[0], V2.shape[0]))
        for p in range(d):
            s += lam[p] * (V1[:, p, None] == V2[None, :, p])
        s /= d
        return np.expm1(s) / np.expm1(np.sum(lam) / d)

    def diag_value(self, log_lam: np.ndarray) -> float:
        return 1.0


class MaternCore:
    """Matern-5/2 correlation with ARD lengthscales over given columns."""

    def __init__(self, cols: np.ndarray, name_prefix: str = "num_ls"):
        self.cols = np.asarray(cols, dtype=int)
        d = len(self.cols)
        self.names = [f"{name_prefix}_{i}" for i in range(d)]
        self.lo = np.full(d, LOG_NUM_LS_BOUNDS[0])
        self.hi = np.full(d, LOG_NUM_LS_BOUNDS[1])

    def init_params(self) -> np.ndarray:
        return np.full(len(self.cols), np.log(0.5))

    def prepare(self, U: np.ndarray) -> np.ndarray:
        V = U[:, self.cols]
        return (V[:, None, :] - V[None, :, :]).transpose(2, 0, 1) ** 2

    def _r(self, sq: np.ndarray, log_ls: np.ndarray) -> np.ndarray:
        inv2 = np.exp(-2.0 * log_ls)
        r2 = np.einsum("p,pij->ij", inv2, sq)
        return np.sqrt(np.maximum(r2, 0.0))

    def core(self, sq: np.ndarray, log_ls: np.ndarray) -> np.ndarray:
        r = self._r(sq, log_ls)
        return (1.0 + SQRT5 * r + 5.0 * r**2 / 3.0) * np.exp(-SQRT5 * r)

    def grad_dot(self, sq: np.ndarray, log_ls: np.ndarray, W: np.ndarray, C: np.ndarray) -> np.ndarray:
        r = self._r(sq, log_ls)
        # dC/dlog_ls_p = (5/3)(1 + sqrt5 r) exp(-sqrt5 r) * sq_p * ls_p^-2
        G = W * (5.0 / 3.0) * (1.0 + SQRT5 * r) * np.exp(-SQRT5 * r)
        inv2 = np.exp(-2.0 * log_ls)
        g = np.empty(len(inv2))
        for p in range(len(inv2)):
            g[p] = inv2[p] * np.sum(G * sq[p])
        return g

    def cross(self, U1: np.ndarray, U2: np.ndarray, log_ls: np.ndarray) -> np.ndarray:
        inv = np.exp(-log_ls)
        A = U1[:, self.cols] * inv
        B = U2[:, self.cols] * inv
        r2 = np.sum(A**2, axis=1)[:, None] + np.sum(B**2, axis=1)[None, :] - 2.0 * A @ B.T
        r = np.sqrt(np.maximum(r2, 0.0))
        return (1.0 + SQRT5 * r + 5.0 * r**2 / 3.0) * np.exp(-SQRT5 * r)

    def diag_value(self, log_ls: np.ndarray) -> float:
        return 1.0


class HEDCore:
    """Matern-5/2 over normalized Hamming distances to m random anchors."""

    def __init__(self, cols: np.ndarray, category_sizes: np.ndarray, m: int = 128, seed: int = 0):
        self.cols = np.asarray(cols, dtype=int)
        self.m = m
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.anchors = np.column_stack(
            [rng.integers(0, size, m) for size in np.asarray(category_sizes, dtype=int)]
        ).astype(float)
        self._inner = MaternCore(np.arange(m), name_prefix="hed_ls")
        self.names = self._inner.names
        self.lo = self._inner.lo
        self.hi = self._inner.hi

    def init_params(self) -> np.ndarray:
        return self._inner.init_params()

    def embed(self, U: np.ndarray) -> np.ndarray:
        return hed_embedding(U[:, self.cols], self.anchors)

    def prepare(self, U: np.ndarray) -> np.ndarray:
        return self._inner.prepare(self.embed(U))

    def core(self, sq: np.ndarray, log_ls: np.ndarray) -> np.ndarray:
        return self._inner.core(sq, log_ls)

    def grad_dot(self, sq: np.ndarray, log_ls: np.ndarray, W: np.ndarray, C: np.ndarray) -> np.ndarray:
        return self._inner.grad_dot(sq, log_ls, W, C)

    def cross(self, U1: np.ndarray, U2: np.ndarray, log_ls: np.ndarray) -> np.ndarray:
        return self._inner.cross(self.embed(U1), self.embed(U2), log_ls)

    def diag_value(self, log_ls: np.ndarray) -> float:
        return 1.0


# ---------------------------------------------------------------------------
# GP-facing kernels (signal variance + optional mixture combination)
# ---------------------------------------------------------------------------


class StandaloneKernel:
    """sigma * core, for spaces a single core covers entirely."""

    def __init__(self, kind: str, core):
        self.kind = kind
        self.core_fn = core
        self.names = ["log_sigma"] + core.names
        self.lo = np.concatenate([[LOG_SIGMA_BOUNDS[0]], core.lo])
        self.hi = np.concatenate([[LOG_SIGMA_BOUNDS[1]], core.hi])

    @property
    def n_params(self) -> int:
        return len(self.names)

    def init_params(self) -> np.ndarray:
        return np.concatenate([[0.0], self.core_fn.init_params()])

    def prepare(self, U: np.ndarray):
        return self.core_fn.prepare(U)

    def gram(self, cache, params: np.ndarray) -> np.ndarray:
        return np.exp(params[0]) * self.core_fn.core(cache, params[1:])

    def grad_dot(self, cache, params: np.ndarray, W: np.ndarray, K: np.ndarray) -> np.ndarray:
        sigma = np.exp(params[0])
        C = K / sigma
        g_core = self.core_fn.grad_dot(cache, params[1:], W, C)
        return np.concatenate([[np.sum(W * K)], sigma * g_core])

    def cross(self, U1: np.ndarray, U2: np.ndarray, params: np.ndarray) -> np.ndarray:
        return np.exp(params[0]) * self.core_fn.cross(U1, U2, params[1:])

    def diag(self, U: np.ndarray, params: np.ndarray) -> np.ndarray:
        value = np.exp(params[0]) * self.core_fn.diag_value(params[1:])
        return np.full(np.atleast_2d(U).shape[0], value)

    def describe(self) -> dict:
        return {"kind": self.kind}


class MixtureKernel:
    """sigma * [lam (C_cat + C_num) + (1 - lam) C_cat C_num] over a mixed space."""

    def __init__(self, kind: str, cat_core, num_core):
        self.kind = kind
        self.cat_core = cat_core
        self.num_core = num_core
        self.names = ["log_sigma", "raw_mix"] + cat_core.names + num_core.names
        self.lo = np.concatenate([[LOG_SIGMA_BOUNDS[0], RAW_MIX_BOUNDS[0]], cat_core.lo, num_core.lo])
        self.hi = np.concatenate([[LOG_SIGMA_BOUNDS[1], RAW_MIX_BOUNDS[1]], cat_core.hi, num_core.hi])
        self._n_cat = len(cat_core.names)

    @property
    def n_params(self) -> int:
        return len(self.names)

    def init_params(self) -> np.ndarray:
        return np.concatenate([[0.0, 0.0], self.cat_core.init_params(), self.num_core.init_params()])

    def _split(self, params: np.ndarray):
        return params[0], params[1], params[2 : 2 + self._n_cat], params[2 + self._n_cat :]

    def prepare(self, U: np.ndarray):
        return (self.cat_core.prepare(U), self.num_core.prepare(U))

    def gram(self, cache, params: np.ndarray) -> np.ndarray:
        log_sigma, raw_mix, cat_p, num_p = self._split(params)
        lam = sigmoid(raw_mix)
        Cc = self.cat_core.core(cache[0], cat_p)
        Cn = self.num_core.core(cache[1], num_p)
        return np.exp(log_sigma) * (lam * (Cc + Cn) + (1.0 - lam) * Cc * Cn)

    def grad_dot(self, cache, params: np.ndarray, W: np.ndarray, K: np.ndarray) -> np.ndarray:
        log_sigma, raw_mix, cat_p, num_p = self._split(params)
        sigma = np.exp(log_sigma)
        lam = sigmoid(raw_mix)
        Cc = self.cat_core.core(cache[0], cat_p)
        Cn = self.num_core.core(cache[1], num_p)
        g_sigma = np.sum(W * K)
        g_mix = sigma * lam * (1.0 - lam) * np.sum(W * (Cc + Cn - Cc * Cn))
        W_cat = W * (sigma * (lam + (1.0 - lam) * Cn))
        W_num = W * (sigma * (lam + (1.0 - lam) * Cc))
        g_cat = self.cat_core.grad_dot(cache[0], cat_p, W_cat, Cc)
        g_num = self.num_core.grad_dot(cache[1], num_p, W_num, Cn)
        return np.concatenate([[g_sigma, g_mix], g_cat, g_num])

    def cross(self, U1: np.ndarray, U2: np.ndarray, params: np.ndarray) -> np.ndarray:
        log_sigma, raw_mix, cat_p, num_p = self._split(params)
        lam = sigmoid(raw_mix)
        Cc = self.cat_core.cross(U1, U2, cat_p)
        Cn = self.num_core.cross(U1, U2, num_p)
        return np.exp(log_sigma) * (lam * (Cc + Cn) + (1.0 - lam) * Cc * Cn)

    def diag(self, U: np.ndarray, params: np.ndarray) -> np.ndarray:
        log_sigma, raw_mix, _, _ = self._split(params)
        value = np.exp(log_sigma) * (1.0 + sigmoid(raw_mix))
        return np.full(np.atleast_2d(U).shape[0], value)

    def describe(self) -> dict:
        return {"kind": self.kind}


def make_kernel(kind: str, space, hed_m: int = 128, hed_seed: int = 0):
    """Build the GP kernel for a space: standalone on single-block spaces,
    the unit-diagonal mixture combination on mixed ones.

    ``kind`` is the categorical-kernel family: "o", "to", or "hed".  A space
    with no categorical dims gets a plain Matern-5/2 regardless of kind.
    """
    if kind not in ("o", "to", "hed"):
        raise KeyError(f"unknown kernel kind: {kind!r}")
    cat_idx, num_idx = space.categorical_idx, space.numeric_idx

    def cat_core(normalize: bool):
        if kind == "o":
            return OverlapCore(cat_idx, normalize=normalize)
        if kind == "to":
            return TOCore(cat_idx)
        return HEDCore(cat_idx, space.category_sizes(), m=hed_m, seed=hed_seed)

    if len(cat_idx) == 0:
        return StandaloneKernel("matern52", MaternCore(num_idx))
    if len(num_idx) == 0:
        return StandaloneKernel(kind, cat_core(normalize=False))
    return MixtureKernel(f"mix_{kind}", cat_core(normalize=True), MaternCore(num_idx))
