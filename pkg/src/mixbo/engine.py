"""Mix-and-match optimizer construction and the suggest/observe loop.

A BO optimizer is assembled from registry ids: a surrogate (``gp_o``,
``gp_to``, ``gp_hed`` Gaussian processes or the ``lr_sh`` sparse Horseshoe
regression), an acquisition (``ei``, ``pi``, ``lcb[:beta=..]``, ``ts``), an
acquisition optimizer (``ls``, ``sa``, ``ga``, ``is``, ``mab_gd``), and a
trust region mode (``none``, ``basic``).  Incompatible combinations are
rejected at build time with the violated rule spelled out.  Five non-model
baselines (``rs``, ``hc``, ``ga``, ``sa``, ``mab``) expose the same
suggest/observe interface.  Everything is deterministic per (config, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .acquisitions import AcquisitionSpec, IncompatibilityError, acq_evaluate, parse_acq_id
from .acq_optimizers import AcqOptConfig, make_acq_opt_config, optimize_acq
from .space import (
    REJECTION_CAP,
    RejectionCapError,
    SearchSpace,
    check_constraints,
    inverse_transform,
    sample_uniform,
    transform,
    validate_point,
)
from .surrogates.gp import FitError, GPModel, gp_fit, gp_predict
from .surrogates.horseshoe import hs_fit, hs_sample_objective
from .surrogates.kernels import make_kernel
from .trust_region import (
    RestartSignal,
    TrustRegionState,
    in_trust_region,
    tr_init,
    tr_recenter,
    tr_restart,
    tr_update,
)

MODEL_IDS = ("gp_o", "gp_to", "gp_hed", "lr_sh")
ACQ_IDS = ("ei", "pi", "lcb", "ts")
ACQ_OPT_IDS = {"ls": "ls", "sa": "sa", "ga": "ga", "is": "is_hc_gd", "mab_gd": "is_mab_gd"}
TR_IDS = ("none", "basic")
BASELINE_KINDS = ("rs", "hc", "ga", "sa", "mab")

# Stream tags for deriving per-purpose seeds from the run seed.
_TAG_OPT = 13
_TAG_DEDUP = 17
_TAG_RESTART = 19
_TAG_TS = 23
_TAG_FIT = 29


class ProtocolError(RuntimeError):
    """Suggest/observe called out of turn."""


@dataclass(frozen=True)
class BoConfig:
    """Registry ids plus hyperparameter overrides for one BO optimizer."""

    model_id: str
    acq_id: str
    acq_opt_id: str
    tr_id: str = "none"
    n_init: int = 20
    seed: int = 0
    model_params: dict = field(default_factory=dict)
    acq_opt_params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BaselineConfig:
    kind: str
    seed: int = 0
    params: dict = field(default_factory=dict)


def check_compatibility(config: BoConfig, space: SearchSpace) -> None:
    """Reject bad id combinations eagerly, naming the violated rule."""
    if config.model_id not in MODEL_IDS:
        raise KeyError(f"unknown model id {config.model_id!r}; known: {MODEL_IDS}")
    acq_kind = config.acq_id.split(":")[0]
    if acq_kind not in ACQ_IDS:
        raise KeyError(f"unknown acquisition id {config.acq_id!r}; known: {ACQ_IDS}")
    parse_acq_id(config.acq_id)
    if config.acq_opt_id not in ACQ_OPT_IDS:
        raise KeyError(
            f"unknown acquisition optimizer id {config.acq_opt_id!r}; "
            f"known: {tuple(ACQ_OPT_IDS)}"
        )
    if config.tr_id not in TR_IDS:
        raise KeyError(f"unknown trust region id {config.tr_id!r}; known: {TR_IDS}")
    if config.n_init < 2:
        raise IncompatibilityError("n_init must be at least 2 (surrogates need two points)")
    if acq_kind == "ts" and config.model_id != "lr_sh":
        raise IncompatibilityError("ts requires the lr_sh model (Thompson draws need coefficients)")
    if config.model_id == "lr_sh" and acq_kind != "ts":
        raise IncompatibilityError(
            f"lr_sh supports only ts: {acq_kind} needs closed-form predictive moments"
        )
    if config.model_id == "lr_sh" and space.n_numeric:
        raise IncompatibilityError("lr_sh requires a purely categorical space")
    if config.acq_opt_id == "ls" and space.n_numeric:
        raise IncompatibilityError("ls requires a purely categorical space")
    if config.model_id.startswith("gp_") and space.n_categorical == 0:
        raise IncompatibilityError(
            f"{config.model_id} requires at least one categorical dimension"
        )


def _derive_seed(seed: int, tag: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, tag, index]).generate_state(1)[0])


class BayesOpt:
    """Stateful suggest/observe optimizer (minimization convention).

    The first ``n_init`` suggestions replay a precomputed uniform sample, so
    all optimizers sharing a seed see the same initial design.  Afterwards
    each suggestion refits the surrogate (on in-region data when the trust
    region is active, falling back to the full dataset below two points),
    maximizes the acquisition, and deduplicates against history.
    """

    def __init__(self, space: SearchSpace, config: BoConfig):
        check_compatibility(config, space)
        self.space = space
        self.config = config
        self._init_points = sample_uniform(space, config.n_init, config.seed)
        self._X: list[np.ndarray] = []
        self._y: list[float] = []
        self._hX: list[np.ndarray] = []
        self._hy: list[float] = []
        self._pending = 0
        self.best_x: np.ndarray | None = None
        self.best_y: float = np.inf
        self._tr = tr_init(space) if config.tr_id == "basic" else None
        self._is_gp = config.model_id.startswith("gp_")
        self._model = None
        self._warm: np.ndarray | None = None
        mp = dict(config.model_params)
        if self._is_gp:
            kind = config.model_id[3:]
            kernel_kwargs = {
                k: mp.pop(k) for k in ("hed_m", "hed_seed") if k in mp and kind == "hed"
            }
            self._kernel = make_kernel(kind, space, **kernel_kwargs)
        else:
            self._kernel = None
        self._fit_params = mp
        opt_kind = ACQ_OPT_IDS[config.acq_opt_id]
        self._opt_config = make_acq_opt_config(opt_kind, **config.acq_opt_params)
        self._acq_template = parse_acq_id(config.acq_id)

    @property
    def n_observed(self) -> int:
        return len(self._y)

    @property
    def trust_region(self) -> TrustRegionState | None:
        return self._tr

    def model_diagnostics(self) -> dict | None:
        """Serializable summary of the most recently fitted surrogate."""
        if self._model is None:
            return None
        if isinstance(self._model, GPModel):
            return self._model.diagnostics()
        return {
            "n_features": int(self._model.n_features),
            "n_draws": int(len(self._model.draws)),
            "n_active": int(np.count_nonzero(np.abs(self._model.draws).max(axis=0))),
        }

    def _iteration(self) -> int:
        return len(self._y) + len(self._hX)

    def _all_X(self) -> list[np.ndarray]:
        return self._X + self._hX

    def _all_y(self) -> list[float]:
        return self._y + self._hy

    def _training_set(self) -> tuple[np.ndarray, np.ndarray]:
        X = np.array(self._all_X())
        y = np.array(self._all_y())
        if self._tr is not None and self._tr.center is not None:
            mask = in_trust_region(self.space, self._tr, X)
            if int(mask.sum()) >= 2:
                return X[mask], y[mask]
        return X, y

    def _fit_model(self, X: np.ndarray, y: np.ndarray):
        try:
            if self._is_gp:
                model = gp_fit(
                    transform(self.space, X), y, self._kernel,
                    init_params=self._warm, **self._fit_params,
                )
                self._warm = model.log_params.copy()
            else:
                model = hs_fit(
                    self.space, X, y,
                    seed=_derive_seed(self.config.seed, _TAG_FIT, self._iteration()),
                    **self._fit_params,
                )
        except (FitError, np.linalg.LinAlgError) as exc:
            raise FitError(
                f"surrogate fit failed at iteration {self._iteration()} "
                f"(n={len(y)}): {exc}"
            ) from exc
        self._model = model
        return model

    def _bind_acquisition(self, model, y_star: float) -> AcquisitionSpec:
        t = self._acq_template
        if t.kind == "ts":
            sampled = hs_sample_objective(
                model, seed=_derive_seed(self.config.seed, _TAG_TS, self._iteration())
            )
            return AcquisitionSpec(kind="ts", sampled=sampled)
        if t.kind in ("ei", "pi"):
            return AcquisitionSpec(kind=t.kind, incumbent=y_star)
        return AcquisitionSpec(kind=t.kind, beta=t.beta)

    def _active_tr(self) -> TrustRegionState | None:
        if self._tr is not None and self._tr.center is not None:
            return self._tr
        return None

    def _bo_suggest(self) -> np.ndarray:
        X_fit, y_fit = self._training_set()
        model = self._fit_model(X_fit, y_fit)
        y_star = float(np.min(self._all_y()))
        spec = self._bind_acquisition(model, y_star)

        def acq_fn(U: np.ndarray) -> np.ndarray:
            return np.atleast_1d(acq_evaluate(model, spec, U))

        tr = self._active_tr()
        if tr is not None:
            start = tr.center
        else:
            all_y = self._all_y()
            start = self._all_X()[int(np.argmin(all_y))]
        x_cand, _ = optimize_acq(
            acq_fn, self.space, start, self._opt_config,
            seed=_derive_seed(self.config.seed, _TAG_OPT, self._iteration()), tr=tr,
        )
        return self._dedup(x_cand, acq_fn, tr)

    def _dedup(self, x: np.ndarray, acq_fn, tr: TrustRegionState | None) -> np.ndarray:
        """Swap an exact repeat for its best unvisited neighbor.

        Candidate neighbors are all single-category flips plus (for numeric
        dims) jittered copies, region-filtered.  If every neighbor is also a
        repeat the original point is returned: revisits are allowed once the
        reachable space is exhausted.
        """
        seen = self._all_X()

        def is_dup(p: np.ndarray) -> bool:
            return any(np.array_equal(p, q) for q in seen)

        if not is_dup(x):
            return x
        space = self.space
        rng = np.random.default_rng(
            _derive_seed(self.config.seed, _TAG_DEDUP, self._iteration())
        )
        candidates: list[np.ndarray] = []
        sizes = space.category_sizes()
        for j, col in enumerate(space.categorical_idx):
            for cat in range(sizes[j]):
                if cat == int(x[col]):
                    continue
                v = x.copy()
                v[col] = cat
                candidates.append(v)
        if space.n_numeric:
            u = transform(space, x)
            lo = np.zeros(space.n_numeric)
            hi = np.ones(space.n_numeric)
            if tr is not None:
                cu = transform(space, tr.center)[space.numeric_idx]
                lo = np.maximum(lo, cu - tr.L_n)
                hi = np.minimum(hi, cu + tr.L_n)
            for _ in range(128):
                v = u.copy()
                jitter = u[space.numeric_idx] + 0.05 * rng.standard_normal(space.n_numeric)
                v[space.numeric_idx] = np.clip(jitter, lo, hi)
                candidates.append(inverse_transform(space, v))
        keep = []
        for v in candidates:
            if is_dup(v):
                continue
            if space.constraint_ids and not check_constraints(space, v):
                continue
            if tr is not None and not bool(in_trust_region(space, tr, v)[0]):
                continue
            keep.append(v)
        if not keep:
            return x
        vals = np.asarray(acq_fn(transform(space, np.array(keep))), dtype=float)
        return keep[int(np.argmax(vals))]

    def suggest(self) -> np.ndarray:
        if self._pending:
            raise ProtocolError("previous suggestion not yet observed")
        x = self._suggest_one()
        self._pending = 1
        return x.copy()

    def _suggest_one(self) -> np.ndarray:
        i = self._iteration()
        if i < self.config.n_init:
            return self._init_points[i].copy()
        return self._bo_suggest()

    def _hallucinated_value(self, x: np.ndarray) -> float:
        if isinstance(self._model, GPModel) and self._iteration() >= self.config.n_init:
            model = self._model
        elif self._iteration() >= 2:
            model = self._fit_model(*self._training_set())
        else:
            # Nothing to condition on yet: the zero-mean prior in raw units.
            return 0.0
        mu, _ = gp_predict(model, transform(self.space, x)[None])
        return float(mu[0])

    def suggest_batch(self, b: int) -> list[np.ndarray]:
        """Kriging Believer: hallucinate each pick at its posterior mean."""
        if b < 1:
            raise ValueError("batch size must be at least 1")
        if not self._is_gp:
            raise IncompatibilityError("batch suggestions need a GP posterior mean")
        if self._pending:
            raise ProtocolError("previous suggestion not yet observed")
        points = []
        for j in range(b):
            x = self._suggest_one()
            points.append(x.copy())
            # The last pick's hallucination would never be consumed: observe()
            # clears it before the next fit, so skip the extra model fit.
            if j < b - 1:
                self._hy.append(self._hallucinated_value(x))
                self._hX.append(x.copy())
        self._pending = b
        return points

    def observe(self, x: np.ndarray, y: float) -> None:
        x = np.asarray(x, dtype=float)
        validate_point(self.space, x)
        y = float(y)
        if not np.isfinite(y):
            raise ValueError("observed value must be finite")
        self._hX.clear()
        self._hy.clear()
        improved = y < self.best_y
        self._X.append(x.copy())
        self._y.append(y)
        if improved:
            self.best_x = x.copy()
            self.best_y = y
        self._pending = max(0, self._pending - 1)
        if self._tr is None:
            return
        tr = self._tr
        if tr.center is None:
            tr = tr_recenter(tr, self.space, x, y)
        elif bool(in_trust_region(self.space, tr, x)[0]) and y < tr.center_value:
            tr = tr_recenter(tr, self.space, x, y)
        out = tr_update(tr, improved)
        if isinstance(out, RestartSignal):
            aux = (lambda: self._kernel) if self._is_gp else (
                lambda: make_kernel("to", self.space)
            )
            out = tr_restart(
                tr, self.space, aux,
                _derive_seed(self.config.seed, _TAG_RESTART, tr.restart_index),
            )
        self._tr = out


def bo_build(config: BoConfig, space: SearchSpace) -> BayesOpt:
    """Validate the id combination and return a ready optimizer."""
    return BayesOpt(space, config)


class BaselineOptimizer:
    """Model-free optimizers behind the same suggest/observe interface."""

    def __init__(self, space: SearchSpace, config: BaselineConfig):
        if config.kind not in BASELINE_KINDS:
            raise KeyError(f"unknown baseline kind {config.kind!r}; known: {BASELINE_KINDS}")
        if config.kind == "mab" and space.n_numeric:
            raise IncompatibilityError("mab baseline requires a purely categorical space")
        self.space = space
        self.config = config
        self._rng = np.random.default_rng(config.seed)
        self._pending = 0
        self.best_x: np.ndarray | None = None
        self.best_y: float = np.inf
        self._X: list[np.ndarray] = []
        self._y: list[float] = []
        p = dict(config.params)
        self._sigma = float(p.pop("num_sigma", 0.1))
        if config.kind == "ga":
            self._population = int(p.pop("population", 20))
            self._n_elite = max(1, self._population // 10)
            self._n_parents = max(2, self._population // 5)
            self._queue: list[np.ndarray] = []
            self._gen_eval: list[tuple[np.ndarray, float]] = []
            self._carry: list[tuple[np.ndarray, float]] = []
        elif config.kind == "sa":
            self._temp = float(p.pop("init_temp", 1.0))
            self._cooling = float(p.pop("cooling", 0.95))
            self._current: tuple[np.ndarray, float] | None = None
        elif config.kind == "mab":
            self._gamma = float(p.pop("gamma", 0.1))
            self._weights = [np.ones(c) for c in space.category_sizes()]
            self._run_min = np.inf
            self._run_max = -np.inf
        if p:
            raise KeyError(f"unknown baseline parameters for {config.kind!r}: {sorted(p)}")

    @property
    def n_observed(self) -> int:
        return len(self._y)

    def _neighbor(self, x: np.ndarray) -> np.ndarray:
        """Single-dimension move: category flip or clipped Gaussian jitter."""
        space = self.space
        sizes = space.category_sizes()
        for _ in range(REJECTION_CAP):
            v = x.copy()
            idx = int(self._rng.integers(0, space.n_vars))
            if idx in space.categorical_idx:
                j = list(space.categorical_idx).index(idx)
                shift = int(self._rng.integers(1, sizes[j]))
                v[idx] = (int(x[idx]) + shift) % sizes[j]
            else:
                u = transform(space, v)
                j = list(space.numeric_idx).index(idx)
                u[idx] = float(np.clip(u[idx] + self._sigma * self._rng.standard_normal(), 0.0, 1.0))
                v = inverse_transform(space, u)
            if check_constraints(space, v):
                return v
        raise RejectionCapError("no feasible neighbor found")

    def _ga_breed(self) -> list[np.ndarray]:
        scored = self._carry + self._gen_eval
        scored.sort(key=lambda t: t[1])
        self._carry = scored[: self._n_elite]
        self._gen_eval = []
        pool = scored[: max(self._n_parents, 2)]
        n_children = self._population - len(self._carry)
        children = []
        d = self.space.n_vars
        sizes = self.space.category_sizes()
        for _ in range(n_children):
            ia = int(self._rng.integers(0, len(pool)))
            ib = int(self._rng.integers(0, len(pool)))
            mask = self._rng.random(d) < 0.5
            child = np.where(mask, pool[ia][0], pool[ib][0])
            for j, col in enumerate(self.space.categorical_idx):
                if self._rng.random() < 1.0 / d:
                    child[col] = float(self._rng.integers(0, sizes[j]))
            if self.space.n_numeric:
                u = transform(self.space, child)
                for col in self.space.numeric_idx:
                    if self._rng.random() < 1.0 / d:
                        u[col] = float(np.clip(u[col] + self._sigma * self._rng.standard_normal(), 0.0, 1.0))
                child = inverse_transform(self.space, u)
            if not check_constraints(self.space, child):
                child = sample_uniform(self.space, 1, self._rng)[0]
            children.append(child)
        return children

    def suggest(self) -> np.ndarray:
        if self._pending:
            raise ProtocolError("previous suggestion not yet observed")
        kind = self.config.kind
        if kind == "rs" or self.best_x is None and kind in ("hc", "sa"):
            x = sample_uniform(self.space, 1, self._rng)[0]
        elif kind == "hc":
            x = self._neighbor(self.best_x)
        elif kind == "sa":
            x = self._neighbor(self._current[0])
        elif kind == "ga":
            if not self._queue:
                if len(self._gen_eval) + len(self._carry) >= self._population:
                    self._queue = self._ga_breed()
                else:
                    self._queue = list(sample_uniform(
                        self.space,
                        self._population - len(self._gen_eval) - len(self._carry),
                        self._rng,
                    ))
            x = self._queue[0]
        else:  # mab
            sizes = self.space.category_sizes()
            for _ in range(500):
                x = np.empty(self.space.n_vars)
                for j, col in enumerate(self.space.categorical_idx):
                    w = self._weights[j]
                    pr = (1.0 - self._gamma) * w / w.sum() + self._gamma / len(w)
                    x[col] = float(self._rng.choice(sizes[j], p=pr))
                if check_constraints(self.space, x):
                    break
            else:
                raise RejectionCapError("bandit feasibility resampling exhausted")
        self._pending = 1
        return np.asarray(x, dtype=float).copy()

    def observe(self, x: np.ndarray, y: float) -> None:
        x = np.asarray(x, dtype=float)
        validate_point(self.space, x)
        y = float(y)
        if not np.isfinite(y):
            raise ValueError("observed value must be finite")
        self._pending = max(0, self._pending - 1)
        self._X.append(x.copy())
        self._y.append(y)
        if y < self.best_y:
            self.best_x = x.copy()
            self.best_y = y
        kind = self.config.kind
        if kind == "ga":
            if self._queue and np.array_equal(self._queue[0], x):
                self._queue.pop(0)
            self._gen_eval.append((x.copy(), y))
        elif kind == "sa":
            if self._current is None:
                self._current = (x.copy(), y)
            else:
                delta = y - self._current[1]
                scale = float(np.std(self._y)) if len(self._y) >= 2 else 1.0
                scale = max(scale, 1e-12)
                if delta < 0 or self._rng.random() < np.exp(-delta / (self._temp * scale)):
                    self._current = (x.copy(), y)
            self._temp *= self._cooling
        elif kind == "mab":
            self._run_min = min(self._run_min, y)
            self._run_max = max(self._run_max, y)
            span = self._run_max - self._run_min
            # Minimization: low y earns high reward.
            reward = 0.5 if span <= 0 else (self._run_max - y) / span
            for j, col in enumerate(self.space.categorical_idx):
                w = self._weights[j]
                k = len(w)
                pr = (1.0 - self._gamma) * w / w.sum() + self._gamma / k
                arm = int(x[col])
                w[arm] *= np.exp(self._gamma * (reward / pr[arm]) / k)
                w /= w.max()


def baseline_build(config: BaselineConfig, space: SearchSpace) -> BaselineOptimizer:
    return BaselineOptimizer(space, config)


def build_optimizer(space: SearchSpace, optimizer: dict, n_init: int, seed: int):
    """Construct a BO or baseline optimizer from a run-config dictionary.

    BO form: {"model": .., "acq": .., "acq_opt": .., "tr": ..} with optional
    "model_params"/"acq_opt_params".  Baseline form: {"baseline": ..} with
    optional "params".  GA baselines default their population to n_init.
    """
    if "baseline" in optimizer:
        params = dict(optimizer.get("params", {}))
        if optimizer["baseline"] == "ga":
            params.setdefault("population", max(int(n_init), 4))
        return baseline_build(BaselineConfig(kind=optimizer["baseline"], seed=seed, params=params), space)
    config = BoConfig(
        model_id=optimizer["model"],
        acq_id=optimizer["acq"],
        acq_opt_id=optimizer["acq_opt"],
        tr_id=optimizer.get("tr", "none"),
        n_init=int(n_init),
        seed=seed,
        model_params=dict(optimizer.get("model_params", {})),
        acq_opt_params=dict(optimizer.get("acq_opt_params", {})),
    )
    return bo_build(config, space)


def optimizer_display_id(optimizer: dict) -> str:
    """Stable human-readable id used in records and report tables."""
    if "baseline" in optimizer:
        return f"baseline-{optimizer['baseline']}"
    parts = [
        optimizer["model"],
        optimizer["acq"].replace(":", "_").replace("=", ""),
        optimizer["acq_opt"],
        optimizer.get("tr", "none"),
    ]
    return "-".join(parts)


def list_optimizer_ids() -> dict:
    """Registry contents for discovery (CLI list-optimizers)."""
    return {
        "models": list(MODEL_IDS),
        "acquisitions": list(ACQ_IDS),
        "acq_optimizers": list(ACQ_OPT_IDS),
        "trust_regions": list(TR_IDS),
        "baselines": list(BASELINE_KINDS),
    }
