"""Synthetic benchmark tasks over mixed categorical/numeric spaces.

Two families:

* Classic continuous test functions (Ackley, Rastrigin, ...) generalized to
  mixed spaces by turning some dimensions categorical.  A categorical dim
  decodes its index through an evenly spaced value grid over the function's
  canonical domain, endpoints included, so an odd grid always contains 0.
* A self-contained pest-control simulation over 25 stations with 5 actions
  each, driven by the versioned constant block PEST_CONTROL_V1.

Task ids accepted by get_task:

* ``ackley20``, ``ackley53``, ``pest`` for the fixed tasks,
* ``sfu:<fn>[:d=N][:cat=K][:cont=M]`` for function <fn> on N dims (default
  10), of which M are continuous (default 0 when cat is given, else all) and
  the rest categorical with K categories each.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .space import CAT, CONT, SearchSpace, VariableSpec, make_space

# ---------------------------------------------------------------------------
# continuous test functions, vectorized over (n, d) arrays
# ---------------------------------------------------------------------------


def ackley(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    d = X.shape[1]
    a, b, c = 20.0, 0.2, 2.0 * np.pi
    s1 = np.sum(X**2, axis=1) / d
    s2 = np.sum(np.cos(c * X), axis=1) / d
    return -a * np.exp(-b * np.sqrt(s1)) - np.exp(s2) + a + np.e


def sphere(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    return np.sum(X**2, axis=1)


def rotated_hyper_ellipsoid(X: np.ndarray) -> np.ndarray:
    # sum_i sum_{j<=i} x_j^2 == sum_j (d - j) * x_j^2 with 0-based j
    X = np.atleast_2d(X)
    d = X.shape[1]
    w = np.arange(d, 0, -1, dtype=float)
    return np.sum(w * X**2, axis=1)


def rastrigin(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    d = X.shape[1]
    return 10.0 * d + np.sum(X**2 - 10.0 * np.cos(2.0 * np.pi * X), axis=1)


def rosenbrock(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    return np.sum(100.0 * (X[:, 1:] - X[:, :-1] ** 2) ** 2 + (X[:, :-1] - 1.0) ** 2, axis=1)


def levy(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    w = 1.0 + (X - 1.0) / 4.0
    term1 = np.sin(np.pi * w[:, 0]) ** 2
    term3 = (w[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[:, -1]) ** 2)
    wm = w[:, :-1]
    term2 = np.sum((wm - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * wm + 1.0) ** 2), axis=1)
    return term1 + term2 + term3


def griewank(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    d = X.shape[1]
    idx = np.sqrt(np.arange(1, d + 1, dtype=float))
    return np.sum(X**2, axis=1) / 4000.0 - np.prod(np.cos(X / idx), axis=1) + 1.0


def styblinski_tang(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    return 0.5 * np.sum(X**4 - 16.0 * X**2 + 5.0 * X, axis=1)


# Per-dimension argmin/optimum of styblinski_tang (root of 2x^3 - 16x + 2.5).
_ST_ARGMIN = -2.903534027771177
_ST_OPT_PER_DIM = -39.166165703771415

# fn -> (callable, canonical one-dim domain, per-dim argmin, per-dim optimum)
SFU_FUNCTIONS: dict[str, tuple[Callable, tuple[float, float], float, float]] = {
    "ackley": (ackley, (-32.768, 32.768), 0.0, 0.0),
    "sphere": (sphere, (-5.12, 5.12), 0.0, 0.0),
    "rotated_hyper_ellipsoid": (rotated_hyper_ellipsoid, (-65.536, 65.536), 0.0, 0.0),
    "rastrigin": (rastrigin, (-5.12, 5.12), 0.0, 0.0),
    "rosenbrock": (rosenbrock, (-2.048, 2.048), 1.0, 0.0),
    "levy": (levy, (-10.0, 10.0), 1.0, 0.0),
    "griewank": (griewank, (-600.0, 600.0), 0.0, 0.0),
    "styblinski_tang": (styblinski_tang, (-5.0, 5.0), _ST_ARGMIN, _ST_OPT_PER_DIM),
}


def category_value_grid(domain: tuple[float, float], n_categories: int) -> np.ndarray:
    """Evenly spaced decoded values over the domain, endpoints included."""
    if n_categories < 2:
        raise ValueError("need at least 2 categories")
    return np.linspace(domain[0], domain[1], n_categories)


# ---------------------------------------------------------------------------
# task container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Task:
    """A black-box objective bound to its search space (minimization).

    ``evaluate`` accepts a raw point or an (n, d) batch and returns a float
    array of objective values.  ``known_optimum`` is None when the optimum is
    not attainable within the encoded space.
    """

    task_id: str
    space: SearchSpace
    known_optimum: float | None
    known_argmin: np.ndarray | None = field(default=None, repr=False)
    _fn: Callable[[np.ndarray], np.ndarray] = field(default=None, repr=False)

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        squeeze = np.asarray(X).ndim == 1
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.space.n_vars:
            raise ValueError(f"points have {X.shape[1]} dims, task expects {self.space.n_vars}")
        for j in self.space.categorical_idx:
            col = X[:, j]
            n_cat = self.space.variables[j].n_categories
            if np.any(col != np.floor(col)) or np.any(col < 0) or np.any(col >= n_cat):
                raise ValueError(f"invalid category index in column {j}")
        y = np.asarray(self._fn(X), dtype=float)
        return y[0] if squeeze else y


def _decode_columns(space: SearchSpace, X: np.ndarray, grids: dict[int, np.ndarray]) -> np.ndarray:
    """Replace categorical index columns by their decoded numeric values."""
    Z = X.astype(float).copy()
    for j, grid in grids.items():
        Z[:, j] = grid[X[:, j].astype(int)]
    return Z


# ---------------------------------------------------------------------------
# classic-function task builders
# ---------------------------------------------------------------------------


def make_sfu_task(
    fn_id: str,
    n_dims: int = 10,
    n_categories: int = 0,
    n_continuous: int | None = None,
) -> Task:
    """Build a (possibly mixed) task from a classic test function.

    Categorical dims come first, continuous dims last; the function itself is
    permutation-invariant for every entry in SFU_FUNCTIONS with categorical
    use, so ordering is a pure encoding choice.
    """
    if fn_id not in SFU_FUNCTIONS:
        raise KeyError(f"unknown test function: {fn_id!r}")
    fn, domain, argmin_1d, opt_per_dim = SFU_FUNCTIONS[fn_id]
    if n_dims < 1:
        raise ValueError("n_dims must be >= 1")
    if n_categories == 0:
        n_cont = n_dims if n_continuous is None else n_continuous
        if n_cont != n_dims:
            raise ValueError("without categories all dims must be continuous")
        n_cat_dims = 0
    else:
        if n_categories < 2:
            raise ValueError("n_categories must be 0 or >= 2")
        n_cont = 0 if n_continuous is None else n_continuous
        if not 0 <= n_cont <= n_dims:
            raise ValueError("n_continuous out of range")
        n_cat_dims = n_dims - n_cont

    variables: list[VariableSpec] = []
    grids: dict[int, np.ndarray] = {}
    grid = category_value_grid(domain, n_categories) if n_cat_dims else None
    for j in range(n_cat_dims):
        variables.append(VariableSpec(f"x{j}", CAT, categories=tuple(float(v) for v in grid)))
        grids[j] = grid
    for j in range(n_cat_dims, n_dims):
        variables.append(VariableSpec(f"x{j}", CONT, bounds=domain))
    space = make_space(variables)

    def evaluate(X: np.ndarray, _grids=grids, _space=space) -> np.ndarray:
        return fn(_decode_columns(_space, X, _grids))

    # The encoded optimum exists iff every categorical grid contains the
    # function's per-dim argmin (grids are symmetric, so 0 needs an odd count).
    known_optimum = None
    known_argmin = None
    if n_cat_dims == 0:
        known_argmin = np.full(n_dims, argmin_1d)
        known_optimum = opt_per_dim * n_dims if fn_id == "styblinski_tang" else 0.0
    elif grid is not None:
        hits = np.isclose(grid, argmin_1d)
        if hits.any():
            idx = int(np.argmax(hits))
            known_argmin = np.concatenate([np.full(n_cat_dims, float(idx)), np.full(n_cont, argmin_1d)])
            known_optimum = opt_per_dim * n_dims if fn_id == "styblinski_tang" else 0.0

    parts = [f"sfu:{fn_id}", f"d={n_dims}"]
    if n_categories:
        parts.append(f"cat={n_categories}")
    if n_cont and n_categories:
        parts.append(f"cont={n_cont}")
    return Task(":".join(parts), space, known_optimum, known_argmin, evaluate)


def make_ackley20() -> Task:
    """Ackley over 20 categorical dims, 11 categories each on [-32.768, 32.768].

    Grid spacing is 6.5536; the middle category (index 5) decodes to 0, so the
    global optimum (all-middle) is attainable with value 0.
    """
    task = make_sfu_task("ackley", n_dims=20, n_categories=11)
    return Task("ackley20", task.space, task.known_optimum, task.known_argmin, task._fn)


def make_ackley53() -> Task:
    """Ackley over 50 binary dims ({0, 1}) plus 3 continuous dims on [-1, 1]."""
    variables = [VariableSpec(f"h{j}", CAT, categories=(0.0, 1.0)) for j in range(50)]
    variables += [VariableSpec(f"c{j}", CONT, bounds=(-1.0, 1.0)) for j in range(3)]
    space = make_space(variables)
    grids = {j: np.array([0.0, 1.0]) for j in range(50)}

    def evaluate(X: np.ndarray) -> np.ndarray:
        return ackley(_decode_columns(space, X, grids))

    argmin = np.zeros(53)
    return Task("ackley53", space, 0.0, argmin, evaluate)


# ---------------------------------------------------------------------------
# pest control
# ---------------------------------------------------------------------------

# Versioned constant block; changing any value invalidates recorded golden
# values, so bump the version key alongside edits.
PEST_CONTROL_V1 = {
    "version": 1,
    "n_stations": 25,
    # action 0 = no pesticide, actions 1..4 = pesticide products
    "prices": (0.0, 1.0, 0.8, 0.7, 0.5),
    "kill_rates": (0.0, 0.5, 0.4, 0.3, 0.2),
    # price multiplier per prior use of the same product (supplier discount)
    "discount": 0.97,
    # effectiveness multiplier per prior use of the same product (resistance)
    "resistance": 0.92,
    # untreated infestation growth factor per station, jittered per station
    "growth_lo": 1.18,
    "growth_hi": 1.32,
    "init_infestation": 0.05,
    # objective = total price + penalty * sum of post-action infestation levels
    "penalty": 1.0,
    # seed for the fixed per-station growth jitter (drawn once per task build)
    "internal_seed": 2027,
}


def _pest_growth_rates(constants: dict) -> np.ndarray:
    rng = np.random.default_rng(constants["internal_seed"])
    return rng.uniform(constants["growth_lo"], constants["growth_hi"], constants["n_stations"])


def pest_control_objective(actions: np.ndarray, constants: dict = PEST_CONTROL_V1) -> float:
    """Run the station-by-station infestation recurrence for one action vector.

    At station i with action k: the product's effective kill rate is
    kill_rates[k] * resistance**(prior uses of k); infestation updates as
    z <- min(1, z * growth[i] * (1 - kill)); the price paid is
    prices[k] * discount**(prior uses of k).  Objective = total price +
    penalty * sum of post-action infestation levels.  Deterministic: the only
    randomness is the fixed internal-seed growth jitter.
    """
    growth = _pest_growth_rates(constants)
    prices = constants["prices"]
    kills = constants["kill_rates"]
    z = constants["init_infestation"]
    uses = [0] * len(prices)
    cost = 0.0
    infested = 0.0
    for i in range(constants["n_stations"]):
        k = int(actions[i])
        cost += prices[k] * constants["discount"] ** uses[k]
        kill = kills[k] * constants["resistance"] ** uses[k]
        z = min(1.0, z * growth[i] * (1.0 - kill))
        infested += z
        uses[k] += 1
    return cost + constants["penalty"] * infested


def make_pest_control() -> Task:
    """25 stations, 5 actions each (4 pesticide products + none)."""
    constants = PEST_CONTROL_V1
    labels = ("none", "p1", "p2", "p3", "p4")
    variables = [
        VariableSpec(f"station{i}", CAT, categories=labels)
        for i in range(constants["n_stations"])
    ]
    space = make_space(variables)

    def evaluate(X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.array([pest_control_objective(row, constants) for row in X])

    return Task("pest", space, None, None, evaluate)


# ---------------------------------------------------------------------------
# registry / id grammar
# ---------------------------------------------------------------------------

_FIXED_TASKS: dict[str, Callable[[], Task]] = {
    "ackley20": make_ackley20,
    "ackley53": make_ackley53,
    "pest": make_pest_control,
}


def get_task(task_id: str) -> Task:
    """Resolve a task id (fixed name or sfu:<fn>[:d=N][:cat=K][:cont=M])."""
    if task_id in _FIXED_TASKS:
        return _FIXED_TASKS[task_id]()
    if task_id.startswith("sfu:"):
        parts = task_id.split(":")
        if len(parts) < 2 or not parts[1]:
            raise ValueError(f"malformed task id: {task_id!r}")
        fn_id = parts[1]
        opts: dict[str, int] = {}
        for part in parts[2:]:
            if "=" not in part:
                raise ValueError(f"malformed task option {part!r} in {task_id!r}")
            key, val = part.split("=", 1)
            if key not in ("d", "cat", "cont"):
                raise ValueError(f"unknown task option {key!r} in {task_id!r}")
            opts[key] = int(val)
        return make_sfu_task(
            fn_id,
            n_dims=opts.get("d", 10),
            n_categories=opts.get("cat", 0),
            n_continuous=opts.get("cont"),
        )
    raise KeyError(f"unknown task id: {task_id!r}")


def list_task_ids() -> list[str]:
    """Fixed task ids plus the parameterized families."""
    fixed = sorted(_FIXED_TASKS)
    sfu = [f"sfu:{name}[:d=N][:cat=K][:cont=M]" for name in sorted(SFU_FUNCTIONS)]
    return fixed + sfu
