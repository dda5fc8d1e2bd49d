"""Mixed categorical/numeric search spaces.

A space is an ordered list of variables, each continuous, integer, or
categorical.  Points are 1-D float64 arrays of length ``n_vars``: continuous
entries hold raw values, integer entries hold integral raw values, categorical
entries hold the category *index* (an integral float).  Categorical labels are
only used at the task boundary; everything inside the optimizer works on
indices.

Constraint predicates are pure functions registered by string id so that
spaces stay JSON-serializable.  A predicate receives the raw point array and
returns True when the point is feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

CONT = "cont"
INT = "int"
CAT = "cat"

# Per-point attempt cap for constraint rejection sampling.
REJECTION_CAP = 10_000


class RejectionCapError(RuntimeError):
    """Raised when constraint rejection sampling exhausts its attempt budget."""


_CONSTRAINT_REGISTRY: dict[str, Callable[[np.ndarray], bool]] = {}


def register_constraint(constraint_id: str, fn: Callable[[np.ndarray], bool]) -> None:
    """Register a pure feasibility predicate under a string id.

    Re-registering the same id overwrites the previous predicate; ids are the
    unit of serialization, so keep them stable.
    """
    if not constraint_id:
        raise ValueError("constraint id must be a non-empty string")
    _CONSTRAINT_REGISTRY[constraint_id] = fn


def get_constraint(constraint_id: str) -> Callable[[np.ndarray], bool]:
    if constraint_id not in _CONSTRAINT_REGISTRY:
        raise KeyError(f"unknown constraint id: {constraint_id!r}")
    return _CONSTRAINT_REGISTRY[constraint_id]


@dataclass(frozen=True)
class VariableSpec:
    """One dimension of a search space.

    Attributes:
        name: unique variable name.
        kind: one of "cont", "int", "cat".
        bounds: (lower, upper) for cont/int variables, lower < upper.
        categories: ordered label tuple for cat variables, at least 2 entries.
    """

    name: str
    kind: str
    bounds: tuple[float, float] | None = None
    categories: tuple[Any, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in (CONT, INT, CAT):
            raise ValueError(f"unknown variable kind: {self.kind!r}")
        if self.kind == CAT:
            if not self.categories or len(self.categories) < 2:
                raise ValueError(f"variable {self.name!r}: need >= 2 categories")
            if self.bounds is not None:
                raise ValueError(f"variable {self.name!r}: categorical takes no bounds")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError(f"variable {self.name!r}: duplicate categories")
        else:
            if self.bounds is None:
                raise ValueError(f"variable {self.name!r}: numeric needs bounds")
            lo, hi = self.bounds
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError(f"variable {self.name!r}: bounds must be finite")
            if not lo < hi:
                raise ValueError(f"variable {self.name!r}: bounds inverted or degenerate")
            if self.kind == INT and (lo != int(lo) or hi != int(hi)):
                raise ValueError(f"variable {self.name!r}: integer bounds must be integral")

    @property
    def n_categories(self) -> int:
        if self.kind != CAT:
            raise ValueError(f"variable {self.name!r} is not categorical")
        return len(self.categories)


@dataclass(frozen=True)
class SearchSpace:
    """Immutable ordered collection of variables plus constraint ids."""

    variables: tuple[VariableSpec, ...]
    constraint_ids: tuple[str, ...] = ()
    # Index arrays are derived in make_space; kept as fields so the dataclass
    # stays hashable-by-identity and cheap to pass around.
    numeric_idx: np.ndarray = field(default=None, repr=False, compare=False)
    categorical_idx: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_numeric(self) -> int:
        return len(self.numeric_idx)

    @property
    def n_categorical(self) -> int:
        return len(self.categorical_idx)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def numeric_bounds(self) -> np.ndarray:
        """(n_numeric, 2) raw lower/upper bounds, in numeric_idx order."""
        return np.array([self.variables[i].bounds for i in self.numeric_idx], dtype=float).reshape(-1, 2)

    def category_sizes(self) -> np.ndarray:
        """Category counts per categorical dim, in categorical_idx order."""
        return np.array([self.variables[i].n_categories for i in self.categorical_idx], dtype=int)


def make_space(
    variables: Sequence[VariableSpec],
    constraint_ids: Sequence[str] = (),
) -> SearchSpace:
    """Validate variables and build a SearchSpace.

    Raises ValueError on empty variable lists or duplicate names and KeyError
    on constraint ids that were never registered.
    """
    variables = tuple(variables)
    if not variables:
        raise ValueError("a search space needs at least one variable")
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ValueError(f"duplicate variable names: {dupes}")
    for cid in constraint_ids:
        get_constraint(cid)  # raises KeyError for unknown ids
    numeric = np.array([i for i, v in enumerate(variables) if v.kind != CAT], dtype=int)
    categorical = np.array([i for i, v in enumerate(variables) if v.kind == CAT], dtype=int)
    return SearchSpace(
        variables=variables,
        constraint_ids=tuple(constraint_ids),
        numeric_idx=numeric,
        categorical_idx=categorical,
    )


def round_half_up(x: np.ndarray | float) -> np.ndarray | float:
    """Round with ties away from the floor (0.5 -> 1, 1.5 -> 2, -0.5 -> 0)."""
    return np.floor(np.asarray(x, dtype=float) + 0.5)


def validate_point(space: SearchSpace, x: np.ndarray) -> None:
    """Raise ValueError when x is not a well-formed raw point of the space."""
    x = np.asarray(x, dtype=float)
    if x.shape != (space.n_vars,):
        raise ValueError(f"point shape {x.shape} != ({space.n_vars},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("point contains non-finite values")
    for i, v in enumerate(space.variables):
        if v.kind == CAT:
            if x[i] != int(x[i]) or not (0 <= x[i] < v.n_categories):
                raise ValueError(f"variable {v.name!r}: bad category index {x[i]}")
        else:
            lo, hi = v.bounds
            if not (lo <= x[i] <= hi):
                raise ValueError(f"variable {v.name!r}: value {x[i]} outside [{lo}, {hi}]")
            if v.kind == INT and x[i] != int(x[i]):
                raise ValueError(f"variable {v.name!r}: non-integral value {x[i]}")


def is_valid_point(space: SearchSpace, x: np.ndarray) -> bool:
    try:
        validate_point(space, x)
    except ValueError:
        return False
    return True


def check_constraints(space: SearchSpace, x: np.ndarray) -> bool:
    """True when every registered constraint of the space accepts x."""
    return all(get_constraint(cid)(x) for cid in space.constraint_ids)


def transform(space: SearchSpace, X: np.ndarray) -> np.ndarray:
    """Map raw points to the unit representation.

    Numeric dims map through (v - lo) / (hi - lo); categorical dims pass
    through unchanged as indices.  Accepts a single point or an (n, d) batch.
    """
    squeeze = np.asarray(X).ndim == 1
    X = np.atleast_2d(np.asarray(X, dtype=float))
    U = X.copy()
    for i in space.numeric_idx:
        lo, hi = space.variables[i].bounds
        U[:, i] = (X[:, i] - lo) / (hi - lo)
    return U[0] if squeeze else U


def inverse_transform(space: SearchSpace, U: np.ndarray) -> np.ndarray:
    """Map unit-representation points back to raw values.

    Integer dims snap half-up after rescaling and are clipped to bounds;
    categorical indices pass through.
    """
    squeeze = np.asarray(U).ndim == 1
    U = np.atleast_2d(np.asarray(U, dtype=float))
    X = U.copy()
    for i in space.numeric_idx:
        v = space.variables[i]
        lo, hi = v.bounds
        raw = lo + U[:, i] * (hi - lo)
        if v.kind == INT:
            raw = np.clip(round_half_up(raw), lo, hi)
        else:
            raw = np.clip(raw, lo, hi)
        X[:, i] = raw
    return X[0] if squeeze else X


def sample_uniform(
    space: SearchSpace,
    n: int,
    seed: int | np.random.Generator | None = None,
) -> np.ndarray:
    """Draw n uniform feasible raw points as an (n, d) array.

    The stream is prefix-stable: for a fixed seed, sample_uniform(space, k)
    equals the first k rows of sample_uniform(space, m) for any m >= k.  Each
    point gets at most REJECTION_CAP constraint-rejection attempts before
    RejectionCapError is raised.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    out = np.empty((n, space.n_vars), dtype=float)
    for row in range(n):
        for attempt in range(REJECTION_CAP):
            x = _draw_one(space, rng)
            if check_constraints(space, x):
                out[row] = x
                break
        else:
            raise RejectionCapError(
                f"no feasible point found in {REJECTION_CAP} attempts "
                f"(constraints {space.constraint_ids})"
            )
    return out


def _draw_one(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    x = np.empty(space.n_vars, dtype=float)
    for i, v in enumerate(space.variables):
        if v.kind == CAT:
            x[i] = rng.integers(0, v.n_categories)
        elif v.kind == INT:
            lo, hi = v.bounds
            x[i] = rng.integers(int(lo), int(hi) + 1)
        else:
            lo, hi = v.bounds
            x[i] = rng.uniform(lo, hi)
    return x


def hamming_distance(space: SearchSpace, x1: np.ndarray, x2: np.ndarray) -> int:
    """Number of categorical dims on which the two points disagree."""
    if space.n_categorical == 0:
        return 0
    a = np.asarray(x1, dtype=float)[space.categorical_idx]
    b = np.asarray(x2, dtype=float)[space.categorical_idx]
    return int(np.count_nonzero(a != b))


def space_to_dict(space: SearchSpace) -> dict:
    """JSON-serializable description; inverse of space_from_dict."""
    variables = []
    for v in space.variables:
        d: dict[str, Any] = {"name": v.name, "kind": v.kind}
        if v.kind == CAT:
            d["categories"] = list(v.categories)
        else:
            d["bounds"] = [float(v.bounds[0]), float(v.bounds[1])]
        variables.append(d)
    return {"variables": variables, "constraints": list(space.constraint_ids)}


def space_from_dict(payload: dict) -> SearchSpace:
    variables = []
    for d in payload["variables"]:
        if d["kind"] == CAT:
            variables.append(VariableSpec(d["name"], CAT, categories=tuple(d["categories"])))
        else:
            lo, hi = d["bounds"]
            variables.append(VariableSpec(d["name"], d["kind"], bounds=(float(lo), float(hi))))
    return make_space(variables, payload.get("constraints", ()))
