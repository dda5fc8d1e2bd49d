#!/usr/bin/env python3
"""Benchmark tasks: fixed ids, the synthetic-function grammar, pest control.

Tasks bundle a search space with an objective (minimization).  Fixed ids like
``ackley20`` and ``pest`` reproduce standard setups; the grammar
``sfu:<fn>[:d=N][:cat=K][:cont=M]`` builds categorized variants of classic
test functions on demand.
"""

from __future__ import annotations

import numpy as np

from mixbo.tasks import get_task, list_task_ids


def main() -> None:
    print("registered ids:", ", ".join(list_task_ids()))

    ackley = get_task("ackley20")
    print(f"\nackley20: {ackley.space.n_vars} categorical dims, "
          f"{ackley.space.category_sizes()[0]} categories each")
    x_mid = np.full(20, 5.0)  # category 5 decodes to the grid midpoint 0.0
    print(f"objective at all-midpoint point: {ackley.evaluate(x_mid):.6f}")

    mixed = get_task("sfu:rosenbrock:d=6:cat=5:cont=2")
    print(f"\nsfu:rosenbrock:d=6:cat=5:cont=2 -> {mixed.space.n_categorical} "
          f"categorical + {mixed.space.n_numeric} continuous dims")
    print("known optimum:", mixed.known_optimum)

    pest = get_task("pest")
    print(f"\npest control: {pest.space.n_vars} stations x "
          f"{pest.space.category_sizes()[0]} interventions")
    do_nothing = np.zeros(pest.space.n_vars)
    always_first = np.ones(pest.space.n_vars)
    print(f"  all-none cost     : {pest.evaluate(do_nothing):.6f}")
    print(f"  all-product-1 cost: {pest.evaluate(always_first):.6f}")

    rng = np.random.default_rng(3)
    batch = np.stack([rng.integers(0, 5, pest.space.n_vars).astype(float) for _ in range(4)])
    print("  four random policies:", np.round(pest.evaluate(batch), 4))


if __name__ == "__main__":
    main()
