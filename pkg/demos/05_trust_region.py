#!/usr/bin/env python3
"""Trust-region mechanics in isolation: growth, shrinkage, restart.

Drives the state machine directly with scripted improve/fail feedback so the
counter thresholds are visible (3 consecutive improvements grow the radii by
1.5x, 40 consecutive failures shrink them; shrinking below the floor radii
closes the region and restarts around a surrogate-picked new center).
"""

from __future__ import annotations

import numpy as np

from mixbo.space import VariableSpec, make_space
from mixbo.surrogates.kernels import make_kernel
from mixbo.trust_region import (
    FAIL_TOL,
    RestartSignal,
    SUCC_TOL,
    tr_init,
    tr_recenter,
    tr_restart,
    tr_update,
)


def show(state, note=""):
    print(f"  L_h={state.L_h}  L_n={np.round(state.L_n, 4)}  "
          f"succ={state.succ_count} fail={state.fail_count} "
          f"restarts={state.restart_index}  {note}")


def main() -> None:
    space = make_space(
        [VariableSpec(f"c{i}", "cat", categories=tuple("abcdefgh")) for i in range(4)]
        + [VariableSpec("z", "cont", bounds=(0.0, 1.0))]
    )
    state = tr_init(space)
    print("fresh region:")
    show(state)

    state = tr_recenter(state, space, np.array([0.0, 0.0, 0.0, 0.0, 0.5]), 1.0)
    print(f"\n{SUCC_TOL} consecutive improvements grow the radii:")
    for _ in range(SUCC_TOL):
        state = tr_update(state, improved=True)
    show(state, "(after one growth step)")

    print(f"\n{FAIL_TOL} consecutive failures shrink them:")
    for _ in range(FAIL_TOL):
        out = tr_update(state, improved=False)
        assert not isinstance(out, RestartSignal)
        state = out
    show(state, "(after one shrink step)")

    print("\nshrinking keeps going until a floor radius is hit...")
    restarts = 0
    rng_calls = 0
    while restarts == 0:
        out = tr_update(state, improved=False)
        if isinstance(out, RestartSignal):
            state = tr_restart(state, space, lambda: make_kernel("to", space), seed=0)
            restarts += 1
        else:
            state = out
            rng_calls += 1
    print(f"...restart fired after {rng_calls} more failures")
    show(state, "(fresh radii, new center from the incumbent surrogate)")
    print("closed-region incumbents recorded:", len(state.incumbents))


if __name__ == "__main__":
    main()
