"""Acquisition utilities over surrogate posteriors.

All functions return "larger is better" utilities under the global
minimization convention: EI and PI measure improvement below the incumbent,
LCB is the negated mean/deviation combination, and Thompson sampling negates
the sampled linear objective.  Closed-form acquisitions pair with the GP;
Thompson sampling pairs with the Horseshoe model only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .surrogates.gp import GPModel, gp_predict
from .surrogates.horseshoe import HorseshoeModel, SampledObjective

DEFAULT_LCB_BETA = 1.96**2

GP_ACQUISITIONS = ("ei", "pi", "lcb", "ucb")


class IncompatibilityError(ValueError):
    """A model/acquisition or config/space combination violates a pairing rule."""


def _moments(mu, sigma):
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(sigma))):
        raise ValueError("non-finite posterior moments")
    if np.any(sigma < 0):
        raise ValueError("negative posterior deviation")
    return mu, sigma


def ei(mu, sigma, best: float):
    """Expected improvement below the incumbent; >= 0 everywhere."""
    mu, sigma = _moments(mu, sigma)
    imp = best - mu
    out = np.maximum(imp, 0.0).astype(float)
    pos = sigma > 0
    z = np.divide(imp, sigma, out=np.zeros_like(out), where=pos)
    out = np.where(pos, imp * norm.cdf(z) + sigma * norm.pdf(z), out)
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def pi(mu, sigma, best: float):
    """Probability of improving on the incumbent; degenerates to an indicator."""
    mu, sigma = _moments(mu, sigma)
    imp = best - mu
    pos = sigma > 0
    z = np.divide(imp, sigma, out=np.zeros_like(np.asarray(imp, dtype=float)), where=pos)
    out = np.where(pos, norm.cdf(z), (imp > 0).astype(float))
    return float(out) if out.ndim == 0 else out


def lcb(mu, sigma, beta: float = DEFAULT_LCB_BETA):
    """-mu - sqrt(beta) * sigma; larger beta lowers the score at fixed moments."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    mu, sigma = _moments(mu, sigma)
    out = -mu - np.sqrt(beta) * sigma
    return float(out) if out.ndim == 0 else out


def ucb(mu, sigma, beta: float = DEFAULT_LCB_BETA):
    if beta <= 0:
        raise ValueError("beta must be positive")
    mu, sigma = _moments(mu, sigma)
    out = mu + np.sqrt(beta) * sigma
    return float(out) if out.ndim == 0 else out


@dataclass
class AcquisitionSpec:
    """Which utility to compute plus its parameters.

    ``incumbent`` is the best observed value (ei/pi); ``beta`` applies to
    lcb/ucb; ``sampled`` holds the Thompson draw for ts.
    """

    kind: str
    incumbent: float | None = None
    beta: float | None = None
    sampled: SampledObjective | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("ei", "pi", "lcb", "ucb", "ts"):
            raise ValueError(f"unknown acquisition kind: {self.kind!r}")
        if self.kind in ("ei", "pi") and self.incumbent is None:
            raise ValueError(f"{self.kind} needs the incumbent value")
        if self.kind in ("lcb", "ucb") and self.beta is None:
            self.beta = DEFAULT_LCB_BETA


def parse_acq_id(acq_id: str) -> AcquisitionSpec:
    """Parse config ids such as "ei", "ts", or "lcb:beta=3.84".

    EI/PI incumbents are filled in by the engine at suggest time; the spec
    returned here is a template.
    """
    parts = acq_id.split(":")
    kind = parts[0]
    beta = None
    for part in parts[1:]:
        if not part.startswith("beta="):
            raise ValueError(f"malformed acquisition id: {acq_id!r}")
        beta = float(part[5:])
    if kind in ("ei", "pi"):
        return AcquisitionSpec(kind=kind, incumbent=np.inf)
    if kind in ("lcb", "ucb"):
        return AcquisitionSpec(kind=kind, beta=beta)
    if kind == "ts":
        return AcquisitionSpec(kind="ts")
    raise ValueError(f"unknown acquisition id: {acq_id!r}")


def acq_evaluate(model, spec: AcquisitionSpec, U: np.ndarray):
    """Utility of unit-representation points under the fitted model.

    GP models pair with ei/pi/lcb/ucb; the Horseshoe model pairs with ts only
    (its posterior has no closed-form predictive moments, and the GP exposes
    no coefficient draws).
    """
    if spec.kind == "ts":
        if not isinstance(model, HorseshoeModel):
            raise IncompatibilityError("ts requires the Horseshoe surrogate")
        if spec.sampled is None:
            raise ValueError("ts spec carries no sampled objective")
        return -spec.sampled.evaluate(U)
    if isinstance(model, HorseshoeModel):
        raise IncompatibilityError(f"{spec.kind} requires a GP surrogate (closed-form moments)")
    if not isinstance(model, GPModel):
        raise TypeError(f"unsupported model type: {type(model).__name__}")
    mu, var = gp_predict(model, U)
    sigma = np.sqrt(np.maximum(var, 0.0))
    if spec.kind == "ei":
        return ei(mu, sigma, spec.incumbent)
    if spec.kind == "pi":
        return pi(mu, sigma, spec.incumbent)
    if spec.kind == "lcb":
        return lcb(mu, sigma, spec.beta)
    return ucb(mu, sigma, spec.beta)
