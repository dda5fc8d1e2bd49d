"""Probabilistic surrogate models: exact GP regression over mixed-space
kernels, and a sparse Horseshoe linear model for Thompson sampling."""

from .gp import (
    FitError,
    GPModel,
    gp_fit,
    gp_fit_fixed,
    gp_predict,
    heldout_log_likelihood,
    nll_value_and_grad,
    posterior_from_gram,
)
from .horseshoe import (
    HorseshoeModel,
    SampledObjective,
    feature_index,
    hs_features,
    hs_fit,
    hs_sample_objective,
)
from .kernels import (
    HEDCore,
    MaternCore,
    MixtureKernel,
    OverlapCore,
    StandaloneKernel,
    TOCore,
    hed_embedding,
    kernel_hed,
    kernel_matern52,
    kernel_mixture,
    kernel_overlap,
    kernel_transformed_overlap,
    make_kernel,
)

__all__ = [
    "FitError",
    "GPModel",
    "gp_fit",
    "gp_fit_fixed",
    "gp_predict",
    "heldout_log_likelihood",
    "nll_value_and_grad",
    "posterior_from_gram",
    "HorseshoeModel",
    "SampledObjective",
    "feature_index",
    "hs_features",
    "hs_fit",
    "hs_sample_objective",
    "HEDCore",
    "MaternCore",
    "MixtureKernel",
    "OverlapCore",
    "StandaloneKernel",
    "TOCore",
    "hed_embedding",
    "kernel_hed",
    "kernel_matern52",
    "kernel_mixture",
    "kernel_overlap",
    "kernel_transformed_overlap",
    "make_kernel",
]
