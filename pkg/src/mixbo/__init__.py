"""Mixed-variable and combinatorial Bayesian optimization toolkit.

Build optimizers by combining a surrogate, an acquisition, an acquisition
optimizer, and an optional trust region; run them through a suggest/observe
loop; benchmark grids of them with rank-based statistics.  Everything is
deterministic per seed and minimizes by convention.
"""

from .acq_optimizers import (
    AcqOptConfig,
    make_acq_opt_config,
    optimize_acq,
    optimize_ga,
    optimize_is_hc_gd,
    optimize_is_mab_gd,
    optimize_ls,
    optimize_sa,
    tr_filter,
)
from .acquisitions import (
    AcquisitionSpec,
    IncompatibilityError,
    acq_evaluate,
    ei,
    lcb,
    parse_acq_id,
    pi,
    ucb,
)
from .engine import (
    BaselineConfig,
    BaselineOptimizer,
    BayesOpt,
    BoConfig,
    ProtocolError,
    baseline_build,
    bo_build,
    build_optimizer,
    check_compatibility,
    list_optimizer_ids,
    optimizer_display_id,
)
from .space import (
    RejectionCapError,
    SearchSpace,
    VariableSpec,
    hamming_distance,
    inverse_transform,
    is_valid_point,
    make_space,
    register_constraint,
    sample_uniform,
    space_from_dict,
    space_to_dict,
    transform,
    validate_point,
)
from .surrogates import (
    FitError,
    GPModel,
    HorseshoeModel,
    gp_fit,
    gp_predict,
    heldout_log_likelihood,
    hs_fit,
    hs_sample_objective,
    make_kernel,
)
from .tasks import (
    Task,
    get_task,
    list_task_ids,
    make_ackley20,
    make_ackley53,
    make_pest_control,
    make_sfu_task,
)
from .trust_region import (
    RestartSignal,
    TrustRegionState,
    in_trust_region,
    tr_init,
    tr_recenter,
    tr_restart,
    tr_update,
)

__version__ = "0.1.0"
