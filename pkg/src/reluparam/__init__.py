"""Bounded reparameterization and function-space norms of shallow ReLU networks."""
from .counterexamples import (
    DivergenceRow,
    FamilySpec,
    divergence_report,
    lower_bound_any_reparam,
    shrinking_slope_family,
    spike_exponent,
    spike_family,
    staircase_bias_invariance_check,
    staircase_family,
)
from .errors import *  # noqa: F401,F403
from .geometry import (
    Chamber,
    Hyperplane,
    IsolationWitness,
    KinkGroup,
    NeuronClassification,
    affine_range_on_box,
    chamber_of_point,
    check_isolation,
    classify_neurons,
    distinct_kinks,
    enumerate_chambers,
    isolation_points,
    same_kink,
)
from .network import (
    BoxDomain,
    ShallowNet,
    euclid_norm,
    evaluate,
    evaluate_params,
    flatten,
    max_norm,
    neuron_scale,
    param_count,
    permute_neurons,
    random_net,
    unflatten,
)
from .norms import (
    NormReport,
    ball_integral,
    box_double_integral_bound,
    gamma_fn,
    holder_comparison_factor,
    holder_norm_estimate,
    inf_abs_on_set,
    lipnorm,
    lipschitz_seminorm,
    param_lip_upper,
    param_lipnorm_upper,
    sobolev_comparison_factor,
    sobolev_slobodeckij_estimate,
)
from .reparam import (
    Certificate,
    ReparamResult,
    bound_rhs,
    certify,
    chain_constants,
    global_min_box,
    reparameterize,
    verify_equivalence,
)

__version__ = "0.1.0"
