"""Simulator and verification workbench for signal planting by multiple
collectives in classification."""

from .bounds import (
    AS_PRINTED,
    TIGHTENED,
    BoundReport,
    SolveResult,
    bound_report,
    critical_alignment,
    critical_mass,
    fl_bound,
    fo_bound,
    global_min_bound,
    global_weighted_bound,
)
from .classifier import (
    AgainstTarget,
    Classifier,
    EpsilonBudget,
    MinOfMins,
    MinWeighted,
    adversarial,
    bayes,
    enumerate_suboptimal,
    feasible_labels,
    flip_radius,
    flip_radius_table,
    is_epsilon_suboptimal,
    score_decomposition,
    sufficient_condition_holds,
)
from .collectives import (
    CollectiveSpec,
    Ensemble,
    SignalSet,
    Strategy,
    actioned_distribution,
    mixture,
    signal_set,
)
from .harness import (
    EmpiricalRunRecord,
    RunRecord,
    SweepGrid,
    VerificationReport,
    empirical_sample_run,
    generate_instance,
    run_scenario,
    sweep,
    verify_bounds,
)
from .metrics import (
    InstanceParams,
    SuccessReport,
    compute_beta,
    compute_delta,
    compute_global_xi,
    compute_p,
    compute_xi_c,
    global_min,
    global_weighted,
    instance_params,
    per_collective_success,
    success_report,
)
from .scenario import Scenario, load_scenario, loads_scenario, save_scenario
from .space import (
    ConditionalTable,
    DataSpace,
    FeatureDistribution,
    FeatureKernel,
    JointDistribution,
    build_joint,
    conditional_y_given_x,
    marginal_x,
    pushforward,
    tv_distance,
)

__version__ = "0.1.0"
