"""Bounds on rate-distortion regions for multiterminal source coding.

The package computes, on finite alphabets, the constraint sets of the
Berger-Tung inner and outer bounds and of the improved outer bound driven by
a coupled conditional-independence variable, together with contrapolymatroid
vertices, Slepian-Wolf and Berger-Yeung bounds, a desk-scale test-channel
optimizer, and exact closed forms for the binary erasure and Gaussian CEO
problems (including the constructions showing the classical outer bound is
loose in both).  All information quantities are in nats.
"""

from .errors import (
    AlphabetMismatchError,
    InfeasibleError,
    InvalidDistributionError,
    MarkovCheckError,
    MtscError,
    SupermodularityError,
    VariableError,
)
from .prob import (
    Channel,
    JointPmf,
    binary_entropy,
    conditional_mutual_information,
    entropy,
    mutual_information,
)
from .model import (
    AuxSystem,
    CasebookInstance,
    MarkovReport,
    SourceModel,
    XChannel,
    build_full_joint,
    casebook,
    check_chi,
    check_gamma_class,
    chi_residual,
    expected_distortion,
    expected_distortions,
    gamma_class_residuals,
    x_channel_from_sources,
    x_channel_full_observation,
    x_channel_trivial,
)
from .regions import (
    OptimizeResult,
    inner_bound_cardinalities,
    RatePoint,
    RegionConstraints,
    berger_yeung_bounds,
    bt_inner_constraints,
    bt_outer_constraints,
    check_supermodular,
    contrapolymatroid_vertex,
    new_outer_constraints,
    optimize_bt_inner_sum_rate,
    slepian_wolf_bounds,
    subset_label,
)
from .erasure_ceo import (
    ErasureCounterexample,
    ErasureParams,
    RootShapeReport,
    ShapeReport,
    erasure_bt_counterexample,
    erasure_sum_rate,
    g_function,
    g_root_shape_report,
    g_shape_report,
    noise_info_minimum,
    sum_rate_curve,
    sum_rate_curve_csv,
)
from .gaussian_ceo import (
    GaussianCounterexample,
    GaussianParams,
    gaussian_bt_counterexample,
    gaussian_min_sum_rate,
    gaussian_region_contains,
    oohama_gap,
    search_bt_counterexample,
)

__version__ = "0.1.0"

__all__ = [
    "AlphabetMismatchError",
    "AuxSystem",
    "CasebookInstance",
    "Channel",
    "ErasureCounterexample",
    "ErasureParams",
    "GaussianCounterexample",
    "GaussianParams",
    "InfeasibleError",
    "InvalidDistributionError",
    "JointPmf",
    "MarkovCheckError",
    "MarkovReport",
    "MtscError",
    "OptimizeResult",
    "RatePoint",
    "RegionConstraints",
    "RootShapeReport",
    "ShapeReport",
    "SourceModel",
    "SupermodularityError",
    "VariableError",
    "XChannel",
    "berger_yeung_bounds",
    "binary_entropy",
    "bt_inner_constraints",
    "bt_outer_constraints",
    "build_full_joint",
    "casebook",
    "check_chi",
    "check_gamma_class",
    "check_supermodular",
    "chi_residual",
    "conditional_mutual_information",
    "contrapolymatroid_vertex",
    "entropy",
    "erasure_bt_counterexample",
    "erasure_sum_rate",
    "expected_distortion",
    "expected_distortions",
    "g_function",
    "g_root_shape_report",
    "g_shape_report",
    "gamma_class_residuals",
    "gaussian_bt_counterexample",
    "gaussian_min_sum_rate",
    "gaussian_region_contains",
    "inner_bound_cardinalities",
    "mutual_information",
    "new_outer_constraints",
    "noise_info_minimum",
    "oohama_gap",
    "optimize_bt_inner_sum_rate",
    "search_bt_counterexample",
    "slepian_wolf_bounds",
    "subset_label",
    "sum_rate_curve",
    "sum_rate_curve_csv",
    "x_channel_from_sources",
    "x_channel_full_observation",
    "x_channel_trivial",
]
