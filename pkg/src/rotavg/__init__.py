"""Rotation averaging on SO(3) via dissipative flow on the unit-quaternion sphere."""

from .control import (
    AmbientProblem,
    ScalarField,
    T_matrix_sphere,
    apply_T_sphere,
    dissipation_rate,
    gramian,
    unit_sphere_problem,
    v0,
)
from .costs import (
    EPS_DOM,
    CostModel,
    DomainError,
    DomainGuard,
    NonDifferentiable,
    so3_log,
)
from .geometry import (
    SampleSet,
    canonicalize_sign,
    covering_map,
    delta_skew,
    dist_d1,
    dist_d2,
    dist_d3,
    dp_apply,
    normalize,
    quat_from_rotation,
    rotation_angle,
)
from .solvers import (
    AmbiguousMean,
    CriticalPoint,
    DomainBreach,
    FlowConfig,
    MaxIters,
    classify,
    eigen_oracle_l2,
    flow_descend,
    multistart,
    random_unit_quaternion,
)
from .sweep import (
    CriticalRep,
    EvenPolynomial,
    SweepRecord,
    build_samples,
    critical_sets,
    emit_csv,
    parse_csv,
    positive_roots,
    q2_coeffs,
    q4_coeffs,
    root_count_transitions,
    theta_min_curve,
    tie_locations,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientProblem",
    "ScalarField",
    "T_matrix_sphere",
    "apply_T_sphere",
    "dissipation_rate",
    "gramian",
    "unit_sphere_problem",
    "v0",
    "EPS_DOM",
    "CostModel",
    "DomainError",
    "DomainGuard",
    "NonDifferentiable",
    "so3_log",
    "SampleSet",
    "canonicalize_sign",
    "covering_map",
    "delta_skew",
    "dist_d1",
    "dist_d2",
    "dist_d3",
    "dp_apply",
    "normalize",
    "quat_from_rotation",
    "rotation_angle",
    "AmbiguousMean",
    "CriticalPoint",
    "DomainBreach",
    "FlowConfig",
    "MaxIters",
    "classify",
    "eigen_oracle_l2",
    "flow_descend",
    "multistart",
    "random_unit_quaternion",
    "CriticalRep",
    "EvenPolynomial",
    "SweepRecord",
    "build_samples",
    "critical_sets",
    "emit_csv",
    "parse_csv",
    "positive_roots",
    "q2_coeffs",
    "q4_coeffs",
    "root_count_transitions",
    "theta_min_curve",
    "tie_locations",
    "__version__",
]
