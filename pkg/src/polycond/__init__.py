"""Condition numbers and smallness functionals of random polynomial systems.

Dense homogeneous d-linear systems of m = n - 1 forms in n variables:
evaluation and derivative kernels, random ensembles with splittable
seeding, the joint smallness functional L and its minimization over
orthonormal pairs, condition numbers, lattice-distance and small-ball
diagnostics, compressibility geometry, multilinear sup norms, and a
reproducible Monte Carlo harness with CSV/JSON persistence.
"""

from .condition import (
    CondReport,
    LMinResult,
    UnitPair,
    cond_at,
    growth_check,
    l_min,
    l_pair,
    plant_double_root,
    sigma_min_tangent,
)
from .diophantine import (
    DEFAULT_ALPHA,
    AlphaPolicy,
    LcdQuery,
    LcdResult,
    dist_to_lattice,
    lcd_estimate,
    lift_monomial,
    small_ball_estimate,
    tensorization_check,
)
from .ensembles import (
    DistributionSpec,
    GammaReport,
    SeedPolicy,
    gamma_control_estimate,
    kss_monomial_gaussians,
    make_kss,
    sample_system,
)
from .errors import (
    ConfigError,
    ConstructionError,
    ContractViolation,
    InvariantViolation,
    PolycondError,
    PreconditionError,
    ShapeError,
)
from .geometry import (
    KAPPA0_DEFAULT,
    CompressibilityParams,
    CompressibilityReport,
    classify,
    dist_to_sparse,
    spread_set,
)
from .harness import (
    COMPRESSIBLE_COLUMNS,
    EVENT_COLUMNS,
    EXAMPLE1_COLUMNS,
    GRID_COLUMNS,
    OPNORM_COLUMNS,
    ZERO_TOL,
    CompressibleInfimum,
    EventEstimates,
    Example1Result,
    ExperimentConfig,
    TailCurve,
    read_outputs,
    run_compressible_infimum,
    run_corollary_events,
    run_example1,
    run_tail,
    write_outputs,
)
from .io import (
    load_system,
    load_tensor,
    load_tensor_json,
    save_system,
    save_tensor,
    save_tensor_json,
    tensor_from_json,
    tensor_to_json,
)
from .opnorm import OpnormResult, OpnormScaling, opnorm, opnorm_scaling
from .stats import Z95, GridEstimate, wilson_interval
from .systems import (
    ALLOCATION_CAP,
    CoefficientTensor,
    MonomialForm,
    PolynomialSystem,
    RestrictedJacobian,
    SystemShape,
    TangentFrame,
    WeylNorm,
    derivative_contract,
    evaluate,
    jacobian,
    jacobian_tangent,
    monomial_forms,
    symmetrize,
    weyl_norm,
)

__all__ = [
    "ALLOCATION_CAP",
    "AlphaPolicy",
    "COMPRESSIBLE_COLUMNS",
    "EVENT_COLUMNS",
    "EXAMPLE1_COLUMNS",
    "GRID_COLUMNS",
    "OPNORM_COLUMNS",
    "CoefficientTensor",
    "CompressibilityParams",
    "CompressibilityReport",
    "CompressibleInfimum",
    "CondReport",
    "ConfigError",
    "ConstructionError",
    "ContractViolation",
    "DEFAULT_ALPHA",
    "DistributionSpec",
    "EventEstimates",
    "Example1Result",
    "ExperimentConfig",
    "GammaReport",
    "GridEstimate",
    "InvariantViolation",
    "KAPPA0_DEFAULT",
    "LMinResult",
    "LcdQuery",
    "LcdResult",
    "MonomialForm",
    "OpnormResult",
    "OpnormScaling",
    "PolycondError",
    "PolynomialSystem",
    "PreconditionError",
    "RestrictedJacobian",
    "SeedPolicy",
    "ShapeError",
    "SystemShape",
    "TailCurve",
    "TangentFrame",
    "UnitPair",
    "WeylNorm",
    "Z95",
    "ZERO_TOL",
    "classify",
    "cond_at",
    "derivative_contract",
    "dist_to_lattice",
    "dist_to_sparse",
    "evaluate",
    "gamma_control_estimate",
    "growth_check",
    "jacobian",
    "jacobian_tangent",
    "kss_monomial_gaussians",
    "l_min",
    "l_pair",
    "lcd_estimate",
    "lift_monomial",
    "load_system",
    "load_tensor",
    "load_tensor_json",
    "make_kss",
    "monomial_forms",
    "opnorm",
    "opnorm_scaling",
    "plant_double_root",
    "read_outputs",
    "run_compressible_infimum",
    "run_corollary_events",
    "run_example1",
    "run_tail",
    "sample_system",
    "save_system",
    "save_tensor",
    "save_tensor_json",
    "sigma_min_tangent",
    "small_ball_estimate",
    "spread_set",
    "symmetrize",
    "tensor_from_json",
    "tensor_to_json",
    "tensorization_check",
    "weyl_norm",
    "wilson_interval",
    "write_outputs",
]
