"""PID gain regions, Lyapunov certificates, simulation and falsification.

Thin re-export of the compiled core. Matrices cross the boundary as nested
lists (row-major); vectors as flat lists.
"""

from ._core import (
    CertMode,
    Certificate,
    CertificateCheck,
    CertificateError,
    ClassBounds,
    Counterexample,
    CubicPoly,
    Decomposition,
    DimensionError,
    DomainError,
    EvaluationError,
    GainTriple,
    InequalityMargin,
    Integrator,
    MembershipReport,
    NotConservativeError,
    NotHessianFieldError,
    NumericError,
    Plant,
    RayMonotonicityReport,
    RegionError,
    RegionVerdict,
    ScaledGains,
    SimConfig,
    StiffnessError,
    Trajectory,
    TransformedState,
    VdotSeries,
    Verdict,
    build_certificate,
    check_P,
    check_membership,
    check_ray_monotonicity,
    classify,
    cubic_roots,
    decompose_g,
    eval_H,
    eval_Hpsi,
    eval_V,
    falsifier_config,
    find_counterexample,
    hurwitz_cubic,
    in_omega1,
    in_omega2,
    jacobians,
    kbar,
    make_linear_plant,
    make_sinusoidal_plant,
    make_worst_case_plant,
    q_min_eig,
    scale_at_lower,
    scale_gains,
    simulate,
    transform_state,
    v_series,
    vdot_along,
    worst_case_poly,
    zeta,
)

__all__ = [
    "CertMode",
    "Certificate",
    "CertificateCheck",
    "CertificateError",
    "ClassBounds",
    "Counterexample",
    "CubicPoly",
    "Decomposition",
    "DimensionError",
    "DomainError",
    "EvaluationError",
    "GainTriple",
    "InequalityMargin",
    "Integrator",
    "MembershipReport",
    "NotConservativeError",
    "NotHessianFieldError",
    "NumericError",
    "Plant",
    "RayMonotonicityReport",
    "RegionError",
    "RegionVerdict",
    "ScaledGains",
    "SimConfig",
    "StiffnessError",
    "Trajectory",
    "TransformedState",
    "VdotSeries",
    "Verdict",
    "build_certificate",
    "check_P",
    "check_membership",
    "check_ray_monotonicity",
    "classify",
    "cubic_roots",
    "decompose_g",
    "eval_H",
    "eval_Hpsi",
    "eval_V",
    "falsifier_config",
    "find_counterexample",
    "hurwitz_cubic",
    "in_omega1",
    "in_omega2",
    "jacobians",
    "kbar",
    "make_linear_plant",
    "make_sinusoidal_plant",
    "make_worst_case_plant",
    "q_min_eig",
    "scale_at_lower",
    "scale_gains",
    "simulate",
    "transform_state",
    "v_series",
    "vdot_along",
    "worst_case_poly",
    "zeta",
]
