"""Numerical laboratory for degenerate and singular Monge-Ampere problems."""

__version__ = "0.1.0"

from .errors import (
    MALabError,
    ParameterError,
    RegimeError,
    DomainMembershipError,
    DegenerateFrameError,
    DiscretizationError,
    IterationLimitError,
    ShootingBracketError,
    WindowError,
    UncertifiedBarrierError,
)
from .geometry import (
    ConvexDomain,
    LocalFrame,
    AEtaCertificate,
    SphereCertificate,
    distance_to_boundary,
    nearest_boundary_point,
    local_frame_at,
    certify_a_eta,
    certify_a_eta_domain,
    sphere_conditions,
)
from .rhs import (
    PowerLawRHS,
    RegularizedRHS,
    BoundCheck,
    StructureReport,
    evaluate,
    verify_structure,
)
from .barriers import (
    EdgeBarrier,
    CuspBarrier,
    SphereBarrier,
    BarrierEval,
    BarrierCertificate,
    FDCheckReport,
    edge_barrier_params,
    cusp_barrier_params,
    sphere_barrier_params,
    edge_barrier_eval,
    cusp_barrier_eval,
    sphere_barrier_eval,
    verify_subsolution,
    hessian_fd_check,
    edge_capped_beta,
    cusp_capped_beta,
    capped_rhs_coefficient,
    cusp_combined_exponent,
    cusp_margin_sigma,
    cusp_delta_condition,
    cusp_regime_threshold,
    sphere_sub_exponents,
)

__all__ = [
    "__version__",
    "MALabError",
    "ParameterError",
    "RegimeError",
    "DomainMembershipError",
    "DegenerateFrameError",
    "DiscretizationError",
    "IterationLimitError",
    "ShootingBracketError",
    "WindowError",
    "UncertifiedBarrierError",
    "ConvexDomain",
    "LocalFrame",
    "AEtaCertificate",
    "SphereCertificate",
    "distance_to_boundary",
    "nearest_boundary_point",
    "local_frame_at",
    "certify_a_eta",
    "certify_a_eta_domain",
    "sphere_conditions",
    "PowerLawRHS",
    "RegularizedRHS",
    "BoundCheck",
    "StructureReport",
    "evaluate",
    "verify_structure",
    "EdgeBarrier",
    "CuspBarrier",
    "SphereBarrier",
    "BarrierEval",
    "BarrierCertificate",
    "FDCheckReport",
    "edge_barrier_params",
    "cusp_barrier_params",
    "sphere_barrier_params",
    "edge_barrier_eval",
    "cusp_barrier_eval",
    "sphere_barrier_eval",
    "verify_subsolution",
    "hessian_fd_check",
    "edge_capped_beta",
    "cusp_capped_beta",
    "capped_rhs_coefficient",
    "cusp_combined_exponent",
    "cusp_margin_sigma",
    "cusp_delta_condition",
    "cusp_regime_threshold",
    "sphere_sub_exponents",
]
