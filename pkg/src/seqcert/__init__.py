"""Certified convexity and optimality checks on sequence spaces.

The package decides, with graded certificates, whether an anchor point
minimizes a convex function built from a small expression grammar, whether
a dual sequence is a subgradient, whether the function is Gateaux
differentiable at the anchor, and whether a KKT system certifies a
constrained minimum.  Everything runs through two roads: exact symbolic
tails where the grammar allows it, and certified monotone difference
quotients where it does not.  A finite-dimensional reduction oracle
cross-checks the whole pipeline by brute force.
"""

from .certify import (
    Certificate,
    CertifyOptions,
    DiagonalFamily,
    GateauxDerivative,
    Grade,
    GradeKind,
    ScaledFamily,
    SetDescriptor,
    SetKind,
    Verdict,
    anchored_truncation,
    certify_min,
    check_psc,
    check_psc_numeric,
    check_qualification,
    coordinate_interval,
    default_psc_probes,
    family_from_json,
    family_to_json,
    gateaux_detect,
    kkt_certify,
    series_differentiate,
    set_from_json,
    set_membership,
    set_to_json,
    subgradient_test,
)
from .derivative import DerivOptions, DirDerivResult, dir_deriv, dir_deriv_profile
from .errors import (
    DomainLimited,
    DomainViolation,
    InfeasiblePoint,
    MaxSweeps,
    NegativeScale,
    NoMajorant,
    NonConvergentPairing,
    NonConvexBehavior,
    PartialNotDifferentiable,
    ScenarioError,
    SeqcertError,
    Unbounded,
)
from .funcs import (
    Constant,
    DirStatus,
    DirValue,
    FunctionExpr,
    LimsupSeminorm,
    LinearFunctional,
    ScalarConvex,
    ScalarKind,
    Scale,
    SeparableSeries,
    Sum,
    analytic_dir_deriv,
    delta_along,
    delta_along_basis,
    evaluate,
    function_from_json,
    function_to_json,
    scalar_from_json,
    scalar_to_json,
)
from .reduce import (
    OracleOptions,
    ReducedProblem,
    build_reduced,
    grad_reduced,
    minimize_reduced,
)
from .sampling import (
    random_direction,
    random_dual,
    random_function,
    random_point,
    rng_from_seed,
)
from .seqspace import (
    DualPoint,
    Point,
    SeriesValue,
    SpaceDescriptor,
    SpaceKind,
    TailKind,
    TailRule,
    basis_vector,
    dual_basis_vector,
    dual_from_json,
    dual_to_json,
    ell1_norm,
    in_ell1,
    in_ellinf,
    in_space,
    limsup_abs,
    pair,
    point_add,
    point_axpy,
    point_from_json,
    point_scale,
    point_sub,
    point_to_json,
    points_equal,
    project,
    space_from_json,
    space_to_json,
    sup_abs,
)
from .symseq import SymSeq, SymTerm, exact_sqrt

__all__ = [
    "Certificate",
    "CertifyOptions",
    "Constant",
    "DerivOptions",
    "DiagonalFamily",
    "DirDerivResult",
    "DirStatus",
    "DirValue",
    "DomainLimited",
    "DomainViolation",
    "DualPoint",
    "FunctionExpr",
    "GateauxDerivative",
    "Grade",
    "GradeKind",
    "InfeasiblePoint",
    "LimsupSeminorm",
    "LinearFunctional",
    "MaxSweeps",
    "NegativeScale",
    "NoMajorant",
    "NonConvergentPairing",
    "NonConvexBehavior",
    "OracleOptions",
    "PartialNotDifferentiable",
    "Point",
    "ReducedProblem",
    "ScalarConvex",
    "ScalarKind",
    "Scale",
    "ScaledFamily",
    "ScenarioError",
    "SeparableSeries",
    "SeqcertError",
    "SeriesValue",
    "SetDescriptor",
    "SetKind",
    "SpaceDescriptor",
    "SpaceKind",
    "Sum",
    "SymSeq",
    "SymTerm",
    "TailKind",
    "TailRule",
    "Unbounded",
    "Verdict",
    "analytic_dir_deriv",
    "anchored_truncation",
    "basis_vector",
    "build_reduced",
    "certify_min",
    "check_psc",
    "check_psc_numeric",
    "check_qualification",
    "coordinate_interval",
    "default_psc_probes",
    "delta_along",
    "delta_along_basis",
    "dir_deriv",
    "dir_deriv_profile",
    "dual_basis_vector",
    "dual_from_json",
    "dual_to_json",
    "ell1_norm",
    "evaluate",
    "exact_sqrt",
    "family_from_json",
    "family_to_json",
    "function_from_json",
    "function_to_json",
    "gateaux_detect",
    "grad_reduced",
    "in_ell1",
    "in_ellinf",
    "in_space",
    "kkt_certify",
    "limsup_abs",
    "minimize_reduced",
    "pair",
    "point_add",
    "point_axpy",
    "point_from_json",
    "point_scale",
    "point_sub",
    "point_to_json",
    "points_equal",
    "project",
    "random_direction",
    "random_dual",
    "random_function",
    "random_point",
    "rng_from_seed",
    "scalar_from_json",
    "scalar_to_json",
    "series_differentiate",
    "set_from_json",
    "set_membership",
    "set_to_json",
    "space_from_json",
    "space_to_json",
    "subgradient_test",
    "sup_abs",
]
