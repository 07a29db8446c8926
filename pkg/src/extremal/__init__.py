"""Exact and seeded checkers for approximation exponents, lattice-flow
excursions, norm-floor criteria, and sublevel goodness of functions."""

from .diophantine import (
    ApproxWitness,
    ExponentEstimate,
    TestNumber,
    best_approx,
    certificate_exponent,
    certificate_to_witness,
    exponent_estimate,
    make_test_number,
    multiplicative_best,
    shell_minima,
    witness_to_flow_time,
)
from .exact import fraction_str, parse_fraction
from .exterior_algebra import (
    MultiVector,
    SubgroupRep,
    c_vector,
    canonical_sign,
    content,
    primitive_part,
    represent_subgroup,
    split_c,
    sup_norm,
    wedge,
    wedge_all,
)
from .extremality_criteria import (
    CriterionParams,
    CriterionReport,
    MeasureEstimate,
    StrongVerdict,
    SubspaceSpec,
    Violation,
    bad_set_measure,
    coefficient_box_min_lhs,
    hyperplane_extremal_evidence,
    line_origin_extremal_evidence,
    sample_wedge_reps,
    scan_extremality_criterion,
    strong_hyperplane_verdict,
)
from .good_functions import (
    DivergenceTable,
    FunctionSpec,
    GoodnessProfile,
    MeasureInterval,
    affine_combination,
    build_cantor_bad,
    demonstrate_not_good,
    evaluate_exact,
    evaluate_interval,
    goodness_profile,
    polynomial,
    sublevel_measure,
    sup_abs_interval,
    sup_of,
)
from .lattice_flow import (
    CertificationError,
    FlowSpec,
    GrowthEstimate,
    LatticeBasis,
    act_flow_unipotent,
    growth_exponent_estimate,
    lll_reduce,
    log_delta_embedded,
    shortest_vector_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
