"""Numerical experiments around prime error terms in progressions whose
moduli are products of Gaussian-prime norms.

The package builds every quantity at desk scale: sieve arithmetic,
Dirichlet characters and Gauss sums, Vaughan's identity, large-sieve
style quantities over boxes of polynomial moduli, error sweeps for the
weighted analogue of the classical averaged equidistribution sum, and
density sums over Gaussian primes.
"""

from .bv_error import (
    ModulusErrorRecord,
    WeightedBvReport,
    classical_bv_sum,
    error_sides,
    psi_progression,
    sweep_modulus,
    weighted_gaussian_bv_sum,
)
from .characters import (
    DirichletCharacter,
    character_context,
    characters_mod,
    conductor,
    gauss_sum,
    is_primitive,
    primitive_characters,
    psi_chi,
    psi_prime_chi,
)
from .density import (
    DensityReport,
    FiCompareResult,
    GeometricDecomposition,
    constant_c,
    density_report,
    density_sum,
    fi_compare,
    geometric_decomposition_check,
    theorem14_condition,
    theta,
)
from .errors import (
    CacheFormatError,
    CapacityError,
    GbvError,
    UnsupportedModulusError,
    ValidationError,
)
from .identities import (
    VaughanDecomposition,
    pv_max_ratio,
    pv_ratio,
    type1_envelope,
    vaughan_decompose,
    verify_vaughan,
)
from .large_sieve import (
    BilinearResult,
    CharBoxResult,
    DeltaTilde,
    TrigSequence,
    bilinear_pair,
    bmvt_lhs,
    char_form_lhs,
    char_identity_chain,
    delta_bound,
    delta_bound_for_spec,
    delta_tilde,
    exp_sum,
    farey_square_sum,
    farey_values,
    random_unit_disk_sequence,
    sigma_quantity,
)
from .moduli import (
    GaussPolySpec,
    QRange,
    box_extremes,
    box_range,
    box_tuple_count,
    eval_poly,
    format_spec_string,
    iter_box,
    parse_spec_string,
    q_range,
    sigma_for_degree,
    sigma_for_spec,
    weight_G,
)
from .parallel import WorkerPool
from .report import ExperimentReport, read_csv_report, write_report
from .sieve import (
    SieveTables,
    build_sieve,
    divisors,
    factorize,
    is_prime,
    lambda_,
    load_cache,
    mobius,
    psi,
    save_cache,
    totient,
    verify_cache,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearResult",
    "CacheFormatError",
    "CapacityError",
    "CharBoxResult",
    "DeltaTilde",
    "DensityReport",
    "DirichletCharacter",
    "ExperimentReport",
    "FiCompareResult",
    "GaussPolySpec",
    "GbvError",
    "GeometricDecomposition",
    "ModulusErrorRecord",
    "QRange",
    "SieveTables",
    "TrigSequence",
    "UnsupportedModulusError",
    "ValidationError",
    "VaughanDecomposition",
    "WeightedBvReport",
    "WorkerPool",
    "bilinear_pair",
    "bmvt_lhs",
    "box_extremes",
    "box_range",
    "box_tuple_count",
    "build_sieve",
    "char_form_lhs",
    "char_identity_chain",
    "character_context",
    "characters_mod",
    "classical_bv_sum",
    "conductor",
    "constant_c",
    "delta_bound",
    "delta_bound_for_spec",
    "delta_tilde",
    "density_report",
    "density_sum",
    "divisors",
    "error_sides",
    "eval_poly",
    "exp_sum",
    "factorize",
    "farey_square_sum",
    "farey_values",
    "fi_compare",
    "format_spec_string",
    "gauss_sum",
    "geometric_decomposition_check",
    "is_prime",
    "is_primitive",
    "iter_box",
    "lambda_",
    "load_cache",
    "mobius",
    "parse_spec_string",
    "primitive_characters",
    "psi",
    "psi_chi",
    "psi_prime_chi",
    "psi_progression",
    "pv_max_ratio",
    "pv_ratio",
    "q_range",
    "random_unit_disk_sequence",
    "read_csv_report",
    "save_cache",
    "sigma_for_degree",
    "sigma_for_spec",
    "sigma_quantity",
    "sweep_modulus",
    "theorem14_condition",
    "theta",
    "totient",
    "type1_envelope",
    "vaughan_decompose",
    "verify_cache",
    "verify_vaughan",
    "weight_G",
    "weighted_gaussian_bv_sum",
    "write_report",
]
