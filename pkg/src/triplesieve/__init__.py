"""Exact-arithmetic laboratory for thin orbits of Pythagorean triples.

Subgroups of SL(2, Z) act on the triple (x, y, z) = (d^2 - c^2, 2cd,
c^2 + d^2) through their bottom rows.  The package enumerates orbit
balls exactly, verifies local-density and character-sum identities by
brute force over residue grids, runs an almost-prime census over the
hypotenuse, area, and coordinate-product forms, and reproduces the
sieve-theoretic constants (exponents of distribution, saturation
numbers) that govern which forms are provably almost prime.

Everything downstream of enumeration is exact: weights are rationals,
sequence masses are integers over a common denominator, and densities
are Fractions compared with ==.  Floating point appears only in the
analytic-constant routines, which are pinned against closed forms.
"""

__version__ = "0.1.0"

from .gl2 import (
    GEN_L,
    GEN_R,
    Form,
    PythagoreanTriple,
    RationalMatrix3,
    UnimodularMatrix,
    form_value,
    multiply,
    spin,
    sq_norm,
    triple_from_row,
)
from .modular import (
    CosetTable,
    DensityReport,
    ResidueElement,
    bad_modulus_probe,
    beta,
    coset_table,
    eta,
    is_squarefree,
    local_density,
    predicted_density,
    prime_factors,
    project_group,
    sl2_order,
    strong_approx_check,
)
from .groups import (
    BallBudgetError,
    GeneratorSet,
    GrowthEstimate,
    OrbitBall,
    SmoothedWeight,
    coset_counts,
    enumerate_ball,
    estimate_delta,
    generator_text,
    load_generator_file,
    modular_generators,
    parse_generator_text,
    poincare_partial,
    sample_words,
    schottky_generators,
    smoothed_sum,
    word_ball,
)
from .charsums import (
    SumValue,
    coordinate_after,
    count_zero_locus,
    disjointness_check,
    orbit_divisibility_count,
    rho,
    s1,
    s2,
    s3_direct,
    s3_factorization_check,
    s4,
    s4_bound,
    s4_closed_form,
    s5,
    xi,
)
from .census import (
    CensusReport,
    CensusRow,
    Factorization,
    SieveSequence,
    a_q,
    ball_rows,
    build_sequence,
    census,
    census_csv,
    census_summary_json,
    distribution_probe,
    factorize,
    good_moduli,
    primitivity_probe,
    two_path_counts,
)
from .constants import (
    BETA_KAPPA,
    GREAVES_DELTA,
    ExponentSystemReport,
    SaturationRow,
    SieveSpec,
    alpha_min_for_R,
    delta0,
    delta0_quadratic,
    exponent_system_check,
    greaves_threshold,
    m_dhr,
    optimize_m,
    saturation_R,
    saturation_table,
    search_exponent_system,
    table_csv,
    table_json,
    table_text,
)

__all__ = [
    "BETA_KAPPA",
    "BallBudgetError",
    "CensusReport",
    "CensusRow",
    "CosetTable",
    "DensityReport",
    "ExponentSystemReport",
    "Factorization",
    "Form",
    "GEN_L",
    "GEN_R",
    "GREAVES_DELTA",
    "GeneratorSet",
    "GrowthEstimate",
    "OrbitBall",
    "PythagoreanTriple",
    "RationalMatrix3",
    "ResidueElement",
    "SaturationRow",
    "SieveSequence",
    "SieveSpec",
    "SmoothedWeight",
    "SumValue",
    "UnimodularMatrix",
    "a_q",
    "alpha_min_for_R",
    "bad_modulus_probe",
    "ball_rows",
    "beta",
    "build_sequence",
    "census",
    "census_csv",
    "census_summary_json",
    "coordinate_after",
    "coset_counts",
    "coset_table",
    "count_zero_locus",
    "delta0",
    "delta0_quadratic",
    "disjointness_check",
    "distribution_probe",
    "enumerate_ball",
    "estimate_delta",
    "eta",
    "exponent_system_check",
    "factorize",
    "form_value",
    "generator_text",
    "good_moduli",
    "greaves_threshold",
    "is_squarefree",
    "load_generator_file",
    "local_density",
    "m_dhr",
    "modular_generators",
    "multiply",
    "optimize_m",
    "orbit_divisibility_count",
    "parse_generator_text",
    "poincare_partial",
    "predicted_density",
    "prime_factors",
    "primitivity_probe",
    "project_group",
    "rho",
    "s1",
    "s2",
    "s3_direct",
    "s3_factorization_check",
    "s4",
    "s4_bound",
    "s4_closed_form",
    "s5",
    "sample_words",
    "saturation_R",
    "saturation_table",
    "schottky_generators",
    "search_exponent_system",
    "sl2_order",
    "smoothed_sum",
    "spin",
    "sq_norm",
    "strong_approx_check",
    "table_csv",
    "table_json",
    "table_text",
    "triple_from_row",
    "two_path_counts",
    "word_ball",
    "xi",
    "__version__",
]
