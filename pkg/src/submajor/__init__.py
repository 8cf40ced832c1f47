"""Relative submajorization of boxes of positive operators, its monotones and
asymptotic spectrum, and the hypothesis-testing quantities derived from them."""

from .errors import DomainError, SolverError
from .boxes import (
    Box,
    box_add,
    box_from_json,
    box_mul,
    box_pow,
    box_to_json,
    classical_box,
    is_classical,
    normalize_check,
    power_universal,
    scalar_box,
    unit_box,
    zero_box,
)
from .monotones import (
    MonotoneIndex,
    MonotoneValue,
    classical_f,
    pinched_bounds,
    sandwiched_divergence,
    sandwiched_f,
)
from .submaj import (
    ChoiMatrix,
    FeasibilityResult,
    apply_choi,
    check_submajorization,
    choi_of,
    classical_submaj_lp,
    upgrade_map,
)
from .asymptotics import (
    AsymptoticDecision,
    ExponentResult,
    StrictCertificate,
    asymptotic_geq,
    exponent_region_check,
    power_universal_exponent,
    strict_certificate,
    strong_converse_exponent,
)
from .hypotest import (
    DiscriminationSpec,
    Test,
    discrimination_feasible,
    map_to_test,
    optimal_type2,
    std_box_power,
    test_to_map,
    tradeoff_curve,
    type1_errors,
    type2_error,
)

__version__ = "0.1.0"

__all__ = [
    "apply_choi",
    "asymptotic_geq",
    "AsymptoticDecision",
    "Box",
    "box_add",
    "box_from_json",
    "box_mul",
    "box_pow",
    "box_to_json",
    "check_submajorization",
    "choi_of",
    "ChoiMatrix",
    "classical_box",
    "classical_f",
    "classical_submaj_lp",
    "discrimination_feasible",
    "DiscriminationSpec",
    "DomainError",
    "exponent_region_check",
    "ExponentResult",
    "FeasibilityResult",
    "is_classical",
    "map_to_test",
    "MonotoneIndex",
    "MonotoneValue",
    "normalize_check",
    "optimal_type2",
    "pinched_bounds",
    "power_universal",
    "power_universal_exponent",
    "sandwiched_divergence",
    "sandwiched_f",
    "scalar_box",
    "SolverError",
    "std_box_power",
    "strict_certificate",
    "StrictCertificate",
    "strong_converse_exponent",
    "Test",
    "test_to_map",
    "tradeoff_curve",
    "type1_errors",
    "type2_error",
    "unit_box",
    "upgrade_map",
    "zero_box",
]
