"""chowkit: divisors, Picard and Chow groups of one-dimensional orders.

Quadratic fields are handled fully automatically (splitting, class groups
via binary quadratic forms, principal ideal tests, fundamental units).
Fields of higher degree enter through declared splitting data files, which
carry exactly the information the group-theoretic machinery consumes.
"""

from .abgroup import (
    AbelianGroup,
    GroupElement,
    IntMatrix,
    bezout_gcd,
    element_order,
    member,
    quotient,
    smith_normal_form,
    solve_combination,
    subgroup_quotient,
)
from .quadfield import (
    PrimePlace,
    QElement,
    QIdeal,
    QuadField,
    class_group,
    element_divisor,
    fundamental_unit,
    ideal_class,
    ideal_mul,
    ideal_norm,
    is_principal,
    make_field,
    ord_at,
    prime_to_ideal,
    principal_ideal,
    residue_unit_cardinality,
    splitting,
)
from .orders import (
    Divisor,
    NonInvertiblePrime,
    OrderData,
    conductor_test,
    div_over_order,
    divisor_kernel_witness,
    is_conductor_ideal,
    kernel_generators,
    local_chow,
    noninvertible_primes,
    order_from_conductor,
    order_from_ideal,
    prop_fix_report,
    pushforward,
)
from .chow import (
    ChowPresentation,
    PicReport,
    chow_group,
    exact_sequence_data,
    find_trivial_chow_conductor,
    pic_cardinality,
    pic_chow_report,
    principal_divisor_test,
)
from .declared import DeclaredField, declared_order, parse_declared, serialize_declared
from .errors import (
    BackendError,
    ChowkitError,
    DeclaredDataError,
    FieldInputError,
    NotConductorIdealError,
    PlaceResolutionError,
    SearchBoundExceeded,
    UnsupportedOrderError,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "GroupElement",
    "IntMatrix",
    "bezout_gcd",
    "element_order",
    "member",
    "quotient",
    "smith_normal_form",
    "solve_combination",
    "subgroup_quotient",
    "PrimePlace",
    "QElement",
    "QIdeal",
    "QuadField",
    "class_group",
    "element_divisor",
    "fundamental_unit",
    "ideal_class",
    "ideal_mul",
    "ideal_norm",
    "is_principal",
    "make_field",
    "ord_at",
    "prime_to_ideal",
    "principal_ideal",
    "residue_unit_cardinality",
    "splitting",
    "Divisor",
    "NonInvertiblePrime",
    "OrderData",
    "conductor_test",
    "div_over_order",
    "divisor_kernel_witness",
    "is_conductor_ideal",
    "kernel_generators",
    "local_chow",
    "noninvertible_primes",
    "order_from_conductor",
    "order_from_ideal",
    "prop_fix_report",
    "pushforward",
    "ChowPresentation",
    "PicReport",
    "chow_group",
    "exact_sequence_data",
    "find_trivial_chow_conductor",
    "pic_cardinality",
    "pic_chow_report",
    "principal_divisor_test",
    "DeclaredField",
    "declared_order",
    "parse_declared",
    "serialize_declared",
    "BackendError",
    "ChowkitError",
    "DeclaredDataError",
    "FieldInputError",
    "NotConductorIdealError",
    "PlaceResolutionError",
    "SearchBoundExceeded",
    "UnsupportedOrderError",
]
