"""Exact products of bricks in finite Heisenberg groups."""

from .errors import ClaimFailure, ComputationError, HeisenbrickError, InputError, ResourceError
from .fp import (
    PrimeField,
    ResidueSet,
    Spectrum,
    cyclic_convolve,
    dft_indicator,
    dilate,
    prime_field,
    product_count_table,
    sumset,
)
from .heisenberg import (
    CoordinateSubgroup,
    ElementSet,
    HeisElement,
    brute_product_set,
    commutator,
    conjugate_set,
    coordinate_subgroup_elements,
    inv,
    is_subgroup,
    lemma1_check,
    mul,
    nilpotency_check,
)
from .brick import Brick, FiberedProductSet, product_fibered, square_fibered
from .sumprod import SumProdInstance, covers_field, f_spectrum_checks, normalized_f, solution_profile
from .structure import (
    brute_stabilizer,
    choose_popular_shift,
    count_center_cosets,
    good_pair_set_E,
    prop2_construct,
    prop2_verify,
    small_period_example,
    structured_period,
    th13_analysis,
    th1_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Brick",
    "brute_product_set",
    "brute_stabilizer",
    "choose_popular_shift",
    "ClaimFailure",
    "commutator",
    "ComputationError",
    "conjugate_set",
    "coordinate_subgroup_elements",
    "CoordinateSubgroup",
    "count_center_cosets",
    "covers_field",
    "cyclic_convolve",
    "dft_indicator",
    "dilate",
    "ElementSet",
    "f_spectrum_checks",
    "FiberedProductSet",
    "good_pair_set_E",
    "HeisElement",
    "HeisenbrickError",
    "InputError",
    "inv",
    "is_subgroup",
    "lemma1_check",
    "mul",
    "nilpotency_check",
    "normalized_f",
    "prime_field",
    "PrimeField",
    "product_count_table",
    "product_fibered",
    "prop2_construct",
    "prop2_verify",
    "ResidueSet",
    "ResourceError",
    "small_period_example",
    "solution_profile",
    "Spectrum",
    "square_fibered",
    "structured_period",
    "SumProdInstance",
    "sumset",
    "th13_analysis",
    "th1_certificate",
]
