"""Deterministic classical algorithms for the hidden subgroup problem over small finite groups."""

from .algorithms import (
    AlgorithmReport,
    detect_abelian,
    detect_general,
    find_abelian_subgroup,
    find_collision,
    find_new_collision,
    find_subgroup,
    randomized_baseline,
    simon_solve,
)
from .genpair import (
    GeneratingPair,
    abelian_pair,
    best_pair,
    coset_pair,
    cyclic_pair,
    odd_prime_power_pair,
    product_pair,
    random_pair,
    verify_pair,
)
from .groups import FiniteGroup, direct_product, make_abelian_product, make_builtin, make_cayley, parse_group
from .oracle import HiddenSubgroupOracle, QuotientOracle, make_hiding_oracle, make_quotient_oracle
from .subgroups import (
    Subgroup,
    enumerate_subgroups,
    generated_subgroup,
    left_cosets,
    quotient_group,
    right_cosets,
    set_product,
)

__version__ = "0.1.0"
