"""Exact finite-group equation solving, wreath products and quotient towers."""
from .groups import (FiniteGroup, GroupError, cyclic, direct_product, from_cayley_table,
                     from_permutations, load_group, semidirect_product, wreath_product)
from .kernels import backend
from .solver import Status, brute_oracle, scan_sys_fin, solvable_in, solve
from .towers import QuotientTower, check_locality, explicit_tower, integer_tower
from .universal import UniversalProblem, compute_X_N
from .words import EquationSystem, Word, evaluate, parse_system, parse_word, prefix_set, system

__version__ = "0.1.0"

__all__ = [
    "EquationSystem", "FiniteGroup", "GroupError", "QuotientTower", "Status",
    "UniversalProblem", "Word", "backend", "brute_oracle", "check_locality",
    "compute_X_N", "cyclic", "direct_product", "evaluate", "explicit_tower",
    "from_cayley_table", "from_permutations", "integer_tower", "load_group",
    "parse_system", "parse_word", "prefix_set", "scan_sys_fin", "semidirect_product",
    "solvable_in", "solve", "system", "wreath_product",
]
