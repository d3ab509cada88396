"""Relative likelihood on partially ordered worlds.

Lift world orders to sets, audit set relations, realize set relations as
world orders, and decide satisfiability of the likelihood logic built on
the strict lifting.
"""

from .conditionals import best, desugar_arrow_prime, sat_arrow, sat_arrow_best, sat_cond, translate_gg
from .errors import (
    AgreementFailure,
    ForeignWorld,
    InvalidAlgebra,
    InvalidOrder,
    InvalidRelation,
    NotModular,
    NotStrict,
    NotTotalPreorder,
    ParseError,
    RelikError,
    ResourceLimit,
    UnknownProposition,
)
from .formulas import parse_cond, parse_formula, parse_l, parse_prop, to_text
from .lifting import dominates, geq_s, lift_k, succ_prime, succ_s
from .oracle import brute_force_sat
from .preorders import Preorder, StrictOrder, is_modular, is_total, strict_of, total_from_modular
from .prover import SatResult, Verdict, basic_subformulas, check_satisfiable, check_satisfiable_total, closure
from .realization import (
    MinimalPair,
    MPTree,
    Realization,
    agreement,
    enum_mp_trees,
    full_tree,
    mark,
    minimal_pairs,
    realize_partial,
    realize_total,
)
from .relations import FiniteAlgebra, SetRelation, audit, materialize
from .semantics import K, PreferentialStructure, parse_structure, sat, truth_set

__version__ = "0.1.0"

__all__ = [
    "agreement",
    "AgreementFailure",
    "audit",
    "basic_subformulas",
    "best",
    "brute_force_sat",
    "check_satisfiable",
    "check_satisfiable_total",
    "closure",
    "desugar_arrow_prime",
    "dominates",
    "enum_mp_trees",
    "FiniteAlgebra",
    "ForeignWorld",
    "full_tree",
    "geq_s",
    "InvalidAlgebra",
    "InvalidOrder",
    "InvalidRelation",
    "is_modular",
    "is_total",
    "K",
    "lift_k",
    "mark",
    "materialize",
    "minimal_pairs",
    "MinimalPair",
    "MPTree",
    "NotModular",
    "NotStrict",
    "NotTotalPreorder",
    "parse_cond",
    "parse_formula",
    "parse_l",
    "parse_prop",
    "parse_structure",
    "ParseError",
    "PreferentialStructure",
    "Preorder",
    "Realization",
    "realize_partial",
    "realize_total",
    "RelikError",
    "ResourceLimit",
    "sat",
    "sat_arrow",
    "sat_arrow_best",
    "sat_cond",
    "SatResult",
    "SetRelation",
    "strict_of",
    "StrictOrder",
    "succ_prime",
    "succ_s",
    "to_text",
    "total_from_modular",
    "translate_gg",
    "truth_set",
    "UnknownProposition",
    "Verdict",
]
