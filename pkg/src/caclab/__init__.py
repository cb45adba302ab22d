"""Finite, executable chain-antichain combinatorics.

Posets, the chain-antichain problem family, reductions between its members,
reduction games, forcing conditions for stable posets and extension trees.
"""
from .errors import CacLabError
from .poset import (
    Behavior,
    FinitePoset,
    SolutionKind,
    SolutionSet,
    StableAnnotation,
    TypeTag,
    classify_stability,
    dual_order,
    is_antichain,
    is_chain,
    is_omega_ordered,
    restrict,
    validate_poset,
)
from .problems import (
    ProblemInstance,
    ProblemKind,
    SizePolicy,
    brute_force_solve,
    validate_instance,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "Behavior", "CacLabError", "FinitePoset", "ProblemInstance", "ProblemKind", "SizePolicy",
    "SolutionKind", "SolutionSet", "StableAnnotation", "TypeTag", "brute_force_solve",
    "classify_stability", "dual_order", "is_antichain", "is_chain", "is_omega_ordered",
    "restrict", "validate_instance", "validate_poset", "verify_solution",
]
