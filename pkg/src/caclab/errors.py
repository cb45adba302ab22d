"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the witnesses that
triggered it, so the CLI can turn any failure into a JSON object.
"""
from __future__ import annotations

from typing import Any


class CacLabError(Exception):
    code = "error"

    def __init__(self, message: str = "", **details: Any):
        self.details = details
        super().__init__(message or self.code)

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self), "details": _jsonable(self.details)}


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "value") and not isinstance(value, (int, str)):
        return value.value
    return value


# -- posets -----------------------------------------------------------------

class PosetError(CacLabError):
    code = "poset_error"


class MalformedUniverse(PosetError):
    code = "malformed_universe"


class ForeignElement(PosetError):
    code = "foreign_element"

    def __init__(self, x: int):
        self.x = x
        super().__init__(f"{x} is not in the universe", x=x)


class ReflexivityViolation(PosetError):
    code = "reflexivity_violation"

    def __init__(self, x: int):
        self.x = x
        super().__init__(f"({x}, {x}) missing from relation", x=x)


class AntisymmetryViolation(PosetError):
    code = "antisymmetry_violation"

    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"{x} <= {y} and {y} <= {x} with {x} != {y}", x=x, y=y)


class TransitivityViolation(PosetError):
    code = "transitivity_violation"

    def __init__(self, x: int, y: int, z: int):
        self.x, self.y, self.z = x, y, z
        super().__init__(f"{x} <= {y} <= {z} but not {x} <= {z}", x=x, y=y, z=z)


# -- stability and problem side conditions ----------------------------------

class NotStable(CacLabError):
    code = "not_stable"


class AnnotationIncomplete(NotStable):
    code = "annotation_incomplete"


class BehaviorViolation(NotStable):
    code = "behavior_violation"

    def __init__(self, x: int, y: int, tag: Any = None):
        self.x, self.y = x, y
        super().__init__(f"element {x} breaks its {getattr(tag, 'value', tag)} behavior at {y}",
                         x=x, y=y, tag=tag)


class TypeMismatch(CacLabError):
    code = "type_mismatch"


class NotOmegaOrdered(CacLabError):
    code = "not_omega_ordered"


class TooSmall(CacLabError):
    code = "too_small"


class NotAChain(CacLabError):
    code = "not_a_chain"


class NotAnAntichain(CacLabError):
    code = "not_an_antichain"


class TooLarge(CacLabError):
    code = "too_large"


class SolverFailed(CacLabError):
    code = "solver_failed"


class NotASolution(CacLabError):
    code = "not_a_solution"


# -- games and machines -----------------------------------------------------

class EmptySequence(CacLabError):
    code = "empty_sequence"


class MalformedMove(CacLabError):
    code = "malformed_move"

    def __init__(self, round_no: int, reason: str = ""):
        self.round = round_no
        super().__init__(f"malformed move in round {round_no}: {reason}", round=round_no)


class MachineDiverged(CacLabError):
    code = "machine_diverged"


class UnknownSpec(CacLabError):
    code = "unknown_spec"


class UseConsistencyViolation(CacLabError):
    code = "use_consistency_violation"


class UnsatisfiableSpec(CacLabError):
    code = "unsatisfiable_spec"


# -- forcing conditions -----------------------------------------------------

class ConditionError(CacLabError):
    code = "condition_error"


class NotInitialSegment(ConditionError):
    code = "not_initial_segment"


class IncompleteAssignment(ConditionError):
    code = "incomplete_assignment"


class StabilizationRangeViolation(ConditionError):
    code = "stabilization_range_violation"


class HomogeneityViolation(ConditionError):
    code = "homogeneity_violation"


class _BulletViolation(ConditionError):
    bullet = ""

    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"{self.bullet} bullet fails at x={x}, y={y}", x=x, y=y)


class SBulletViolation(_BulletViolation):
    code = "s_bullet_violation"
    bullet = "S"


class LBulletViolation(_BulletViolation):
    code = "l_bullet_violation"
    bullet = "L"


class SideBulletViolation(_BulletViolation):
    code = "side_bullet_violation"
    bullet = "side"


class IBulletViolation(_BulletViolation):
    code = "i_bullet_violation"
    bullet = "I"


class WrongSide(ConditionError):
    code = "wrong_side"
