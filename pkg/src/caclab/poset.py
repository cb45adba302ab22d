"""Finite partial orders over subsets of the naturals.

Relations are stored fully closed (reflexive and transitive), never as Hasse
covers. ``validate_poset`` rejects a bad relation instead of repairing it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

from .errors import (
    AnnotationIncomplete,
    AntisymmetryViolation,
    BehaviorViolation,
    ForeignElement,
    MalformedUniverse,
    ReflexivityViolation,
    TransitivityViolation,
    TypeMismatch,
)

Pair = tuple[int, int]


class Behavior(str, Enum):
    SMALL = "S"
    LARGE = "L"
    ISOLATED = "I"


class TypeTag(str, Enum):
    SMALL = "small"
    LARGE = "large"

    @property
    def forbidden(self) -> Behavior:
        return Behavior.LARGE if self is TypeTag.SMALL else Behavior.SMALL

    @property
    def side(self) -> frozenset[Behavior]:
        return frozenset(Behavior) - {self.forbidden}


class SolutionKind(str, Enum):
    CHAIN = "chain"
    ANTICHAIN = "antichain"


@dataclass(frozen=True)
class FinitePoset:
    """A finite universe of naturals with a closed order relation.

    Construct through :func:`validate_poset` unless the relation is known to be
    a partial order already.
    """

    universe: tuple[int, ...]
    relation: frozenset[Pair]

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.universe)

    @cached_property
    def up(self) -> dict[int, frozenset[int]]:
        ups: dict[int, set[int]] = {x: set() for x in self.universe}
        for x, y in self.relation:
            ups[x].add(y)
        return {x: frozenset(s) for x, s in ups.items()}

    @cached_property
    def down(self) -> dict[int, frozenset[int]]:
        downs: dict[int, set[int]] = {x: set() for x in self.universe}
        for x, y in self.relation:
            downs[y].add(x)
        return {x: frozenset(s) for x, s in downs.items()}

    def leq(self, x: int, y: int) -> bool:
        return (x, y) in self.relation

    def less(self, x: int, y: int) -> bool:
        return x != y and (x, y) in self.relation

    def comparable(self, x: int, y: int) -> bool:
        return (x, y) in self.relation or (y, x) in self.relation

    def incomparable(self, x: int, y: int) -> bool:
        return not self.comparable(x, y)

    def strict_pairs(self) -> list[Pair]:
        return sorted(p for p in self.relation if p[0] != p[1])

    def covers(self) -> list[Pair]:
        """Covering pairs (the Hasse diagram), ascending."""
        out = []
        for x, y in self.strict_pairs():
            if not any(self.less(x, z) and self.less(z, y) for z in self.up[x]):
                out.append((x, y))
        return out

    def __len__(self) -> int:
        return len(self.universe)

    def __contains__(self, x: object) -> bool:
        return x in self.members


def _check_universe(universe: Iterable[int]) -> tuple[int, ...]:
    items = list(universe)
    for x in items:
        if isinstance(x, bool) or not isinstance(x, int) or x < 0:
            raise MalformedUniverse(f"universe members must be naturals, got {x!r}", x=x)
    ordered = tuple(sorted(items))
    if len(set(ordered)) != len(ordered):
        raise MalformedUniverse("universe has repeated elements")
    return ordered


def validate_poset(universe: Iterable[int], relation: Iterable[Pair]) -> FinitePoset:
    """Check the three order axioms and return the poset.

    Violations are reported for the lexicographically least witness, in the
    order foreign element, reflexivity, antisymmetry, transitivity.
    """
    members = _check_universe(universe)
    rel = frozenset((int(x), int(y)) for x, y in relation)
    present = frozenset(members)
    for x, y in sorted(rel):
        if x not in present:
            raise ForeignElement(x)
        if y not in present:
            raise ForeignElement(y)
    for x in members:
        if (x, x) not in rel:
            raise ReflexivityViolation(x)
    for x, y in sorted(rel):
        if x < y and (y, x) in rel:
            raise AntisymmetryViolation(x, y)
    poset = FinitePoset(members, rel)
    up = poset.up
    for x in members:
        for y in sorted(up[x]):
            for z in sorted(up[y]):
                if z not in up[x]:
                    raise TransitivityViolation(x, y, z)
    return poset


def closure(universe: Iterable[int], pairs: Iterable[Pair]) -> FinitePoset:
    """Reflexive-transitive closure of ``pairs``; raises if a cycle appears."""
    members = _check_universe(universe)
    ups = {x: {x} for x in members}
    for x, y in pairs:
        if x not in ups:
            raise ForeignElement(x)
        if y not in ups:
            raise ForeignElement(y)
        ups[x].add(y)
    changed = True
    while changed:
        changed = False
        for x in members:
            reach = set(ups[x])
            for y in list(ups[x]):
                reach |= ups[y]
            if reach != ups[x]:
                ups[x] = reach
                changed = True
    rel = frozenset((x, y) for x in members for y in ups[x])
    return validate_poset(members, rel)


def discrete(universe: Iterable[int]) -> FinitePoset:
    members = _check_universe(universe)
    return FinitePoset(members, frozenset((x, x) for x in members))


def natural_chain(universe: Iterable[int]) -> FinitePoset:
    members = _check_universe(universe)
    return FinitePoset(members, frozenset((x, y) for x in members for y in members if x <= y))


def _check_subset(P: FinitePoset, X: Iterable[int]) -> list[int]:
    xs = sorted(set(X))
    for x in xs:
        if x not in P.members:
            raise ForeignElement(x)
    return xs


def is_chain(P: FinitePoset, X: Iterable[int]) -> bool:
    xs = _check_subset(P, X)
    return all(P.comparable(x, y) for x, y in combinations(xs, 2))


def is_antichain(P: FinitePoset, X: Iterable[int]) -> bool:
    xs = _check_subset(P, X)
    return all(P.incomparable(x, y) for x, y in combinations(xs, 2))


def is_omega_ordered(P: FinitePoset) -> bool:
    return all(x <= y for x, y in P.relation)


def dual_order(P: FinitePoset) -> FinitePoset:
    return FinitePoset(P.universe, frozenset((y, x) for x, y in P.relation))


def restrict(P: FinitePoset, X: Iterable[int]) -> FinitePoset:
    xs = _check_subset(P, X)
    keep = frozenset(xs)
    return FinitePoset(tuple(xs), frozenset(p for p in P.relation if p[0] in keep and p[1] in keep))


@dataclass(frozen=True)
class SolutionSet:
    elements: frozenset[int]
    kind: SolutionKind

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        object.__setattr__(self, "kind", SolutionKind(self.kind))

    def __len__(self) -> int:
        return len(self.elements)

    def sorted(self) -> list[int]:
        return sorted(self.elements)


def classify_solution(P: FinitePoset, X: Iterable[int]) -> SolutionSet | None:
    """Label ``X`` as chain or antichain of ``P`` (chain wins for |X| <= 1)."""
    xs = frozenset(X)
    if is_chain(P, xs):
        return SolutionSet(xs, SolutionKind.CHAIN)
    if is_antichain(P, xs):
        return SolutionSet(xs, SolutionKind.ANTICHAIN)
    return None


@dataclass(frozen=True)
class StableAnnotation:
    """Limit behavior and stabilization point for every element.

    Within a finite universe, "for all but finitely many y" becomes "for all
    y >= t in the universe".
    """

    behaviors: Mapping[int, tuple[Behavior, int]] = field(default_factory=dict)
    type_tag: TypeTag = TypeTag.SMALL

    def __post_init__(self):
        norm = {int(x): (Behavior(tag), int(t)) for x, (tag, t) in dict(self.behaviors).items()}
        object.__setattr__(self, "behaviors", dict(sorted(norm.items())))
        object.__setattr__(self, "type_tag", TypeTag(self.type_tag))

    def tag(self, x: int) -> Behavior:
        return self.behaviors[x][0]

    def point(self, x: int) -> int:
        return self.behaviors[x][1]

    def tags(self) -> set[Behavior]:
        return {tag for tag, _ in self.behaviors.values()}

    def items(self):
        return self.behaviors.items()

    def __eq__(self, other):
        if not isinstance(other, StableAnnotation):
            return NotImplemented
        return self.type_tag == other.type_tag and dict(self.behaviors) == dict(other.behaviors)

    def __hash__(self):
        return hash((self.type_tag, tuple(self.behaviors.items())))


def _behaves(P: FinitePoset, x: int, tag: Behavior, y: int) -> bool:
    if tag is Behavior.SMALL:
        return P.leq(x, y)
    if tag is Behavior.LARGE:
        return P.leq(y, x)
    return x == y or P.incomparable(x, y)


def classify_stability(P: FinitePoset, ann: StableAnnotation) -> None:
    """Accept silently or raise on the lexicographically least violation.

    An element tagged S must lie below every y >= t, L above every such y,
    and I must be incomparable to every such y other than itself.
    """
    missing = [x for x in P.universe if x not in ann.behaviors]
    if missing:
        raise AnnotationIncomplete(f"no behavior for {missing[0]}", missing=missing)
    foreign = [x for x in ann.behaviors if x not in P.members]
    if foreign:
        raise ForeignElement(foreign[0])
    bad = [x for x, (tag, _) in ann.items() if tag is ann.type_tag.forbidden]
    if bad:
        raise TypeMismatch(f"{ann.type_tag.value}-type annotation tags {bad[0]} as "
                           f"{ann.type_tag.forbidden.value}", x=bad[0])
    for x in P.universe:
        tag, t = ann.behaviors[x]
        for y in P.universe:
            if y >= t and not _behaves(P, x, tag, y):
                raise BehaviorViolation(x, y, tag)


def is_stable(P: FinitePoset, ann: StableAnnotation) -> bool:
    try:
        classify_stability(P, ann)
    except (BehaviorViolation, AnnotationIncomplete, TypeMismatch, ForeignElement):
        return False
    return True


def tightest_annotation(P: FinitePoset, type_tag: TypeTag = TypeTag.SMALL) -> StableAnnotation:
    """Annotation with the least stabilization point per element.

    Every finite poset is vacuously stable (t past the maximum), so this
    always succeeds; ties prefer I over the side tag.
    """
    top = (max(P.universe) + 1) if P.universe else 0
    choices = [Behavior.ISOLATED, Behavior.SMALL if type_tag is TypeTag.SMALL else Behavior.LARGE]
    out = {}
    for x in P.universe:
        best = None
        for tag in choices:
            t = top
            for y in reversed(P.universe):
                if not _behaves(P, x, tag, y):
                    break
                t = y
            if best is None or t < best[1]:
                best = (tag, t)
        out[x] = best
    return StableAnnotation(out, type_tag)


def swap_annotation(ann: StableAnnotation) -> StableAnnotation:
    """Exchange S and L tags and flip the type; points are kept."""
    swap = {Behavior.SMALL: Behavior.LARGE, Behavior.LARGE: Behavior.SMALL,
            Behavior.ISOLATED: Behavior.ISOLATED}
    flipped = TypeTag.LARGE if ann.type_tag is TypeTag.SMALL else TypeTag.SMALL
    return StableAnnotation({x: (swap[tag], t) for x, (tag, t) in ann.items()}, flipped)
