"""The chain-antichain family of instance-solution problems.

"Infinite" is rendered as ``|solution| >= policy.min_size``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterator, Optional

from .errors import (
    ForeignElement,
    NotAChain,
    NotAnAntichain,
    NotOmegaOrdered,
    NotStable,
    TooLarge,
    TooSmall,
    TypeMismatch,
)
from .poset import (
    Behavior,
    FinitePoset,
    SolutionKind,
    SolutionSet,
    StableAnnotation,
    TypeTag,
    classify_stability,
    is_antichain,
    is_chain,
    is_omega_ordered,
)


class ProblemKind(str, Enum):
    CAC = "CAC"
    SCAC = "SCAC"
    OMEGA_CAC = "OMEGA_CAC"
    OMEGA_SCAC = "OMEGA_SCAC"
    SCAC_SMALL = "SCAC_SMALL"
    SCAC_LARGE = "SCAC_LARGE"
    SCAC_TYPE = "SCAC_TYPE"

    @property
    def omega(self) -> bool:
        return self in (ProblemKind.OMEGA_CAC, ProblemKind.OMEGA_SCAC)

    @property
    def stable(self) -> bool:
        return self not in (ProblemKind.CAC, ProblemKind.OMEGA_CAC)


STABLE_KINDS = tuple(k for k in ProblemKind if k.stable)


@dataclass(frozen=True)
class SizePolicy:
    min_size: int = 3
    bound: int = 20

    def __post_init__(self):
        if self.min_size < 1:
            raise ValueError("min_size must be at least 1")

    def with_min_size(self, min_size: int) -> "SizePolicy":
        return replace(self, min_size=min_size)


DEFAULT_POLICY = SizePolicy()


@dataclass(frozen=True)
class ProblemInstance:
    poset: FinitePoset
    annotation: Optional[StableAnnotation] = None
    type_flag: Optional[Behavior] = None

    def __post_init__(self):
        if self.type_flag is not None:
            object.__setattr__(self, "type_flag", Behavior(self.type_flag))

    @property
    def universe(self) -> tuple[int, ...]:
        return self.poset.universe


def validate_instance(kind: ProblemKind, inst: ProblemInstance,
                      policy: SizePolicy = DEFAULT_POLICY) -> None:
    """Raise if ``inst`` fails the side conditions of ``kind``."""
    kind = ProblemKind(kind)
    P = inst.poset
    if kind.omega and not is_omega_ordered(P):
        bad = min(p for p in P.relation if p[0] > p[1])
        raise NotOmegaOrdered(f"{bad[0]} <=_P {bad[1]} against the natural order", pair=bad)
    if not kind.stable:
        return
    ann = inst.annotation
    if ann is None:
        raise NotStable(f"{kind.value} needs a stability annotation")
    classify_stability(P, ann)
    if kind is ProblemKind.OMEGA_SCAC and Behavior.LARGE in ann.tags():
        # omega-ordered stable posets are of the small type
        raise TypeMismatch("omega-ordered stable instances cannot carry L tags")
    if kind is ProblemKind.SCAC_SMALL and ann.type_tag is not TypeTag.SMALL:
        raise TypeMismatch("SCAC_SMALL needs a small-type annotation")
    if kind is ProblemKind.SCAC_LARGE and ann.type_tag is not TypeTag.LARGE:
        raise TypeMismatch("SCAC_LARGE needs a large-type annotation")
    if kind is ProblemKind.SCAC_TYPE:
        if inst.type_flag is None:
            raise TypeMismatch("SCAC_TYPE needs a type flag")
        expected = Behavior.SMALL if ann.type_tag is TypeTag.SMALL else Behavior.LARGE
        if inst.type_flag is not expected:
            raise TypeMismatch(f"flag {inst.type_flag.value} contradicts a "
                               f"{ann.type_tag.value}-type annotation")


def is_instance(kind: ProblemKind, inst: ProblemInstance,
                policy: SizePolicy = DEFAULT_POLICY) -> bool:
    try:
        validate_instance(kind, inst, policy)
    except (NotOmegaOrdered, NotStable, TypeMismatch, ForeignElement):
        return False
    return True


def verify_solution(kind: ProblemKind, inst: ProblemInstance, sol: SolutionSet,
                    policy: SizePolicy = DEFAULT_POLICY) -> None:
    P = inst.poset
    for x in sorted(sol.elements):
        if x not in P.members:
            raise ForeignElement(x)
    if len(sol.elements) < policy.min_size:
        raise TooSmall(f"{len(sol.elements)} elements, need {policy.min_size}",
                       size=len(sol.elements), min_size=policy.min_size)
    if sol.kind is SolutionKind.CHAIN and not is_chain(P, sol.elements):
        raise NotAChain(f"{sol.sorted()} is not a chain")
    if sol.kind is SolutionKind.ANTICHAIN and not is_antichain(P, sol.elements):
        raise NotAnAntichain(f"{sol.sorted()} is not an antichain")


def is_solution(kind: ProblemKind, inst: ProblemInstance, sol: SolutionSet,
                policy: SizePolicy = DEFAULT_POLICY) -> bool:
    try:
        verify_solution(kind, inst, sol, policy)
    except (ForeignElement, TooSmall, NotAChain, NotAnAntichain):
        return False
    return True


def _max_clique(vertices: list[int], adjacent: Callable[[int, int], bool]) -> tuple[int, ...]:
    """Lexicographically least maximum clique.

    Include-first DFS over ascending candidates visits cliques in lexicographic
    order, so keeping only strict improvements yields the least one.
    """
    best: tuple[int, ...] = ()
    current: list[int] = []

    def extend(candidates: list[int]) -> None:
        nonlocal best
        if len(current) > len(best):
            best = tuple(current)
        for i, v in enumerate(candidates):
            if len(current) + len(candidates) - i <= len(best):
                return
            rest = [u for u in candidates[i + 1:] if adjacent(v, u)]
            if len(current) + 1 + len(rest) <= len(best):
                continue
            current.append(v)
            extend(rest)
            current.pop()

    extend(list(vertices))
    return best


def max_chain(P: FinitePoset) -> tuple[int, ...]:
    return _max_clique(list(P.universe), P.comparable)


def max_antichain(P: FinitePoset) -> tuple[int, ...]:
    return _max_clique(list(P.universe), P.incomparable)


def brute_force_solve(kind: ProblemKind, inst: ProblemInstance,
                      policy: SizePolicy = DEFAULT_POLICY) -> SolutionSet | None:
    """Maximum chain if it meets ``min_size``, else maximum antichain, else None."""
    validate_instance(kind, inst, policy)
    P = inst.poset
    if len(P) > policy.bound:
        raise TooLarge(f"universe of {len(P)} exceeds bound {policy.bound}",
                       size=len(P), bound=policy.bound)
    chain = max_chain(P)
    if len(chain) >= policy.min_size:
        return SolutionSet(frozenset(chain), SolutionKind.CHAIN)
    anti = max_antichain(P)
    if len(anti) >= policy.min_size:
        return SolutionSet(frozenset(anti), SolutionKind.ANTICHAIN)
    return None


def iter_cliques(vertices: list[int], adjacent: Callable[[int, int], bool],
                 min_size: int = 0) -> Iterator[tuple[int, ...]]:
    current: list[int] = []

    def extend(candidates: list[int]):
        if len(current) >= min_size:
            yield tuple(current)
        for i, v in enumerate(candidates):
            rest = [u for u in candidates[i + 1:] if adjacent(v, u)]
            if len(current) + 1 + len(rest) < min_size:
                continue
            current.append(v)
            yield from extend(rest)
            current.pop()

    yield from extend(list(vertices))


def enumerate_solutions(inst: ProblemInstance,
                        policy: SizePolicy = DEFAULT_POLICY) -> Iterator[SolutionSet]:
    """Every chain, then every antichain, of size at least ``min_size``.

    Sets of size one are both; they are reported once, as chains.
    """
    P = inst.poset
    if len(P) > policy.bound:
        raise TooLarge(f"universe of {len(P)} exceeds bound {policy.bound}")
    for c in iter_cliques(list(P.universe), P.comparable, policy.min_size):
        yield SolutionSet(frozenset(c), SolutionKind.CHAIN)
    for a in iter_cliques(list(P.universe), P.incomparable, max(policy.min_size, 2)):
        yield SolutionSet(frozenset(a), SolutionKind.ANTICHAIN)


def max_feasible(P: FinitePoset) -> int:
    """Largest min_size at which the instance still has a solution."""
    return max(len(max_chain(P)), len(max_antichain(P)))
