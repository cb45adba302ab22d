"""Executable reductions between the chain-antichain problems.

Splitting a poset into its two naturally ordered halves, the two-stage solve
through omega-ordered instances, stable thinning, the greedy chain and
antichain constructions, and the type transforms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import ForeignElement, NotASolution, NotOmegaOrdered, NotStable, SolverFailed
from .poset import (
    Behavior,
    FinitePoset,
    SolutionKind,
    SolutionSet,
    StableAnnotation,
    TypeTag,
    classify_solution,
    dual_order,
    is_omega_ordered,
    restrict,
    swap_annotation,
)
from .problems import (
    DEFAULT_POLICY,
    ProblemInstance,
    ProblemKind,
    SizePolicy,
    brute_force_solve,
    is_solution,
)

Solver = Callable[[ProblemKind, ProblemInstance, SizePolicy], Optional[SolutionSet]]


def split_plus(P: FinitePoset) -> FinitePoset:
    """The comparabilities of ``P`` that agree with the natural order."""
    return FinitePoset(P.universe, frozenset((x, y) for x, y in P.relation if x <= y))


def split_minus(P: FinitePoset) -> FinitePoset:
    """The comparabilities that disagree with the natural order, flipped."""
    return FinitePoset(P.universe, frozenset((y, x) for x, y in P.relation if y <= x))


@dataclass(frozen=True)
class CompositionTrace:
    first: SolutionSet
    second: Optional[SolutionSet]
    result: SolutionSet


def compose_cac_via_omega_traced(P: FinitePoset, omega_solver: Solver = brute_force_solve,
                                 policy: SizePolicy = DEFAULT_POLICY) -> CompositionTrace:
    plus = ProblemInstance(split_plus(P))
    first = omega_solver(ProblemKind.OMEGA_CAC, plus, policy)
    if first is None:
        raise SolverFailed("no solution for the <=+ instance", stage=1)
    if first.kind is SolutionKind.CHAIN:
        return CompositionTrace(first, None, first)
    minus = ProblemInstance(restrict(split_minus(P), first.elements))
    second = omega_solver(ProblemKind.OMEGA_CAC, minus, policy)
    if second is None:
        raise SolverFailed("no solution for the restricted <=- instance", stage=2,
                           restricted_to=first.elements)
    return CompositionTrace(first, second, second)


def compose_cac_via_omega(P: FinitePoset, omega_solver: Solver = brute_force_solve,
                          policy: SizePolicy = DEFAULT_POLICY) -> SolutionSet:
    """Solve a CAC instance with two calls to an omega-CAC solver.

    A chain of ``<=+`` is already a chain of ``P``. Otherwise the antichain X
    is re-solved under ``<=-`` restricted to X; any answer there is a solution
    of ``P`` because pairs of X are ``<=+``-incomparable.
    """
    return compose_cac_via_omega_traced(P, omega_solver, policy).result


def build_leq_q(P: FinitePoset, type_tag: TypeTag) -> FinitePoset:
    """The omega-ordered instance fed to the omega-SCAC solver.

    Small type keeps ``m <= n and m <=_P n``; large type keeps
    ``m <= n and n <=_P m``.
    """
    return split_plus(P) if TypeTag(type_tag) is TypeTag.SMALL else split_minus(P)


def leq_q_annotation(ann: StableAnnotation) -> StableAnnotation:
    """Carry a stable annotation of ``P`` over to ``build_leq_q(P, type)``.

    S (resp. L) elements become S with their point raised past themselves; I
    elements stay I since ``<=_Q`` is contained in ``<=_P`` up to orientation.
    """
    out = {}
    for x, (tag, t) in ann.items():
        if tag is Behavior.ISOLATED:
            out[x] = (tag, t)
        else:
            out[x] = (Behavior.SMALL, max(t, x + 1))
    return StableAnnotation(out, TypeTag.SMALL)


def r_holds(P: FinitePoset, Q: FinitePoset, m: int, n: int) -> bool:
    """Fails exactly when ``m`` and ``n`` are Q-incomparable but P-comparable."""
    return not (Q.incomparable(m, n) and P.comparable(m, n))


@dataclass(frozen=True)
class ThinningTrace:
    stages: tuple[tuple[int, ...], ...]
    result: tuple[int, ...]

    def intersections(self) -> list[int]:
        """``|X_0 ∩ ... ∩ X_n|`` for each n."""
        sizes, running = [], None
        for stage in self.stages:
            running = set(stage) if running is None else running & set(stage)
            sizes.append(len(running))
        return sizes

    def within_truncation(self, n: int) -> bool:
        """Stages ``0..n`` each have an element at index ``i + 1``."""
        return n < len(self.stages) and all(len(self.stages[i]) >= i + 2 for i in range(n + 1))

    def display_elements(self, n: int) -> list[int]:
        """``x_0`` followed by the ``(i+1)``-th element of stage ``i`` for ``i <= n``."""
        return [self.stages[0][0]] + [self.stages[i][i + 1] for i in range(n + 1)]

    def bound_holds(self) -> bool:
        """``|X_0 ∩ ... ∩ X_n| >= n + 1``, with the named elements inside the
        intersection, for every ``n`` within the truncation."""
        running: Optional[set] = None
        for n, stage in enumerate(self.stages):
            running = set(stage) if running is None else running & set(stage)
            if not self.within_truncation(n):
                break
            if len(running) < n + 1 or not set(self.display_elements(n)) <= running:
                return False
        return True


def thin(P: FinitePoset, Q: FinitePoset, X: Iterable[int]) -> ThinningTrace:
    xs = sorted(set(X))
    if not xs:
        return ThinningTrace((), ())
    current = [x for x in xs if r_holds(P, Q, xs[0], x)]
    stages = [tuple(current)]
    for n in range(len(xs) - 1):
        if n + 1 < len(current):
            pivot = current[n + 1]
            current = current[:n + 2] + [x for x in current[n + 2:] if r_holds(P, Q, pivot, x)]
        stages.append(tuple(current))
    # rank rule: the k-th element of X stays iff it survives into X_k
    members = [x for k, x in enumerate(xs) if k < len(stages) and x in stages[k]]
    return ThinningTrace(tuple(stages), tuple(members))


def stable_thinning(P: FinitePoset, type_tag: TypeTag, X: SolutionSet,
                    policy: SizePolicy = DEFAULT_POLICY) -> tuple[SolutionSet, ThinningTrace]:
    Q = build_leq_q(P, type_tag)
    if not is_solution(ProblemKind.OMEGA_CAC, ProblemInstance(Q), X, policy):
        raise NotASolution(f"{X.sorted()} does not solve the <=_Q instance")
    if X.kind is SolutionKind.CHAIN:
        return X, ThinningTrace((tuple(X.sorted()),), tuple(X.sorted()))
    trace = thin(P, Q, X.elements)
    return SolutionSet(frozenset(trace.result), SolutionKind.ANTICHAIN), trace


def successor_free_set(P: FinitePoset) -> frozenset[int]:
    """Elements with no ``<=_P``-successor above them in the natural order."""
    return frozenset(x for x in P.universe
                     if not any(x < y and P.leq(x, y) for y in P.universe))


def greedy_chain(P: FinitePoset, start: int) -> SolutionSet:
    if start not in P.members:
        raise ForeignElement(start)
    chain = [start]
    while True:
        last = chain[-1]
        nxt = next((y for y in P.universe if y != last and P.leq(last, y)), None)
        if nxt is None:
            return SolutionSet(frozenset(chain), SolutionKind.CHAIN)
        chain.append(nxt)


def greedy_antichain(P: FinitePoset, include_anchor: bool = True) -> SolutionSet:
    """Walk the successor-free set from the bottom of the universe.

    Each step anchors at the next universe element after the previous pick
    (``x + 1`` on an initial segment) and takes the least successor-free
    element above the anchor. ``include_anchor=False`` demands a strict
    successor.
    """
    if not is_omega_ordered(P):
        raise NotOmegaOrdered("greedy_antichain needs an omega-ordered poset")
    free = sorted(successor_free_set(P))
    picks: list[int] = []
    anchor = P.universe[0] if P.universe else None
    while anchor is not None:
        pick = next((y for y in free if P.leq(anchor, y) and (include_anchor or y != anchor)), None)
        if pick is None:
            break
        picks.append(pick)
        anchor = next((y for y in P.universe if y > pick), None)
    return SolutionSet(frozenset(picks), SolutionKind.ANTICHAIN)


def _require_annotation(inst: ProblemInstance) -> StableAnnotation:
    if inst.annotation is None:
        raise NotStable("instance carries no stability annotation")
    return inst.annotation


def to_small_type(inst: ProblemInstance) -> ProblemInstance:
    ann = _require_annotation(inst)
    if ann.type_tag is TypeTag.SMALL:
        return inst
    return ProblemInstance(dual_order(inst.poset), swap_annotation(ann))


def to_large_type(inst: ProblemInstance) -> ProblemInstance:
    ann = _require_annotation(inst)
    if ann.type_tag is TypeTag.LARGE:
        return inst
    return ProblemInstance(dual_order(inst.poset), swap_annotation(ann))


def append_type_flag(inst: ProblemInstance) -> ProblemInstance:
    ann = _require_annotation(inst)
    flag = Behavior.SMALL if ann.type_tag is TypeTag.SMALL else Behavior.LARGE
    return ProblemInstance(inst.poset, ann, flag)


def transfer_solution(source: ProblemInstance, target: ProblemInstance,
                      sol: SolutionSet) -> SolutionSet | None:
    """Reclassify ``sol`` against another instance; solutions move verbatim."""
    return classify_solution(target.poset, sol.elements)


def solve_via_dual(inst: ProblemInstance, policy: SizePolicy = DEFAULT_POLICY) -> SolutionSet | None:
    """Strong reduction of SCAC to its small-type restriction."""
    small = to_small_type(inst)
    sol = brute_force_solve(ProblemKind.SCAC_SMALL, small, policy)
    return None if sol is None else transfer_solution(small, inst, sol)
