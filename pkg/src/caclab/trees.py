"""Extension trees over a finite index set, their labelings and labeled subtrees.

A node is a strictly increasing tuple over ``I``. ``alpha`` belongs to the tree
when no ``F`` drawn from ``alpha`` minus its last entry makes ``delta`` output 1
at some ``w`` in ``[n, w_max)``. "Infinitely many" in the labeling rules is
read as "at least ``kappa``".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional

from .machines import OracleMachine, evaluate

INFINITY = math.inf
Node = tuple[int, ...]
Witness = tuple[frozenset, int]


def sharp(alpha: Node) -> Node:
    """``alpha`` without its last entry (the empty node maps to itself)."""
    return alpha[:-1]


def subsets(items: Iterable[int]) -> Iterator[frozenset]:
    """Subsets by size, then lexicographically."""
    pool = sorted(items)
    for r in range(len(pool) + 1):
        for combo in combinations(pool, r):
            yield frozenset(combo)


def witnesses(E: frozenset, delta: OracleMachine, n: int, w_max: int,
              rng: Iterable[int]) -> Iterator[Witness]:
    """Every ``(F, w)`` with ``F ⊆ rng`` and ``delta(E ∪ F, w) = 1``, least ``w`` first."""
    pool = list(subsets(rng))
    for w in range(n, w_max):
        for F in pool:
            if evaluate(delta, E | F, w) == 1:
                yield F, w


@dataclass(frozen=True)
class ExtensionTree:
    E: frozenset
    I: tuple[int, ...]
    delta: OracleMachine
    n: int
    w_max: int
    nodes: tuple[Node, ...]
    first_witness: dict = field(compare=False, repr=False)

    @cached_property
    def node_set(self) -> frozenset[Node]:
        return frozenset(self.nodes)

    def children(self, alpha: Node) -> list[Node]:
        top = alpha[-1] if alpha else -1
        present = self.node_set
        return [alpha + (x,) for x in self.I if x > top and alpha + (x,) in present]

    def is_terminal(self, alpha: Node) -> bool:
        """Some ``F ⊆ ran(alpha)`` already yields output 1, so growth stops."""
        return self.first_witness.get(alpha) is not None

    def witness(self, alpha: Node) -> Optional[Witness]:
        return self.first_witness.get(alpha)

    def __contains__(self, alpha: object) -> bool:
        return alpha in self.node_set

    def __len__(self) -> int:
        return len(self.nodes)


def build_extension_tree(E: Iterable[int], I: Iterable[int], delta: OracleMachine,
                         n: int, w_max: Optional[int] = None) -> ExtensionTree:
    """The whole finite tree; ``w_max`` defaults to the machine's use bound."""
    E = frozenset(E)
    index = tuple(sorted(set(I)))
    w_max = delta.use_bound if w_max is None else w_max
    found: dict[Node, Optional[Witness]] = {}
    nodes: list[Node] = []
    frontier: list[Node] = [()]
    while frontier:
        alpha = frontier.pop(0)
        nodes.append(alpha)
        found[alpha] = next(witnesses(E, delta, n, w_max, alpha), None)
        if found[alpha] is None:
            top = alpha[-1] if alpha else -1
            frontier.extend(alpha + (x,) for x in index if x > top)
    nodes.sort()
    return ExtensionTree(E, index, delta, n, w_max, tuple(nodes), found)


@dataclass(frozen=True)
class Labeling:
    lb: dict
    kappa: int

    def __getitem__(self, alpha: Node):
        return self.lb[alpha]


def _label_internal(child_labels: list, kappa: int):
    finite = sorted({w for w in child_labels if w != INFINITY})
    for w in finite:
        if child_labels.count(w) >= kappa:
            return w
    return INFINITY


def label_tree(T: ExtensionTree, kappa: int = 2) -> Labeling:
    """Terminals get their least witness ``w``; other nodes the least ``w``
    carried by at least ``kappa`` children, else ``INFINITY``."""
    if kappa < 1:
        raise ValueError("kappa must be positive")
    lb: dict[Node, float | int] = {}
    for alpha in sorted(T.nodes, key=len, reverse=True):
        wit = T.witness(alpha)
        if wit is not None:
            lb[alpha] = wit[1]
        else:
            lb[alpha] = _label_internal([lb[c] for c in T.children(alpha)], kappa)
    return Labeling(lb, kappa)


@dataclass(frozen=True)
class LabeledSubtree:
    nodes: tuple[Node, ...]
    rule: dict = field(compare=False)

    def __contains__(self, alpha: object) -> bool:
        return alpha in self.rule

    def children(self, alpha: Node) -> list[Node]:
        k = len(alpha) + 1
        return [b for b in self.nodes if len(b) == k and b[:-1] == alpha]


def labeled_subtree(T: ExtensionTree, lab: Labeling) -> LabeledSubtree:
    """Prune ``T`` by label agreement, starting from the root.

    Each placed node records the rule that placed it: ``root``, ``same-label``,
    ``infinite`` or ``least-per-label``.
    """
    rule: dict[Node, str] = {(): "root"}
    stack: list[Node] = [()]
    while stack:
        alpha = stack.pop()
        kids = T.children(alpha)
        label = lab[alpha]
        if label != INFINITY:
            placed = [(c, "same-label") for c in kids if lab[c] == label]
        else:
            unbounded = [c for c in kids if lab[c] == INFINITY]
            if len(unbounded) >= lab.kappa:
                placed = [(c, "infinite") for c in unbounded]
            else:
                seen: set = set()
                placed = []
                for c in kids:
                    if lab[c] != INFINITY and lab[c] not in seen:
                        seen.add(lab[c])
                        placed.append((c, "least-per-label"))
        for c, why in placed:
            rule[c] = why
            stack.append(c)
    return LabeledSubtree(tuple(sorted(rule)), rule)


def relabel_consistent(T: ExtensionTree, lab: Labeling, TL: LabeledSubtree) -> bool:
    """Labels restricted to the subtree still obey the labeling rules there."""
    for alpha in TL.nodes:
        if T.is_terminal(alpha):
            continue
        expected = _label_internal([lab[c] for c in TL.children(alpha)], lab.kappa)
        if expected != lab[alpha]:
            return False
    return True


def find_terminal_with_label(T: ExtensionTree, TL: LabeledSubtree,
                             predicate: Callable[[frozenset, int], bool]
                             ) -> Optional[tuple[Node, frozenset, int]]:
    """Lexicographically least terminal of the subtree with a witness passing
    ``predicate``, together with its least such witness."""
    for alpha in TL.nodes:
        if not T.is_terminal(alpha):
            continue
        for F, w in witnesses(T.E, T.delta, T.n, T.w_max, alpha):
            if predicate(F, w):
                return alpha, F, w
    return None


@dataclass
class TreeLemmaReport:
    item1: str = "not applicable: finite trees have no infinite paths"
    item1_surrogate: bool = True
    item2: bool = True
    item3: bool = True
    item4: Optional[bool] = None
    labels: Optional[bool] = None
    prefix_closed: bool = True
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.item1_surrogate and self.item2 and self.item3 and self.prefix_closed
                and self.item4 is not False and self.labels is not False)


def _fires(T: ExtensionTree, rng: Iterable[int]) -> bool:
    # independent of the tree's cached witnesses
    rng = sorted(rng)
    for r in range(len(rng) + 1):
        for F in combinations(rng, r):
            oracle = T.E | frozenset(F)
            if any(evaluate(T.delta, oracle, w) == 1 for w in range(T.n, T.w_max)):
                return True
    return False


def _fires_at(T: ExtensionTree, rng: Iterable[int], w: int) -> bool:
    rng = sorted(rng)
    return any(evaluate(T.delta, T.E | frozenset(F), w) == 1
               for r in range(len(rng) + 1) for F in combinations(rng, r))


def check_tree_lemma(T: ExtensionTree, lab: Optional[Labeling] = None) -> TreeLemmaReport:
    """Brute-force the structural tree properties.

    A node counts as terminal when it has no children although some index
    above its range is available. Item 4 is reported only for nonempty ``I``.
    With ``lab``, terminal labels are also compared with the least firing
    ``w`` found by brute force.
    The surrogate for item 1 checks that a maximal branch with no terminal
    node on it has no firing subset of its range.
    """
    rep = TreeLemmaReport()
    present = T.node_set
    for alpha in T.nodes:
        if alpha and sharp(alpha) not in present:
            rep.prefix_closed = False
            rep.failures.append({"check": "prefix", "alpha": list(alpha)})
        top = alpha[-1] if alpha else -1
        available = [x for x in T.I if x > top]
        kids = [alpha + (x,) for x in available if alpha + (x,) in present]
        if available and not kids:
            if not _fires(T, alpha):
                rep.item3 = False
                rep.failures.append({"check": "item3", "alpha": list(alpha)})
            elif lab is not None:
                least = next(w for w in range(T.n, T.w_max) if _fires_at(T, alpha, w))
                ok = lab[alpha] == least
                rep.labels = ok and rep.labels is not False
                if not ok:
                    rep.failures.append({"check": "label", "alpha": list(alpha)})
        elif kids and len(kids) != len(available):
            rep.item2 = False
            rep.failures.append({"check": "item2", "alpha": list(alpha)})
        if not kids and not available and not T.is_terminal(alpha):
            if _fires(T, alpha):
                rep.item1_surrogate = False
                rep.failures.append({"check": "item1-surrogate", "alpha": list(alpha)})
    if T.I:
        fires_at_root = any(evaluate(T.delta, T.E, w) == 1 for w in range(T.n, T.w_max))
        rep.item4 = fires_at_root == (present == {()})
        if not rep.item4:
            rep.failures.append({"check": "item4"})
    return rep
