"""Forcing conditions for building stable posets.

A condition pairs a finite partial order on an initial segment ``{0..n-1}``
with an assignment locking every element to a limit behavior S, L or I and a
stabilization point ``t <= n``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    CacLabError,
    HomogeneityViolation,
    IBulletViolation,
    IncompleteAssignment,
    LBulletViolation,
    NotInitialSegment,
    SBulletViolation,
    SideBulletViolation,
    StabilizationRangeViolation,
    WrongSide,
)
from .machines import OracleMachine, evaluate
from .poset import (
    Behavior,
    FinitePoset,
    StableAnnotation,
    TypeTag,
    closure,
    validate_poset,
)

S, L, I = Behavior.SMALL, Behavior.LARGE, Behavior.ISOLATED
Assignment = tuple[tuple[Behavior, int], ...]


def side_tags(side: TypeTag) -> tuple[Behavior, Behavior]:
    return (S, I) if TypeTag(side) is TypeTag.SMALL else (L, I)


@dataclass(frozen=True)
class Condition:
    pi: FinitePoset
    assign: Assignment

    @property
    def size(self) -> int:
        return len(self.pi.universe)

    def tag(self, x: int) -> Behavior:
        return self.assign[x][0]

    def point(self, x: int) -> int:
        return self.assign[x][1]

    @property
    def side(self) -> Optional[TypeTag]:
        tags = {tag for tag, _ in self.assign}
        if S in tags:
            return TypeTag.SMALL
        if L in tags:
            return TypeTag.LARGE
        return None

    def valuation(self) -> FinitePoset:
        return self.pi

    def annotation(self, side: Optional[TypeTag] = None) -> StableAnnotation:
        side = self.side or side or TypeTag.SMALL
        return StableAnnotation({x: a for x, a in enumerate(self.assign)}, side)

    def sort_key(self):
        return (tuple(sorted(self.pi.relation)), tuple((tag.value, t) for tag, t in self.assign))


def _normalize_assign(assign) -> dict[int, tuple[Behavior, int]]:
    if isinstance(assign, Mapping):
        items = assign.items()
    else:
        items = enumerate(assign)
    return {int(x): (Behavior(tag), int(t)) for x, (tag, t) in items}


def validate_condition(pi: FinitePoset, assign, strict_isolated: bool = False) -> Condition:
    """Check every clause of the condition definition; return the condition.

    The I clause ignores ``y = x`` unless ``strict_isolated`` is set, since
    reading it literally leaves no room for any I tag.
    """
    pi = validate_poset(pi.universe, pi.relation)
    n = len(pi.universe)
    if pi.universe != tuple(range(n)):
        raise NotInitialSegment(f"universe {list(pi.universe)} is not an initial segment")
    amap = _normalize_assign(assign)
    if set(amap) != set(range(n)):
        missing = sorted(set(range(n)) - set(amap))
        extra = sorted(set(amap) - set(range(n)))
        raise IncompleteAssignment("assignment domain differs from the universe",
                                   missing=missing, extra=extra)
    for x in range(n):
        t = amap[x][1]
        if not 0 <= t <= n:
            raise StabilizationRangeViolation(f"point {t} of {x} outside 0..{n}", x=x, t=t)
    tags = {tag for tag, _ in amap.values()}
    if S in tags and L in tags:
        xs = min(x for x in range(n) if amap[x][0] is S)
        xl = min(x for x in range(n) if amap[x][0] is L)
        raise HomogeneityViolation("both S and L tags present", s=xs, l=xl)
    for x in range(n):
        tag, t = amap[x]
        if tag is S:
            for y in sorted(pi.down[x]):
                if not (y < t and amap[y][0] is S):
                    raise SBulletViolation(x, y)
    for x in range(n):
        tag, t = amap[x]
        if tag is L:
            for y in sorted(pi.up[x]):
                if not (y < t and amap[y][0] is L):
                    raise LBulletViolation(x, y)
    for x in range(n):
        tag, t = amap[x]
        if tag in (S, L):
            for y in range(n):
                if pi.incomparable(x, y) and not y < t:
                    raise SideBulletViolation(x, y)
    for x in range(n):
        tag, t = amap[x]
        if tag is I:
            for y in range(n):
                if (y != x or strict_isolated) and pi.comparable(x, y) and not y < t:
                    raise IBulletViolation(x, y)
    return Condition(pi, tuple(amap[x] for x in range(n)))


def is_condition(pi: FinitePoset, assign, strict_isolated: bool = False) -> bool:
    try:
        validate_condition(pi, assign, strict_isolated)
    except CacLabError:
        return False
    return True


EMPTY_CONDITION = Condition(FinitePoset((), frozenset()), ())


def extends(q: Condition, p: Condition) -> bool:
    """``q`` extends ``p``: same order on ``p``'s segment, same assignment there."""
    n = p.size
    if q.size < n:
        return False
    old = {(x, y) for x, y in q.pi.relation if x < n and y < n}
    return old == set(p.pi.relation) and q.assign[:n] == p.assign


def is_parallel(p: Condition, q: Condition) -> bool:
    return p.pi == q.pi


def mind_change(p: Condition) -> Condition:
    """Flip a small-side condition to the large side on the same order.

    S tags become ``(I, |pi|)`` and I tags become ``(L, |pi|)``.
    """
    if any(tag is L for tag, _ in p.assign):
        raise WrongSide("mind_change needs a condition without L tags")
    n = p.size
    flipped = tuple((I, n) if tag is S else (L, n) for tag, _ in p.assign)
    return validate_condition(p.pi, flipped)


def min_point(pi: FinitePoset, tags: Sequence[Behavior], x: int,
              strict_isolated: bool = False) -> int:
    """Least stabilization point that satisfies every ``y < t`` clause for ``x``."""
    n = len(pi.universe)
    tag = tags[x]
    if tag is S:
        need = [y for y in range(n) if pi.leq(y, x) or pi.incomparable(x, y)]
    elif tag is L:
        need = [y for y in range(n) if pi.leq(x, y) or pi.incomparable(x, y)]
    else:
        need = [y for y in range(n) if pi.comparable(x, y) and (y != x or strict_isolated)]
    return max(need) + 1 if need else 0


def tags_consistent(pi: FinitePoset, tags: Sequence[Behavior]) -> bool:
    """The tag-only clauses: predecessors of S are S, successors of L are L."""
    for x, tag in enumerate(tags):
        if tag is S and any(tags[y] is not S for y in pi.down[x]):
            return False
        if tag is L and any(tags[y] is not L for y in pi.up[x]):
            return False
    return True


def one_point_extensions(pi: FinitePoset) -> Iterator[FinitePoset]:
    """Every partial order on ``{0..n}`` whose restriction to ``{0..n-1}`` is ``pi``."""
    n = len(pi.universe)
    elems = list(range(n))
    downsets = [frozenset(D) for r in range(n + 1) for D in itertools.combinations(elems, r)
                if all(pi.down[d] <= set(D) for d in D)]
    upsets = [frozenset(U) for r in range(n + 1) for U in itertools.combinations(elems, r)
              if all(pi.up[u] <= set(U) for u in U)]
    for D in downsets:
        for U in upsets:
            if D & U or not all(pi.leq(d, u) for d in D for u in U):
                continue
            rel = set(pi.relation) | {(n, n)} | {(d, n) for d in D} | {(n, u) for u in U}
            yield FinitePoset(tuple(range(n + 1)), frozenset(rel))


def order_extensions(pi: FinitePoset, target: int) -> Iterator[FinitePoset]:
    if len(pi.universe) == target:
        yield pi
        return
    for step in one_point_extensions(pi):
        yield from order_extensions(step, target)


def enumerate_extensions(p: Condition, target_size: int, side: TypeTag,
                         strict_isolated: bool = False) -> list[Condition]:
    """All valid conditions of size ``target_size`` extending ``p`` on ``side``.

    Returned in canonical order: relation pair-set, then assignment.
    """
    n = p.size
    if target_size < n:
        return []
    allowed = side_tags(side)
    if any(tag not in allowed for tag, _ in p.assign):
        return []
    old_tags = [tag for tag, _ in p.assign]
    out = []
    for rho in order_extensions(p.pi, target_size):
        for new_tags in itertools.product(allowed, repeat=target_size - n):
            tags = old_tags + list(new_tags)
            if not tags_consistent(rho, tags):
                continue
            if any(min_point(rho, tags, x, strict_isolated) > p.point(x) for x in range(n)):
                continue
            ranges = [range(min_point(rho, tags, x, strict_isolated), target_size + 1)
                      for x in range(n, target_size)]
            for points in itertools.product(*ranges):
                assign = p.assign + tuple(zip(new_tags, points))
                out.append(validate_condition(rho, assign, strict_isolated))
    out.sort(key=Condition.sort_key)
    return out


def all_conditions(size: int, side: TypeTag, strict_isolated: bool = False) -> list[Condition]:
    return enumerate_extensions(EMPTY_CONDITION, size, side, strict_isolated)


# -- extending a condition with fresh elements ------------------------------

def _forced_relations(p: Condition, z: int) -> set[tuple[int, int]]:
    """Relations every extension must impose between old elements and new ``z``.

    Old points are at most ``|pi|``, so each old element has already settled:
    S lies below ``z``, L above it, I is incomparable.
    """
    rel = set()
    for x, (tag, t) in enumerate(p.assign):
        if t <= z:
            if tag is S:
                rel.add((x, z))
            elif tag is L:
                rel.add((z, x))
    return rel


def close_condition(p: Condition, extra: int, side: TypeTag,
                    tags: Optional[Sequence[Behavior]] = None) -> Condition:
    """Append ``extra`` fresh elements that settle immediately.

    Fresh element ``z`` gets tag ``tags[i]`` (default I) and point ``z + 1``;
    it obeys every earlier element's behavior.
    """
    side = TypeTag(side)
    allowed = side_tags(side)
    cur = p
    for i in range(extra):
        z = cur.size
        tag = tags[i] if tags is not None else I
        if tag not in allowed:
            raise WrongSide(f"tag {tag.value} is not on the {side.value} side")
        rel = set(cur.pi.relation) | _forced_relations(cur, z) | {(z, z)}
        pi = closure(range(z + 1), rel)
        cur = validate_condition(pi, cur.assign + ((tag, z + 1),))
    return cur


@dataclass(frozen=True)
class Extension:
    condition: Condition
    witness: tuple[int, int, int]


def _realizable(p: Condition, side: TypeTag, x: int, y: int, z: int) -> bool:
    n = p.size
    pi = p.pi
    settled = S if side is TypeTag.SMALL else L

    def old(a):
        return a < n

    if old(x) and old(y):
        if not pi.incomparable(x, y):
            return False
    elif old(x) or old(y):
        o = x if old(x) else y
        if p.tag(o) is not I:
            return False
    if old(y) and old(z):
        return pi.less(y, z)
    if old(y):
        return side is TypeTag.SMALL and p.tag(y) is settled
    if old(z):
        return side is TypeTag.LARGE and p.tag(z) is settled
    return True


def find_witness_extension(p: Condition, target_size: int, side: TypeTag,
                           selected: Iterable[int]) -> Optional[Extension]:
    """First extension of size ``target_size`` with selected ``x | y < z``.

    Triples are tried in lexicographic order. New elements take only the
    relations forced on them, plus ``y < z`` when both are new, and are
    tagged ``(I, target_size)``.
    """
    side = TypeTag(side)
    n = p.size
    if target_size < n or any(tag not in side_tags(side) for tag, _ in p.assign):
        return None
    pool = sorted(w for w in set(selected) if w < target_size)
    if len(pool) < 3:
        return None
    for x, y, z in itertools.permutations(pool, 3):
        if not _realizable(p, side, x, y, z):
            continue
        rel = set(p.pi.relation)
        for w in range(n, target_size):
            rel |= _forced_relations(p, w)
            rel.add((w, w))
        if y >= n and z >= n:
            rel.add((y, z))
        try:
            rho = closure(range(target_size), rel)
            assign = p.assign + tuple((I, target_size) for _ in range(n, target_size))
            q = validate_condition(rho, assign)
        except CacLabError:
            continue
        if rho.incomparable(x, y) and rho.less(y, z):
            return Extension(q, (x, y, z))
    return None


def find_witness(G: FinitePoset, selected: Iterable[int]) -> Optional[tuple[int, int, int]]:
    """Least selected triple with ``x | y`` and ``y < z`` in ``G``."""
    pool = sorted(w for w in set(selected) if w in G.members)
    for x, y, z in itertools.permutations(pool, 3):
        if G.incomparable(x, y) and G.less(y, z):
            return (x, y, z)
    return None


def selected_by(machine: OracleMachine, upto: int, oracle: frozenset = frozenset()) -> list[int]:
    return [w for w in range(upto) if evaluate(machine, oracle, w) == 1]


@dataclass
class DiagonalResult:
    condition: Condition
    poset: FinitePoset
    annotation: StableAnnotation
    log: list[dict] = field(default_factory=list)


def build_diagonal_poset(p0: Condition, machines: Sequence[OracleMachine], stages: int,
                         side: Optional[TypeTag] = None,
                         oracle: frozenset = frozenset(), pad: int = 0) -> DiagonalResult:
    """Meet ``x | y < z`` requirements for each machine in round robin.

    Stage ``k`` serves machine ``k mod len(machines)`` on its visit
    ``m = k // len(machines) + 1``; an unmet requirement searches extensions
    of size ``|pi| + m``. ``pad`` fresh isolated elements are appended at the
    end.
    """
    side = TypeTag(side) if side is not None else (p0.side or TypeTag.SMALL)
    if p0.side is not None and p0.side is not side:
        raise WrongSide(f"p0 is on the {p0.side.value} side")
    p = p0
    log: list[dict] = []
    k_count = len(machines)
    for k in range(stages if k_count else 0):
        e, m = k % k_count, k // k_count + 1
        M = machines[e]
        entry = {"stage": k, "requirement": e, "visit": m, "size_before": p.size}
        current = find_witness(p.pi, selected_by(M, p.size, oracle))
        if current is not None:
            entry.update(action="satisfied", witness=list(current), lookup_round=k)
        else:
            target = p.size + m
            ext = find_witness_extension(p, target, side, selected_by(M, target, oracle))
            if ext is None:
                entry.update(action="no-extension", target=target)
            else:
                p = ext.condition
                entry.update(action="extended", target=target, witness=list(ext.witness),
                             lookup_round=k)
        entry["size_after"] = p.size
        log.append(entry)
    if pad:
        p = close_condition(p, pad, side)
        log.append({"stage": "pad", "action": "padded", "added": pad, "size_after": p.size})
    return DiagonalResult(p, p.pi, p.annotation(side), log)


def unmet_requirements(result: DiagonalResult, machines: Sequence[OracleMachine],
                       oracle: frozenset = frozenset()) -> list[int]:
    """Indices of machines selecting >= 3 universe elements with no witness."""
    out = []
    for e, M in enumerate(machines):
        chosen = selected_by(M, result.condition.size, oracle)
        if len(chosen) >= 3 and find_witness(result.poset, chosen) is None:
            out.append(e)
    return out


# -- Lachlan's disjunction --------------------------------------------------

class Selection(str, Enum):
    CHAIN = "C"
    ANTICHAIN = "A"


@dataclass(frozen=True)
class Counterexample:
    pair: tuple[Hashable, Hashable]


def lachlan_select(outcomes: Mapping[tuple[Hashable, Hashable], tuple[bool, bool]]
                   ) -> Selection | Counterexample:
    """Pick the side on which every functional succeeds.

    ``outcomes[(f, g)] = (P(f^C), P(g^A))`` over the full product of first and
    second functionals. Returns a :class:`Counterexample` for a pair failing
    on both sides.
    """
    firsts = sorted({f for f, _ in outcomes}, key=repr)
    seconds = sorted({g for _, g in outcomes}, key=repr)
    for f in firsts:
        for g in seconds:
            if (f, g) not in outcomes:
                raise ValueError(f"outcome for pair {(f, g)!r} is missing")
    on_c: dict = {}
    on_a: dict = {}
    for (f, g), (c, a) in sorted(outcomes.items(), key=repr):
        if on_c.setdefault(f, bool(c)) != bool(c) or on_a.setdefault(g, bool(a)) != bool(a):
            raise ValueError(f"outcomes for {(f, g)!r} disagree with another pair")
    for f in firsts:
        for g in seconds:
            if not on_c[f] and not on_a[g]:
                return Counterexample((f, g))
    if all(on_c.values()):
        return Selection.CHAIN
    assert all(on_a.values())
    return Selection.ANTICHAIN
