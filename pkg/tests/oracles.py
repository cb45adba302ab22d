"""Brute-force reference implementations, written without the library's helpers.

Each oracle works from the raw pair set by direct quantifier expansion or
bitmask enumeration so that agreement with the library means something.
"""
from __future__ import annotations

from itertools import combinations


def axiom_violation(universe, relation):
    """Name of the first failing axiom, or None, checked in library order."""
    U = sorted(universe)
    rel = set(relation)
    present = set(U)
    for x, y in sorted(rel):
        if x not in present or y not in present:
            return "foreign_element"
    for x in U:
        if (x, x) not in rel:
            return "reflexivity_violation"
    for x in U:
        for y in U:
            if x != y and (x, y) in rel and (y, x) in rel:
                return "antisymmetry_violation"
    for x in U:
        for y in U:
            for z in U:
                if (x, y) in rel and (y, z) in rel and (x, z) not in rel:
                    return "transitivity_violation"
    return None


def longest_chain(universe, relation) -> int:
    """Longest path in the strict-order DAG, by DP over a linear extension."""
    U = list(universe)
    strict = {(x, y) for x, y in relation if x != y}
    below = {x: sum((y, x) in strict for y in U) for x in U}
    order = sorted(U, key=lambda x: below[x])
    best = {}
    for x in order:
        best[x] = 1 + max((best[y] for y in order if (y, x) in strict and y in best), default=0)
    return max(best.values(), default=0)


def _subsets(U):
    n = len(U)
    for mask in range(1 << n):
        yield [U[i] for i in range(n) if mask >> i & 1]


def is_chain(relation, X) -> bool:
    return all((a, b) in relation or (b, a) in relation for a, b in combinations(X, 2))


def is_antichain(relation, X) -> bool:
    return all((a, b) not in relation and (b, a) not in relation for a, b in combinations(X, 2))


def widest_antichain(universe, relation) -> int:
    rel = set(relation)
    return max((len(X) for X in _subsets(sorted(universe)) if is_antichain(rel, X)), default=0)


def all_solutions(universe, relation, min_size):
    """Every (frozenset, kind) pair: chains of size >= min_size, antichains of size >= max(2, min_size)."""
    rel = set(relation)
    out = set()
    for X in _subsets(sorted(universe)):
        if len(X) >= min_size and is_chain(rel, X):
            out.add((frozenset(X), "chain"))
        if len(X) >= max(2, min_size) and is_antichain(rel, X):
            out.add((frozenset(X), "antichain"))
    return out


def stable_ok(universe, relation, behaviors, type_tag) -> bool:
    """Annotation check straight from the definition."""
    rel = set(relation)
    forbidden = "L" if type_tag == "small" else "S"
    if set(behaviors) != set(universe):
        return False
    for x, (tag, t) in behaviors.items():
        if tag == forbidden:
            return False
        for y in universe:
            if y < t:
                continue
            if tag == "S" and (x, y) not in rel:
                return False
            if tag == "L" and (y, x) not in rel:
                return False
            if tag == "I" and y != x and ((x, y) in rel or (y, x) in rel):
                return False
    return True


def condition_ok(n, relation, assign, strict_isolated=False) -> bool:
    """Every clause of the condition definition, expanded over all x, y."""
    rel = set(relation)
    tags = {assign[x][0] for x in range(n)}
    if "S" in tags and "L" in tags:
        return False
    for x in range(n):
        tag, t = assign[x]
        if not 0 <= t <= n:
            return False
        for y in range(n):
            le_yx, le_xy = (y, x) in rel, (x, y) in rel
            if tag == "S" and le_yx and not (y < t and assign[y][0] == "S"):
                return False
            if tag == "L" and le_xy and not (y < t and assign[y][0] == "L"):
                return False
            if tag in ("S", "L") and not le_xy and not le_yx and not y < t:
                return False
            if tag == "I" and (le_xy or le_yx) and (y != x or strict_isolated) and not y < t:
                return False
    return True


def all_orders(n):
    """Every partial order on range(n), as closed pair sets."""
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    refl = {(x, x) for x in range(n)}
    seen = set()
    for mask in range(1 << len(pairs)):
        rel = refl | {pairs[i] for i in range(len(pairs)) if mask >> i & 1}
        if axiom_violation(range(n), rel) is None:
            fz = frozenset(rel)
            if fz not in seen:
                seen.add(fz)
                yield fz


def tree_nodes(E, I, machine_eval, n, w_max):
    """All increasing sequences over I whose prefix-minus-tip never fires."""
    idx = sorted(I)

    def fires(rng):
        for r in range(len(rng) + 1):
            for F in combinations(rng, r):
                for w in range(n, w_max):
                    if machine_eval(frozenset(E) | frozenset(F), w) == 1:
                        return True
        return False

    out = []
    for r in range(len(idx) + 1):
        for alpha in combinations(idx, r):
            if not alpha or not fires(alpha[:-1]):
                out.append(tuple(alpha))
    return set(out)
