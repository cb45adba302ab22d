"""Seeded random posets, conditions and problem instances.

General posets come from a random DAG over a shuffled order followed by
transitive closure; omega-ordered ones keep only edges that go up in the
natural order. Stable instances come from a random condition closed off by
fresh elements that settle at once.
"""
from __future__ import annotations

import random
from typing import Optional

from .errors import UnsatisfiableSpec
from .forcing import (
    EMPTY_CONDITION,
    Condition,
    close_condition,
    min_point,
    side_tags,
    tags_consistent,
    validate_condition,
)
from .poset import Behavior, FinitePoset, TypeTag, closure
from .problems import ProblemInstance, ProblemKind, SizePolicy
from .reductions import append_type_flag, build_leq_q, leq_q_annotation

MAX_SIZE = 20


def random_poset(n: int, rng: random.Random, density: Optional[float] = None,
                 omega: bool = False) -> FinitePoset:
    """Random partial order on ``{0..n-1}``.

    ``density`` is the edge probability of the underlying DAG (drawn per call
    when omitted, so the corpus mixes sparse and dense orders).
    """
    p = rng.choice((0.1, 0.2, 0.35, 0.5)) if density is None else density
    order = list(range(n))
    if not omega:
        rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return closure(range(n), edges)


def random_omega_poset(n: int, rng: random.Random, density: Optional[float] = None) -> FinitePoset:
    return random_poset(n, rng, density, omega=True)


def random_condition(n: int, side: TypeTag, rng: random.Random, density: Optional[float] = None,
                     attempts: int = 20) -> Condition:
    """Random valid condition of size ``n`` on ``side``.

    Tags are sampled until they are consistent with a random order, then each
    point is drawn from its feasible range. All-I with every point at ``n``
    is always valid and serves as the fallback.
    """
    side = TypeTag(side)
    pi = random_poset(n, rng, density)
    allowed = side_tags(side)
    for _ in range(attempts):
        tags = [rng.choice(allowed) for _ in range(n)]
        if not tags_consistent(pi, tags):
            continue
        lows = [min_point(pi, tags, x) for x in range(n)]
        if all(lo <= n for lo in lows):
            return validate_condition(pi, [(tag, rng.randint(lo, n)) for tag, lo in zip(tags, lows)])
    return validate_condition(pi, [(Behavior.ISOLATED, n)] * n)


def random_stable_instance(n: int, type_tag: TypeTag, rng: random.Random) -> ProblemInstance:
    """Stable instance on ``{0..n-1}`` grown from a random condition."""
    type_tag = TypeTag(type_tag)
    k = rng.randint(0, n)
    base = random_condition(k, type_tag, rng) if k else EMPTY_CONDITION
    tags = [rng.choice(side_tags(type_tag)) for _ in range(n - k)]
    full = close_condition(base, n - k, type_tag, tags)
    return ProblemInstance(full.pi, full.annotation(type_tag))


def gen_instance(kind: ProblemKind, n: int, rng: random.Random,
                 type_tag: Optional[TypeTag] = None,
                 policy: SizePolicy = SizePolicy()) -> ProblemInstance:
    """Random valid instance of ``kind`` with ``n`` elements."""
    kind = ProblemKind(kind)
    if n < 0:
        raise UnsatisfiableSpec("size must be a natural number", size=n)
    if n > policy.bound:
        raise UnsatisfiableSpec(f"size {n} exceeds the universe cap {policy.bound}", size=n)
    if type_tag is not None:
        type_tag = TypeTag(type_tag)
        fixed = {ProblemKind.SCAC_SMALL: TypeTag.SMALL, ProblemKind.SCAC_LARGE: TypeTag.LARGE,
                 ProblemKind.OMEGA_SCAC: TypeTag.SMALL}
        if kind in fixed and fixed[kind] is not type_tag:
            raise UnsatisfiableSpec(f"{kind.value} instances cannot be of the "
                                    f"{type_tag.value} type", kind=kind.value)
        if not kind.stable:
            raise UnsatisfiableSpec(f"{kind.value} instances carry no type", kind=kind.value)
    if kind is ProblemKind.CAC:
        return ProblemInstance(random_poset(n, rng))
    if kind is ProblemKind.OMEGA_CAC:
        return ProblemInstance(random_omega_poset(n, rng))
    if kind is ProblemKind.OMEGA_SCAC:
        base = random_stable_instance(n, TypeTag.SMALL, rng)
        return ProblemInstance(build_leq_q(base.poset, TypeTag.SMALL),
                               leq_q_annotation(base.annotation))
    if kind is ProblemKind.SCAC_SMALL:
        type_tag = TypeTag.SMALL
    elif kind is ProblemKind.SCAC_LARGE:
        type_tag = TypeTag.LARGE
    elif type_tag is None:
        type_tag = rng.choice((TypeTag.SMALL, TypeTag.LARGE))
    inst = random_stable_instance(n, type_tag, rng)
    return append_type_flag(inst) if kind is ProblemKind.SCAC_TYPE else inst
