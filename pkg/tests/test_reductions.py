import random

import pytest
from hypothesis import given, settings

from caclab.errors import NotASolution, NotOmegaOrdered, NotStable, SolverFailed
from caclab.generate import random_stable_instance
from caclab.poset import (
    Behavior,
    FinitePoset,
    SolutionKind,
    SolutionSet,
    StableAnnotation,
    TypeTag,
    closure,
    discrete,
    dual_order,
    is_antichain,
    is_chain,
    is_omega_ordered,
    is_stable,
    natural_chain,
)
from caclab.problems import (
    ProblemInstance,
    ProblemKind,
    SizePolicy,
    enumerate_solutions,
    is_solution,
    max_feasible,
)
from caclab.reductions import (
    append_type_flag,
    build_leq_q,
    compose_cac_via_omega,
    compose_cac_via_omega_traced,
    greedy_antichain,
    greedy_chain,
    leq_q_annotation,
    r_holds,
    split_minus,
    split_plus,
    stable_thinning,
    successor_free_set,
    thin,
    to_large_type,
    to_small_type,
)

from strategies import posets, stable_instances

S, L, I = Behavior.SMALL, Behavior.LARGE, Behavior.ISOLATED


def reversed_chain(n):
    return dual_order(natural_chain(range(n)))


def test_split_examples():
    W = natural_chain(range(3))
    assert split_plus(W) == W
    P = closure(range(3), [(2, 0)])
    assert split_plus(P) == discrete(range(3))
    assert split_minus(P).strict_pairs() == [(0, 2)]
    R = reversed_chain(4)
    assert split_plus(R) == discrete(range(4))
    assert split_minus(R) == natural_chain(range(4))


def test_compose_examples():
    tr = compose_cac_via_omega_traced(natural_chain(range(4)))
    assert tr.second is None and tr.result == SolutionSet(frozenset(range(4)), "chain")
    tr = compose_cac_via_omega_traced(reversed_chain(4))
    assert tr.first == SolutionSet(frozenset(range(4)), "antichain")
    assert tr.second == SolutionSet(frozenset(range(4)), "chain")
    assert is_chain(reversed_chain(4), tr.result.elements)
    tr = compose_cac_via_omega_traced(discrete(range(4)))
    assert tr.first.kind is SolutionKind.ANTICHAIN
    assert tr.result.kind is SolutionKind.ANTICHAIN


def test_compose_fails_honestly_when_the_plus_half_is_too_thin():
    # a 4-element total order with no monotone 3-subsequence
    P = closure(range(4), [(2, 3), (3, 0), (0, 1)])
    assert max_feasible(P) == 4
    with pytest.raises(SolverFailed):
        compose_cac_via_omega(P, policy=SizePolicy(min_size=3))


def test_build_leq_q_examples():
    W = natural_chain(range(3))
    assert build_leq_q(W, TypeTag.SMALL) == W
    assert build_leq_q(closure(range(2), [(1, 0)]), TypeTag.SMALL) == discrete(range(2))
    assert build_leq_q(closure(range(2), [(1, 0)]), TypeTag.LARGE).strict_pairs() == [(0, 1)]


def test_thinning_example_from_isolated_poset():
    P = closure([0, 1, 5, 6], [(1, 0)])
    Q = build_leq_q(P, TypeTag.SMALL)
    assert Q == discrete([0, 1, 5, 6])
    X = SolutionSet({0, 1, 5, 6}, "antichain")
    Y, trace = stable_thinning(P, TypeTag.SMALL, X)
    assert 1 not in trace.stages[0]
    assert Y.sorted() == [0, 5, 6]
    assert is_antichain(P, Y.elements)
    assert trace.bound_holds()


def test_thinning_leaves_antichains_alone():
    P = discrete(range(5))
    X = SolutionSet(frozenset(range(5)), "antichain")
    Y, _ = stable_thinning(P, TypeTag.SMALL, X)
    assert Y.elements == X.elements


def test_thinning_returns_chains_unchanged():
    P = natural_chain(range(4))
    X = SolutionSet(frozenset(range(4)), "chain")
    assert stable_thinning(P, TypeTag.SMALL, X)[0] == X


def test_thinning_rejects_non_solutions():
    with pytest.raises(NotASolution):
        stable_thinning(natural_chain(range(4)), TypeTag.SMALL, SolutionSet({0, 1, 2}, "antichain"))


def test_r_predicate_reading():
    P = closure(range(2), [(1, 0)])
    Q = build_leq_q(P, TypeTag.SMALL)
    assert not r_holds(P, Q, 0, 1)
    assert r_holds(discrete(range(2)), discrete(range(2)), 0, 1)


def test_successor_free_examples():
    assert successor_free_set(natural_chain(range(4))) == {3}
    assert successor_free_set(discrete(range(4))) == set(range(4))
    assert successor_free_set(closure(range(5), [(0, 2), (1, 2)])) == {2, 3, 4}


def test_greedy_chain_examples():
    assert greedy_chain(natural_chain(range(4)), 0).sorted() == [0, 1, 2, 3]
    assert greedy_chain(discrete(range(4)), 2).sorted() == [2]
    assert greedy_chain(closure(range(5), [(0, 2), (2, 4)]), 0).sorted() == [0, 2, 4]


def test_greedy_antichain_examples():
    assert greedy_antichain(discrete(range(4))).sorted() == [0, 1, 2, 3]
    assert greedy_antichain(closure(range(5), [(0, 2), (1, 2)])).sorted() == [2, 3, 4]
    assert greedy_antichain(natural_chain(range(4))).sorted() == [3]
    with pytest.raises(NotOmegaOrdered):
        greedy_antichain(closure(range(2), [(1, 0)]))


def test_greedy_antichain_without_reflexive_anchor():
    assert greedy_antichain(discrete(range(3)), include_anchor=False).sorted() == []


def test_type_transform_examples():
    P = closure(range(2), [(1, 0)])
    ann = StableAnnotation({0: (L, 0), 1: (I, 2)}, TypeTag.LARGE)
    inst = ProblemInstance(P, ann)
    small = to_small_type(inst)
    assert small.poset.strict_pairs() == [(0, 1)]
    assert small.annotation.behaviors[0] == (S, 0)
    assert to_small_type(small) is small
    assert to_large_type(small).poset == P
    assert append_type_flag(small).type_flag is S
    with pytest.raises(NotStable):
        to_small_type(ProblemInstance(P))


@settings(max_examples=200, deadline=None)
@given(posets(max_size=10))
def test_splits_are_omega_ordered(P):
    for half in (split_plus(P), split_minus(P)):
        assert is_omega_ordered(half)
        assert FinitePoset(half.universe, half.relation) == half


@settings(max_examples=150, deadline=None)
@given(stable_instances(max_size=10))
def test_thinning_properties(inst):
    tag = inst.annotation.type_tag
    Q = build_leq_q(inst.poset, tag)
    for X in enumerate_solutions(ProblemInstance(Q), SizePolicy(min_size=2)):
        Y, trace = stable_thinning(inst.poset, tag, X, SizePolicy(min_size=2))
        assert Y.elements <= X.elements
        ys = Y.sorted()
        assert all(r_holds(inst.poset, Q, a, b) for i, a in enumerate(ys) for b in ys[i + 1:])
        assert is_chain(inst.poset, ys) or is_antichain(inst.poset, ys)
        assert trace.bound_holds()


@settings(max_examples=150, deadline=None)
@given(stable_instances(max_size=10, type_tag=TypeTag.SMALL))
def test_leq_q_annotation_is_omega_stable(inst):
    Q = build_leq_q(inst.poset, TypeTag.SMALL)
    assert is_stable(Q, leq_q_annotation(inst.annotation))


def test_thin_rank_rule_equals_intersection():
    rng = random.Random(5)
    for _ in range(200):
        inst = random_stable_instance(rng.randint(2, 10), TypeTag.SMALL, rng)
        Q = build_leq_q(inst.poset, TypeTag.SMALL)
        X = sorted(inst.poset.universe)
        tr = thin(inst.poset, Q, X)
        last = set(tr.stages[-1])
        for st in tr.stages:
            last &= set(st)
        assert set(tr.result) == last


@settings(max_examples=150, deadline=None)
@given(posets(max_size=10, omega=True))
def test_greedy_antichain_properties(P):
    A = greedy_antichain(P)
    assert A.elements <= successor_free_set(P)
    assert is_antichain(P, A.elements)
    xs = A.sorted()
    assert all(a < b for a, b in zip(xs, xs[1:]))
    for x in P.universe:
        assert is_chain(P, greedy_chain(P, x).elements)


@settings(max_examples=100, deadline=None)
@given(stable_instances(max_size=8, type_tag=TypeTag.LARGE))
def test_solutions_transfer_verbatim(inst):
    small = to_small_type(inst)
    assert small.annotation.type_tag is TypeTag.SMALL
    policy = SizePolicy(min_size=2)
    mine = {(s.elements, s.kind) for s in enumerate_solutions(inst, policy)}
    theirs = {(s.elements, s.kind) for s in enumerate_solutions(small, policy)}
    assert mine == theirs
    for elements, kind in mine:
        assert is_solution(ProblemKind.SCAC_SMALL, small, SolutionSet(elements, kind), policy)
