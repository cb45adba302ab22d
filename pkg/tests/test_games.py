import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caclab.errors import EmptySequence, MachineDiverged, MalformedMove
from caclab.games import (
    CLAIM,
    brute_force_adversary,
    cac_via_omega_strategy,
    check_reduction_witness,
    check_sw_reduction_witness,
    code_bound,
    decode_instance,
    decode_join,
    encode_instance,
    join2,
    n_fold_join,
    pair,
    play_reduction_game,
    shorthand,
    split2,
    unpair,
)
from caclab.generate import gen_instance, random_omega_poset
from caclab.machines import builtin, set_machine
from caclab.poset import classify_solution, closure, discrete, dual_order, natural_chain
from caclab.problems import ProblemInstance, ProblemKind, SizePolicy, verify_solution
from caclab.reductions import split_plus

from strategies import stable_instances


def test_pairing_examples():
    assert pair(0, 0) == 0 and pair(0, 1) == 2 and pair(1, 0) == 1
    assert all(unpair(pair(i, k)) == (i, k) for i in range(40) for k in range(40))
    assert sorted(pair(i, k) for i in range(20) for k in range(20) if i + k < 20) == list(range(210))


def test_join_examples():
    assert n_fold_join([set()]) == {0}
    assert n_fold_join([{1}]) == {0, 5}
    assert n_fold_join([{0}, {0}]) == {1, 2, 3}
    assert shorthand([{1, 2}]) == {1, 2}
    assert shorthand([{1}, {0}]) == join2({1}, {0}) == {2, 1}
    with pytest.raises(EmptySequence):
        n_fold_join([])


def test_join2_split_round_trip():
    A, B = {0, 3, 9}, {1, 2}
    assert split2(join2(A, B)) == (A, B)


@settings(max_examples=300)
@given(st.lists(st.frozensets(st.integers(0, 49), max_size=6), min_size=1, max_size=4))
def test_join_decodes(seq):
    assert decode_join(n_fold_join(seq)) == list(seq)


@settings(max_examples=200, deadline=None)
@given(stable_instances(max_size=8))
def test_instance_codes_round_trip(inst):
    assert decode_instance(encode_instance(inst)) == inst


def test_instance_code_bound():
    rng = random.Random(1)
    for kind in ProblemKind:
        inst = gen_instance(kind, 7, rng)
        assert max(encode_instance(inst)) < code_bound(8)


def play(P, policy=SizePolicy(min_size=3), rounds=8):
    return play_reduction_game(ProblemKind.CAC, ProblemKind.OMEGA_CAC,
                               brute_force_adversary(ProblemInstance(P), policy),
                               cac_via_omega_strategy(), rounds, policy)


def test_natural_chain_wins_in_round_two():
    tr = play(natural_chain(range(4)))
    assert tr.verdict == "II-wins-at-round-2"


def test_reversed_chain_needs_both_plays():
    tr = play(dual_order(natural_chain(range(4))))
    assert tr.verdict == "II-wins-at-round-3"
    assert [r.claim for r in tr.rounds] == [False, False, True]
    assert tr.rounds[0].answer == [0, 1, 2, 3]
    assert tr.solution == {0, 1, 2, 3}


def test_singleton_wins_at_first_claim():
    tr = play(discrete([0]), SizePolicy(min_size=1))
    assert tr.verdict == "II-wins-at-round-2"


def test_bad_instance_strategy_loses():
    def bad(Z):
        return join2(set(), {4 * pair(0, 1)})  # a pair over a missing universe

    tr = play_reduction_game("CAC", "OMEGA_CAC",
                             brute_force_adversary(ProblemInstance(natural_chain(range(3)))), bad)
    assert tr.verdict == "I-wins"


def test_silent_strategy_loses_and_bad_v_is_malformed():
    adv = brute_force_adversary(ProblemInstance(natural_chain(range(3))))
    assert play_reduction_game("CAC", "OMEGA_CAC", adv, lambda Z: None).verdict == "I-wins"
    with pytest.raises(MalformedMove):
        play_reduction_game("CAC", "OMEGA_CAC", adv, lambda Z: join2({2}, set()))


def test_wrong_claim_loses():
    adv = brute_force_adversary(ProblemInstance(discrete(range(4))))
    tr = play_reduction_game("CAC", "OMEGA_CAC", adv, lambda Z: join2(CLAIM, {0}))
    assert tr.verdict == "I-wins"


def test_exhausted_when_player_ii_stalls():
    P = natural_chain(range(3))
    stall = lambda Z: join2(set(), encode_instance(ProblemInstance(P)))  # noqa: E731
    tr = play_reduction_game("CAC", "OMEGA_CAC", brute_force_adversary(ProblemInstance(P)),
                             stall, max_rounds=3)
    assert tr.verdict == "exhausted" and len(tr.rounds) == 3


def test_builtin_strategy_on_omega_ordered_posets():
    rng = random.Random(4)
    for _ in range(200):
        P = random_omega_poset(rng.randint(3, 10), rng)
        tr = play(P, SizePolicy(min_size=2))
        assert tr.ii_wins and tr.winning_round <= 3
        sol = classify_solution(P, tr.solution)
        verify_solution(ProblemKind.CAC, ProblemInstance(P), sol, SizePolicy(min_size=2))


IDENT = set_machine(lambda o: o, 10_000, "identity")


def test_identity_reduction_passes():
    rng = random.Random(2)
    corpus = [gen_instance("CAC", rng.randint(3, 7), rng) for _ in range(15)]
    for red in ("sW", "W", "sc", "c"):
        backward = IDENT if red in ("sW", "sc") else set_machine(
            lambda o: {z // 2 for z in o if z % 2}, 10_000, "right-half")
        rep = check_reduction_witness(red, "CAC", "CAC", IDENT, backward, corpus,
                                      SizePolicy(min_size=2))
        assert rep.ok, rep.failures
        assert rep.solutions > 0


def test_split_plus_alone_is_not_a_reduction():
    enc = set_machine(lambda o: encode_instance(ProblemInstance(split_plus(decode_instance(o).poset))),
                      10_000, "split-plus")
    P = closure(range(3), [(2, 0)])
    rep = check_sw_reduction_witness("CAC", "OMEGA_CAC", enc, IDENT, [ProblemInstance(P)],
                                     SizePolicy(min_size=2))
    assert not rep.ok
    # {0, 2} is an antichain upstairs but a chain in P, so only the full set fails
    assert [(f["q_solution"], f["error"]) for f in rep.failures] == [([0, 1, 2], "not_a_solution")]


def test_empty_backward_is_too_small_everywhere():
    empty = set_machine(lambda o: set(), 10_000, "empty")
    corpus = [ProblemInstance(natural_chain(range(4))), ProblemInstance(discrete(range(4)))]
    rep = check_sw_reduction_witness("CAC", "CAC", IDENT, empty, corpus)
    assert rep.failures and all(f["error"] == "too_small" for f in rep.failures)
    assert {f["instance"] for f in rep.failures} == {0, 1}


def test_nonuniform_choice_per_instance():
    corpus = [ProblemInstance(natural_chain(range(3)))]
    rep = check_reduction_witness("c", "CAC", "CAC", lambda inst: IDENT,
                                  lambda inst: set_machine(lambda o: {0, 1, 2}, 8), corpus)
    assert rep.ok
    with pytest.raises(TypeError):
        check_reduction_witness("sW", "CAC", "CAC", lambda inst: IDENT, IDENT, corpus)


def test_divergent_forward_raises():
    with pytest.raises(MachineDiverged):
        check_sw_reduction_witness("CAC", "CAC", builtin("membership", 8), IDENT,
                                   [ProblemInstance(natural_chain(range(3)))])
