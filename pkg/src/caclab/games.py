"""Reduction games between chain-antichain problems, played to a fixed depth.

Everything crossing between the players is a finite set of naturals. Posets
and annotations are encoded with the Cantor pairing (see ``encode_instance``),
Player I's moves are combined with the n-fold join, and each Player II move is
``V ⊕ Y`` with ``V = {1}`` for a claimed solution and ``V = ∅`` for a new
instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Protocol, Sequence, Union

from .errors import (
    CacLabError,
    EmptySequence,
    MachineDiverged,
    MalformedMove,
    NotASolution,
    PosetError,
)
from .machines import OracleMachine, defined_set
from .poset import (
    Behavior,
    StableAnnotation,
    TypeTag,
    classify_solution,
    is_chain,
    restrict,
    validate_poset,
)
from .problems import (
    DEFAULT_POLICY,
    ProblemInstance,
    ProblemKind,
    SizePolicy,
    brute_force_solve,
    enumerate_solutions,
    validate_instance,
    verify_solution,
)
from .reductions import split_minus, split_plus

CLAIM = frozenset({1})
NEW_INSTANCE = frozenset()
DEFAULT_MAX_ROUNDS = 8


def pair(i: int, k: int) -> int:
    return (i + k) * (i + k + 1) // 2 + k


def unpair(z: int) -> tuple[int, int]:
    d = (math.isqrt(8 * z + 1) - 1) // 2
    k = z - d * (d + 1) // 2
    return d - k, k


def join2(A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    return frozenset(2 * a for a in A) | frozenset(2 * b + 1 for b in B)


def split2(Z: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
    Z = list(Z)
    return (frozenset(z // 2 for z in Z if z % 2 == 0),
            frozenset(z // 2 for z in Z if z % 2 == 1))


def n_fold_join(sets: Sequence[Iterable[int]]) -> frozenset[int]:
    """``{2n} ∪ {2·pair(i, k) + 1 : k ∈ sets[i]}`` with ``n = len(sets) - 1``."""
    if not sets:
        raise EmptySequence("n_fold_join needs at least one set")
    n = len(sets) - 1
    return frozenset({2 * n}) | frozenset(2 * pair(i, k) + 1 for i, X in enumerate(sets) for k in X)


def decode_join(Z: Iterable[int]) -> list[frozenset[int]]:
    Z = frozenset(Z)
    evens = [z for z in Z if z % 2 == 0]
    if len(evens) != 1:
        raise EmptySequence(f"expected one length marker, found {len(evens)}")
    n = evens[0] // 2
    parts: list[set[int]] = [set() for _ in range(n + 1)]
    for z in Z:
        if z % 2:
            i, k = unpair(z // 2)
            if i > n:
                raise EmptySequence(f"entry for move {i} beyond length marker {n}")
            parts[i].add(k)
    return [frozenset(p) for p in parts]


def shorthand(sets: Sequence[Iterable[int]]) -> frozenset[int]:
    """The one- and two-move abbreviations: ``X0`` itself and ``X0 ⊕ X1``."""
    if len(sets) == 1:
        return frozenset(sets[0])
    if len(sets) == 2:
        return join2(sets[0], sets[1])
    raise ValueError("shorthand covers only one or two moves")


# -- instances as sets of naturals ------------------------------------------
#
# code = 4·c + part
#   part 0: c = pair(x, y) for every (x, y) in the relation
#   part 1: c = pair(x, 3·t + tag) with tag S=0, L=1, I=2
#   part 2: c = 0/1 annotation present (small/large type), 2/3 type flag S/L

_TAGS = (Behavior.SMALL, Behavior.LARGE, Behavior.ISOLATED)


def encode_instance(inst: ProblemInstance) -> frozenset[int]:
    out = {4 * pair(x, y) for x, y in inst.poset.relation}
    ann = inst.annotation
    if ann is not None:
        out |= {4 * pair(x, 3 * t + _TAGS.index(tag)) + 1 for x, (tag, t) in ann.items()}
        out.add(4 * (0 if ann.type_tag is TypeTag.SMALL else 1) + 2)
    if inst.type_flag is not None:
        out.add(4 * (2 if inst.type_flag is Behavior.SMALL else 3) + 2)
    return frozenset(out)


def decode_instance(code: Iterable[int]) -> ProblemInstance:
    """Inverse of :func:`encode_instance`; raises on anything it cannot read."""
    rel, behaviors, meta = set(), {}, set()
    for z in sorted(code):
        c, part = divmod(z, 4)
        if part == 0:
            rel.add(unpair(c))
        elif part == 1:
            x, v = unpair(c)
            t, tag = divmod(v, 3)
            if x in behaviors:
                raise PosetError(f"element {x} annotated twice", x=x)
            behaviors[x] = (_TAGS[tag], t)
        elif part == 2 and c <= 3:
            meta.add(c)
        else:
            raise PosetError(f"code {z} is not part of the instance encoding", code=z)
    universe = sorted(x for x, y in rel if x == y)
    P = validate_poset(universe, rel)
    ann = None
    if meta & {0, 1}:
        if meta >= {0, 1}:
            raise PosetError("annotation marked both small and large")
        ann = StableAnnotation(behaviors, TypeTag.SMALL if 0 in meta else TypeTag.LARGE)
    elif behaviors:
        raise PosetError("annotation entries without a type marker")
    if meta >= {2, 3}:
        raise PosetError("two type flags")
    flag = Behavior.SMALL if 2 in meta else Behavior.LARGE if 3 in meta else None
    return ProblemInstance(P, ann, flag)


def code_bound(width: int) -> int:
    """Strict upper bound on codes of instances with universe and points below ``width``."""
    return 4 * pair(width, 3 * width + 2) + 4


# -- players -----------------------------------------------------------------

Strategy = Callable[[frozenset], Optional[frozenset]]


class Adversary(Protocol):
    def opening(self) -> ProblemInstance: ...

    def respond(self, kind: ProblemKind, inst: ProblemInstance) -> Optional[frozenset]: ...


@dataclass
class BruteForceAdversary:
    """Player I opening with a fixed instance and answering by brute force."""

    instance: ProblemInstance
    policy: SizePolicy = DEFAULT_POLICY

    def opening(self) -> ProblemInstance:
        return self.instance

    def respond(self, kind: ProblemKind, inst: ProblemInstance) -> Optional[frozenset]:
        sol = brute_force_solve(kind, inst, self.policy)
        return None if sol is None else sol.elements


def brute_force_adversary(instance: ProblemInstance,
                          policy: SizePolicy = DEFAULT_POLICY) -> BruteForceAdversary:
    return BruteForceAdversary(instance, policy)


def cac_via_omega_strategy() -> Strategy:
    """Play ``<=+``; claim a chain, or replay ``<=-`` on the antichain and claim that."""

    def strategy(Z: frozenset) -> Optional[frozenset]:
        moves = decode_join(Z)
        P = decode_instance(moves[0]).poset
        plus = split_plus(P)
        if len(moves) == 1:
            return join2(NEW_INSTANCE, encode_instance(ProblemInstance(plus)))
        X = moves[1]
        if len(moves) == 2:
            if is_chain(plus, X):
                return join2(CLAIM, X)
            minus = restrict(split_minus(P), X)
            return join2(NEW_INSTANCE, encode_instance(ProblemInstance(minus)))
        return join2(CLAIM, moves[2])

    return strategy


def machine_strategy(M: OracleMachine, upto: int) -> Strategy:
    """Player II move = ``{w < upto : M^Z(w) = 1}``; divergence means no move."""

    def strategy(Z: frozenset) -> Optional[frozenset]:
        try:
            return defined_set(M, Z, upto)
        except MachineDiverged:
            return None

    return strategy


@dataclass
class GameRound:
    round: int
    claim: bool
    payload: list[int]
    answer: Optional[list[int]] = None

    def to_json(self) -> dict:
        return {"round": self.round, "v": [1] if self.claim else [],
                "y": self.payload, "player_i_answer": self.answer}


@dataclass
class GameTranscript:
    p_kind: ProblemKind
    q_kind: ProblemKind
    opening: ProblemInstance
    rounds: list[GameRound] = field(default_factory=list)
    verdict: str = "exhausted"
    reason: str = ""
    solution: Optional[frozenset] = None

    @property
    def ii_wins(self) -> bool:
        return self.verdict.startswith("II-wins")

    @property
    def winning_round(self) -> Optional[int]:
        return int(self.verdict.rsplit("-", 1)[1]) if self.ii_wins else None


def play_reduction_game(p_kind: ProblemKind, q_kind: ProblemKind, adversary: Adversary,
                        strategy: Strategy, max_rounds: int = DEFAULT_MAX_ROUNDS,
                        policy: SizePolicy = DEFAULT_POLICY) -> GameTranscript:
    """Run the game for at most ``max_rounds`` Player II moves.

    Round ``r`` is Player II's ``r``-th move plus Player I's reply. Verdicts:
    ``II-wins-at-round-r``, ``I-wins`` (bad instance, failed claim or no
    move), ``I-cannot-move`` (a Q-instance with no solution at this size) and
    ``exhausted``.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    p_kind, q_kind = ProblemKind(p_kind), ProblemKind(q_kind)
    X0 = adversary.opening()
    try:
        validate_instance(p_kind, X0, policy)
    except CacLabError as exc:
        raise MalformedMove(0, f"opening is not a {p_kind.value} instance: {exc}") from exc
    tr = GameTranscript(p_kind, q_kind, X0)
    moves = [encode_instance(X0)]
    for r in range(1, max_rounds + 1):
        out = strategy(n_fold_join(moves))
        if out is None:
            tr.verdict, tr.reason = "I-wins", f"no Player II move in round {r}"
            return tr
        V, Y = split2(out)
        if V not in (CLAIM, NEW_INSTANCE):
            raise MalformedMove(r, f"V = {sorted(V)} is neither empty nor {{1}}")
        step = GameRound(r, V == CLAIM, sorted(Y))
        tr.rounds.append(step)
        if step.claim:
            try:
                sol = classify_solution(X0.poset, Y)
                if sol is None:
                    raise CacLabError(f"{sorted(Y)} is neither a chain nor an antichain")
                verify_solution(p_kind, X0, sol, policy)
            except CacLabError as exc:
                tr.verdict, tr.reason = "I-wins", f"claim rejected: {exc}"
                return tr
            tr.verdict, tr.solution = f"II-wins-at-round-{r}", frozenset(Y)
            return tr
        try:
            inst = decode_instance(Y)
            validate_instance(q_kind, inst, policy)
        except CacLabError as exc:
            tr.verdict, tr.reason = "I-wins", f"invalid {q_kind.value} instance: {exc}"
            return tr
        answer = adversary.respond(q_kind, inst)
        if answer is None:
            tr.verdict, tr.reason = "I-cannot-move", f"round {r} instance has no solution"
            return tr
        sol = classify_solution(inst.poset, answer)
        if sol is None:
            raise MalformedMove(r, "Player I answered with a non-solution")
        try:
            verify_solution(q_kind, inst, sol, policy)
        except CacLabError as exc:
            raise MalformedMove(r, f"Player I answered with a non-solution: {exc}") from exc
        step.answer = sorted(answer)
        moves.append(frozenset(answer))
    return tr


# -- reduction witnesses -----------------------------------------------------

REDUCTIONS = ("sW", "W", "sc", "c")
MachineOrChoice = Union[OracleMachine, Callable[[ProblemInstance], OracleMachine]]


@dataclass
class ReductionReport:
    reduction: str
    instances: int = 0
    solutions: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _pick(M: MachineOrChoice, inst: ProblemInstance, uniform: bool) -> OracleMachine:
    if isinstance(M, OracleMachine):
        return M
    if uniform:
        raise TypeError("uniform reductions take a single machine, not a per-instance choice")
    return M(inst)


def check_reduction_witness(reduction: str, p_kind: ProblemKind, q_kind: ProblemKind,
                            forward: MachineOrChoice, backward: MachineOrChoice,
                            corpus: Iterable[ProblemInstance],
                            policy: SizePolicy = DEFAULT_POLICY,
                            forward_bound: Optional[int] = None) -> ReductionReport:
    """Check a finite witness to one of the four reductions on every instance.

    ``sW`` and ``W`` use one forward and one backward machine; ``sc`` and
    ``c`` may choose them per instance. The backward machine reads ``Y_Q``
    alone for the strong variants and ``X_P ⊕ Y_Q`` otherwise. Each Q-solution
    of size at least ``min_size`` is pulled back and checked against the
    P-instance; divergence raises :class:`MachineDiverged`.
    """
    if reduction not in REDUCTIONS:
        raise ValueError(f"reduction must be one of {REDUCTIONS}")
    uniform = reduction in ("sW", "W")
    strong = reduction in ("sW", "sc")
    p_kind, q_kind = ProblemKind(p_kind), ProblemKind(q_kind)
    rep = ReductionReport(reduction)
    for idx, X in enumerate(corpus):
        validate_instance(p_kind, X, policy)
        rep.instances += 1
        code = encode_instance(X)
        width = (max(X.universe) + 2) if X.universe else 1
        fwd = _pick(forward, X, uniform)
        q_code = defined_set(fwd, code, forward_bound or code_bound(width))
        try:
            Yq = decode_instance(q_code)
            validate_instance(q_kind, Yq, policy)
        except CacLabError as exc:
            rep.failures.append({"instance": idx, "stage": "forward", "error": exc.code})
            continue
        bwd = _pick(backward, X, uniform)
        for sol in enumerate_solutions(Yq, policy):
            rep.solutions += 1
            oracle = sol.elements if strong else join2(code, sol.elements)
            out = defined_set(bwd, oracle, width)
            try:
                got = classify_solution(X.poset, out)
                if got is None:
                    raise NotASolution(f"{sorted(out)} is neither a chain nor an antichain")
                verify_solution(p_kind, X, got, policy)
            except CacLabError as exc:
                rep.failures.append({"instance": idx, "stage": "backward",
                                     "q_solution": sol.sorted(), "output": sorted(out),
                                     "error": exc.code})
    return rep


def check_sw_reduction_witness(p_kind, q_kind, forward, backward, corpus,
                               policy: SizePolicy = DEFAULT_POLICY, **kw) -> ReductionReport:
    return check_reduction_witness("sW", p_kind, q_kind, forward, backward, corpus, policy, **kw)
