"""Command line for the caclab toolkit.

Exit codes: 0 on success, 1 when a check fails, 2 on malformed input.
Failures print a JSON error object on stdout.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import jsonio
from .errors import (
    CacLabError,
    MalformedUniverse,
    PosetError,
    UnknownSpec,
    UseConsistencyViolation,
)
from .forcing import EMPTY_CONDITION, build_diagonal_poset, unmet_requirements
from .games import (
    DEFAULT_MAX_ROUNDS,
    brute_force_adversary,
    cac_via_omega_strategy,
    machine_strategy,
    play_reduction_game,
)
from .generate import gen_instance
from .machines import machine_family
from .poset import TypeTag, classify_solution, dual_order
from .problems import (
    DEFAULT_POLICY,
    ProblemInstance,
    ProblemKind,
    SizePolicy,
    brute_force_solve,
    validate_instance,
    verify_solution,
)
from .reductions import (
    append_type_flag,
    build_leq_q,
    compose_cac_via_omega_traced,
    greedy_antichain,
    greedy_chain,
    split_minus,
    split_plus,
    stable_thinning,
    to_small_type,
)
from .trees import build_extension_tree, check_tree_lemma, label_tree, labeled_subtree

MALFORMED = (jsonio.MalformedDocument, PosetError, MalformedUniverse, UnknownSpec,
             UseConsistencyViolation)


class Failed(Exception):
    """A check ran to completion and said no."""

    def __init__(self, doc: dict):
        self.doc = doc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("CACLAB_SEED", "0"))


def _policy(args, doc_policy: Optional[SizePolicy] = None) -> SizePolicy:
    base = doc_policy or DEFAULT_POLICY
    return base.with_min_size(args.min_size) if args.min_size is not None else base


def _read(path: Optional[str]):
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    return jsonio.load_text(text)


def _emit(args, doc, dot: Optional[str] = None) -> None:
    text = dot if (dot is not None and args.format == "dot") else jsonio.dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_instance(args, doc=None):
    doc = _read(args.input) if doc is None else doc
    inst, kind, policy = jsonio.instance_from_json(doc)
    _, normalized = jsonio.poset_from_json(doc)
    kind = ProblemKind(args.kind) if args.kind else (kind or ProblemKind.CAC)
    return inst, kind, _policy(args, policy), normalized


def cmd_gen(args) -> int:
    rng = random.Random(_seed(args))
    policy = _policy(args)
    inst = gen_instance(ProblemKind(args.kind), args.size, rng, args.type, policy)
    _emit(args, jsonio.instance_to_json(inst, args.kind, policy), jsonio.poset_to_dot(inst.poset))
    return 0


def cmd_check(args) -> int:
    doc = _read(args.input)
    if isinstance(doc, dict) and "assign" in doc:
        cond = jsonio.condition_from_json(doc, args.strict_isolated)
        _emit(args, {"ok": True, "condition": jsonio.condition_to_json(cond)})
        return 0
    inst, kind, policy, normalized = _load_instance(args, doc)
    validate_instance(kind, inst, policy)
    out = {"ok": True, "kind": kind.value, "normalized": normalized}
    if args.solution:
        sol = jsonio.solution_from_json(_read(args.solution))
        verify_solution(kind, inst, sol, policy)
        out["solution"] = jsonio.solution_to_json(sol)
    _emit(args, out)
    return 0


def cmd_reduce(args) -> int:
    inst, kind, policy, _ = _load_instance(args)
    P = inst.poset
    op = args.op
    if op in ("split-plus", "split-minus", "dualize"):
        Q = {"split-plus": split_plus, "split-minus": split_minus, "dualize": dual_order}[op](P)
        _emit(args, jsonio.instance_to_json(ProblemInstance(Q)), jsonio.poset_to_dot(Q))
        return 0
    if op == "append-type":
        _emit(args, jsonio.instance_to_json(append_type_flag(inst), ProblemKind.SCAC_TYPE))
        return 0
    if op == "to-small-type":
        _emit(args, jsonio.instance_to_json(to_small_type(inst), ProblemKind.SCAC_SMALL))
        return 0
    if op == "compose":
        trace = compose_cac_via_omega_traced(P, policy=policy)
        out = jsonio.solution_to_json(trace.result)
        if args.trace:
            out["trace"] = {"stage1": jsonio.solution_to_json(trace.first),
                            "stage2": None if trace.second is None
                            else jsonio.solution_to_json(trace.second)}
        _emit(args, out)
        return 0
    if op == "greedy-chain":
        start = args.start if args.start is not None else (P.universe[0] if P.universe else 0)
        _emit(args, jsonio.solution_to_json(greedy_chain(P, start)))
        return 0
    if op == "greedy-antichain":
        _emit(args, jsonio.solution_to_json(greedy_antichain(P)))
        return 0
    if op == "thin":
        type_tag = TypeTag(args.type) if args.type else (
            inst.annotation.type_tag if inst.annotation else TypeTag.SMALL)
        if args.solution:
            X = jsonio.solution_from_json(_read(args.solution))
        else:
            X = brute_force_solve(ProblemKind.OMEGA_CAC, ProblemInstance(build_leq_q(P, type_tag)),
                                  policy)
            if X is None:
                raise Failed({"ok": False, "error": "no_solution",
                              "message": "the <=_Q instance has no solution at this size"})
        Y, trace = stable_thinning(P, type_tag, X, policy)
        out = {"input": jsonio.solution_to_json(X), "elements": sorted(Y.elements),
               "kind": Y.kind.value}
        got = classify_solution(P, Y.elements)
        out["verifies"] = got is not None and len(Y.elements) >= policy.min_size
        if args.trace:
            out["trace"] = {"stages": [list(s) for s in trace.stages],
                            "bound_holds": trace.bound_holds()}
        _emit(args, out)
        return 0 if out["verifies"] else 1
    raise UnknownSpec(f"unknown op {op!r}")


def cmd_game(args) -> int:
    inst, _, policy, _ = _load_instance(args)
    if args.strategy == "builtin-cac":
        strategy = cac_via_omega_strategy()
    else:
        if not args.machines:
            raise UnknownSpec("--strategy file needs --machines")
        M = machine_family(args.machines)[0]
        strategy = machine_strategy(M, M.use_bound)
    tr = play_reduction_game(args.p_kind, args.q_kind, brute_force_adversary(inst, policy),
                             strategy, args.max_rounds, policy)
    _emit(args, jsonio.transcript_to_json(tr))
    return 0 if tr.ii_wins else 1


def cmd_force(args) -> int:
    machines = machine_family(args.machines) if args.machines else []
    side = TypeTag(args.side)
    result = build_diagonal_poset(EMPTY_CONDITION, machines, args.stages, side, pad=args.pad)
    doc = jsonio.diagonal_to_json(result)
    doc["unmet"] = unmet_requirements(result, machines)
    if args.log:
        Path(args.log).write_text(jsonio.dumps(result.log))
    _emit(args, doc, jsonio.poset_to_dot(result.poset))
    return 0 if not doc["unmet"] else 1


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise UnknownSpec(f"expected comma-separated naturals, got {text!r}") from exc


def cmd_tree(args) -> int:
    delta = machine_family(args.machine)[0]
    T = build_extension_tree(_ints(args.E), _ints(args.I), delta, args.n, args.w_max)
    lab = label_tree(T, args.kappa)
    TL = labeled_subtree(T, lab)
    doc = jsonio.tree_to_json(T, lab, TL)
    rep = check_tree_lemma(T, lab)
    doc["lemma"] = {"item1": rep.item1, "item1_surrogate": rep.item1_surrogate,
                    "item2": rep.item2, "item3": rep.item3, "item4": rep.item4,
                    "prefix_closed": rep.prefix_closed, "labels": rep.labels}
    _emit(args, doc, jsonio.tree_to_dot(T, lab, TL))
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="caclab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", help="input JSON (default stdin)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, help="RNG seed (default $CACLAB_SEED or 0)")
    common.add_argument("--min-size", type=int, help="finite stand-in for 'infinite'")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    kinds = [k.value for k in ProblemKind]
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="random instance")
    p.add_argument("--kind", choices=kinds, default="CAC")
    p.add_argument("--size", type=int, default=6)
    p.add_argument("--type", choices=("small", "large"))
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="validate an instance, solution or condition")
    p.add_argument("--kind", choices=kinds)
    p.add_argument("--solution", help="solution JSON to verify against the instance")
    p.add_argument("--strict-isolated", action="store_true",
                   help="apply the I clause to y = x as well")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", parents=[common], help="run a reduction")
    p.add_argument("--kind", choices=kinds)
    p.add_argument("--op", required=True,
                   choices=("split-plus", "split-minus", "compose", "thin", "greedy-chain",
                            "greedy-antichain", "dualize", "append-type", "to-small-type"))
    p.add_argument("--type", choices=("small", "large"))
    p.add_argument("--solution", help="<=_Q solution to thin (default: brute force)")
    p.add_argument("--start", type=int, help="greedy chain start element")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("game", parents=[common], help="play a reduction game")
    p.add_argument("--p-kind", choices=kinds, default="CAC")
    p.add_argument("--q-kind", choices=kinds, default="OMEGA_CAC")
    p.add_argument("--strategy", choices=("builtin-cac", "file"), default="builtin-cac")
    p.add_argument("--machines", help="machine file for --strategy file")
    p.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    p.add_argument("--kind", choices=kinds)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("force", parents=[common], help="diagonal construction")
    p.add_argument("--machines", help="machine file or names such as 'constant-1;threshold-2'")
    p.add_argument("--stages", type=int, default=12)
    p.add_argument("--side", choices=("small", "large"), default="small")
    p.add_argument("--pad", type=int, default=0)
    p.add_argument("--log", help="write the stage log here")
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("tree", parents=[common], help="extension tree and labeling")
    p.add_argument("--E", default="", help="comma-separated naturals")
    p.add_argument("--I", required=True, help="comma-separated naturals")
    p.add_argument("--machine", "--machines", dest="machine", required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--w-max", type=int)
    p.add_argument("--kappa", type=int, default=2)
    p.set_defaults(func=cmd_tree)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Failed as exc:
        sys.stdout.write(jsonio.dumps(exc.doc))
        return 1
    except MALFORMED as exc:
        sys.stdout.write(jsonio.dumps({"ok": False, **exc.to_json()}))
        return 2
    except CacLabError as exc:
        sys.stdout.write(jsonio.dumps({"ok": False, **exc.to_json()}))
        return 1
    except (OSError, ValueError, KeyError, TypeError) as exc:
        sys.stdout.write(jsonio.dumps({"ok": False, "error": "malformed_input",
                                       "message": str(exc), "details": {}}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
