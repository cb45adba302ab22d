"""JSON documents and DOT export.

Poset documents list every pair, reflexive ones included, in ascending
order. On load, missing reflexive pairs are added and the document is marked
``normalized``; nothing else is repaired.
"""
from __future__ import annotations

import json
import math
from typing import Any, Mapping, Optional

from .errors import CacLabError
from .forcing import Condition, DiagonalResult, validate_condition
from .games import GameTranscript
from .poset import (
    Behavior,
    FinitePoset,
    SolutionKind,
    SolutionSet,
    StableAnnotation,
    TypeTag,
    validate_poset,
)
from .problems import ProblemInstance, ProblemKind, SizePolicy
from .trees import INFINITY, ExtensionTree, LabeledSubtree, Labeling


class MalformedDocument(CacLabError):
    code = "malformed_document"


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _field(doc: Mapping, key: str):
    if not isinstance(doc, Mapping) or key not in doc:
        raise MalformedDocument(f"missing field {key!r}", field=key)
    return doc[key]


def poset_to_json(P: FinitePoset) -> dict:
    return {"universe": list(P.universe), "pairs": [list(p) for p in sorted(P.relation)]}


def poset_from_json(doc: Mapping) -> tuple[FinitePoset, bool]:
    """Load and validate a poset; the flag reports added reflexive pairs."""
    universe = _field(doc, "universe")
    try:
        pairs = {(int(x), int(y)) for x, y in _field(doc, "pairs")}
    except (TypeError, ValueError) as exc:
        raise MalformedDocument(f"pairs must be [x, y] lists: {exc}") from exc
    if not isinstance(universe, list):
        raise MalformedDocument("universe must be a list")
    missing = {(x, x) for x in universe if isinstance(x, int)} - pairs
    return validate_poset(universe, pairs | missing), bool(missing)


def annotation_to_json(ann: StableAnnotation) -> list:
    return [[x, tag.value, t] for x, (tag, t) in ann.items()]


def annotation_from_json(rows, type_tag) -> StableAnnotation:
    try:
        return StableAnnotation({int(x): (Behavior(tag), int(t)) for x, tag, t in rows},
                                TypeTag(type_tag))
    except (TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad annotation: {exc}") from exc


def instance_to_json(inst: ProblemInstance, kind: Optional[ProblemKind] = None,
                     policy: Optional[SizePolicy] = None) -> dict:
    doc = poset_to_json(inst.poset)
    if inst.annotation is not None:
        doc["annotation"] = annotation_to_json(inst.annotation)
        doc["type_tag"] = inst.annotation.type_tag.value
    if inst.type_flag is not None:
        doc["type_flag"] = inst.type_flag.value
    if kind is not None:
        doc["kind"] = ProblemKind(kind).value
    if policy is not None:
        doc["policy"] = {"min_size": policy.min_size}
    return doc


def instance_from_json(doc: Mapping) -> tuple[ProblemInstance, Optional[ProblemKind], Optional[SizePolicy]]:
    P, _ = poset_from_json(doc)
    ann = None
    if "annotation" in doc:
        ann = annotation_from_json(doc["annotation"], doc.get("type_tag", "small"))
    try:
        flag = Behavior(doc["type_flag"]) if doc.get("type_flag") is not None else None
        kind = ProblemKind(doc["kind"]) if "kind" in doc else None
    except ValueError as exc:
        raise MalformedDocument(str(exc)) from exc
    policy = None
    if "policy" in doc:
        policy = SizePolicy(min_size=int(doc["policy"].get("min_size", 3)))
    return ProblemInstance(P, ann, flag), kind, policy


def solution_to_json(sol: SolutionSet) -> dict:
    return {"elements": sol.sorted(), "kind": sol.kind.value}


def solution_from_json(doc: Mapping) -> SolutionSet:
    try:
        return SolutionSet(frozenset(int(x) for x in _field(doc, "elements")),
                           SolutionKind(_field(doc, "kind")))
    except (TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad solution: {exc}") from exc


def condition_to_json(c: Condition) -> dict:
    return {"pi": poset_to_json(c.pi),
            "assign": [[x, tag.value, t] for x, (tag, t) in enumerate(c.assign)]}


def condition_from_json(doc: Mapping, strict_isolated: bool = False) -> Condition:
    pi, _ = poset_from_json(_field(doc, "pi"))
    try:
        assign = {int(x): (Behavior(tag), int(t)) for x, tag, t in _field(doc, "assign")}
    except (TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad assignment: {exc}") from exc
    return validate_condition(pi, assign, strict_isolated)


def diagonal_to_json(result: DiagonalResult) -> dict:
    return {"condition": condition_to_json(result.condition),
            "poset": poset_to_json(result.poset),
            "annotation": annotation_to_json(result.annotation),
            "type_tag": result.annotation.type_tag.value,
            "log": result.log}


def transcript_to_json(tr: GameTranscript) -> dict:
    return {"p_kind": tr.p_kind.value, "q_kind": tr.q_kind.value,
            "opening": instance_to_json(tr.opening),
            "rounds": [r.to_json() for r in tr.rounds],
            "verdict": tr.verdict, "reason": tr.reason,
            "solution": None if tr.solution is None else sorted(tr.solution)}


def _label(v):
    return "inf" if v == INFINITY else v


def tree_to_json(T: ExtensionTree, lab: Optional[Labeling] = None,
                 TL: Optional[LabeledSubtree] = None) -> dict:
    nodes = []
    for alpha in T.nodes:
        node = {"alpha": list(alpha), "terminal": T.is_terminal(alpha)}
        wit = T.witness(alpha)
        if wit is not None:
            node["witness"] = {"F": sorted(wit[0]), "w": wit[1]}
        if lab is not None:
            node["label"] = _label(lab[alpha])
        if TL is not None:
            node["in_labeled_subtree"] = alpha in TL
        nodes.append(node)
    doc = {"E": sorted(T.E), "I": list(T.I), "n": T.n, "w_max": T.w_max,
           "machine": T.delta.name, "nodes": nodes}
    if lab is not None:
        doc["kappa"] = lab.kappa
    return doc


def tree_from_json_labels(doc: Mapping) -> dict:
    """Labels of a tree document keyed by node tuple (``inf`` back to INFINITY)."""
    return {tuple(n["alpha"]): (math.inf if n["label"] == "inf" else n["label"])
            for n in doc["nodes"] if "label" in n}


def poset_to_dot(P: FinitePoset, name: str = "P") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    lines += [f"  n{x} [label=\"{x}\"];" for x in P.universe]
    lines += [f"  n{x} -> n{y};" for x, y in P.covers()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_dot(T: ExtensionTree, lab: Optional[Labeling] = None,
                TL: Optional[LabeledSubtree] = None) -> str:
    def ident(alpha):
        return "r" + "_".join(map(str, alpha))

    lines = ["digraph T {"]
    for alpha in T.nodes:
        text = "λ" if not alpha else ",".join(map(str, alpha))
        if lab is not None:
            text += f"\\nlb={'∞' if lab[alpha] == INFINITY else lab[alpha]}"
        style = ", style=bold" if TL is not None and alpha in TL else ""
        shape = "box" if T.is_terminal(alpha) else "ellipse"
        lines.append(f"  {ident(alpha)} [label=\"{text}\", shape={shape}{style}];")
    for alpha in T.nodes:
        if alpha:
            lines.append(f"  {ident(alpha[:-1])} -> {ident(alpha)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_text(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc

