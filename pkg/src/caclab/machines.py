"""Use-bounded 0-1 functionals of a finite oracle.

A machine sees only ``oracle ∩ [0, use_bound)``; an undefined computation
returns ``None`` (divergence). Built-in machines are rules over the truncated
oracle, file machines are literal lookup tables.
"""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import MachineDiverged, UnknownSpec, UseConsistencyViolation

DEFAULT_USE_BOUND = 64
DIVERGE = None

Rule = Callable[[frozenset, int], Optional[int]]
TableKey = tuple[int, frozenset]


@dataclass(frozen=True)
class OracleMachine:
    use_bound: int
    rule: Rule = field(compare=False, repr=False)
    name: str = "anonymous"
    table: Optional[Mapping[TableKey, int]] = field(default=None, compare=False, repr=False)

    def __call__(self, oracle: Iterable[int], w: int) -> Optional[int]:
        return evaluate(self, oracle, w)


def evaluate(M: OracleMachine, oracle: Iterable[int], w: int) -> Optional[int]:
    """0, 1, or ``None`` when the computation diverges."""
    seen = frozenset(x for x in oracle if x < M.use_bound)
    return M.rule(seen, w)


def defined_set(M: OracleMachine, oracle: Iterable[int], upto: int) -> frozenset[int]:
    """``{w < upto : M^oracle(w) = 1}``; raises if any value below diverges."""
    oracle = frozenset(oracle)
    out = set()
    for w in range(upto):
        v = evaluate(M, oracle, w)
        if v is None:
            raise MachineDiverged(f"{M.name} diverges at {w}", input=w)
        if v == 1:
            out.add(w)
    return frozenset(out)


def table_machine(entries: Iterable[tuple[int, Iterable[int], int]], use_bound: int,
                  name: str = "table") -> OracleMachine:
    """Machine from literal ``(w, oracle members, output)`` rows.

    Rows that mention oracle members at or beyond the use bound, or that give
    one key two outputs, break use-consistency and are rejected.
    """
    table: dict[TableKey, int] = {}
    for row in entries:
        w, members, out = row
        members = frozenset(int(m) for m in members)
        if any(m >= use_bound or m < 0 for m in members):
            raise UseConsistencyViolation(f"row for w={w} reads oracle past use {use_bound}",
                                          w=w, oracle=members)
        if out not in (0, 1):
            raise UseConsistencyViolation(f"row for w={w} outputs {out!r}", w=w)
        key = (int(w), members)
        if table.setdefault(key, out) != out:
            raise UseConsistencyViolation(f"conflicting outputs for w={w}", w=w, oracle=members)

    def rule(seen: frozenset, w: int) -> Optional[int]:
        return table.get((w, seen))

    return OracleMachine(use_bound, rule, name, table)


def set_machine(fn: Callable[[frozenset], Iterable[int]], use_bound: int,
                name: str = "set-map") -> OracleMachine:
    """Characteristic function of ``fn(oracle)``, total in ``w``."""
    cache: dict[frozenset, frozenset] = {}

    def rule(seen: frozenset, w: int) -> int:
        if seen not in cache:
            cache[seen] = frozenset(fn(seen))
        return int(w in cache[seen])

    return OracleMachine(use_bound, rule, name)


def _bounded(u: int, body: Callable[[frozenset, int], int]) -> Rule:
    def rule(seen: frozenset, w: int) -> Optional[int]:
        return body(seen, w) if 0 <= w < u else None
    return rule


def builtin(name: str, use_bound: int = DEFAULT_USE_BOUND) -> OracleMachine:
    """Named machines, all defined exactly on ``w < use_bound``.

    ``constant-0``, ``constant-1``, ``membership``, ``parity``,
    ``threshold-k``, ``membership-of-{a,b,...}`` (ignores the oracle) and
    ``witness-at-k`` (1 at ``w = k`` once the oracle is nonempty).
    """
    u = use_bound
    spec = name.strip()
    if spec == "constant-0":
        return OracleMachine(u, _bounded(u, lambda o, w: 0), spec)
    if spec in ("constant-1", "immediate-1"):
        return OracleMachine(u, _bounded(u, lambda o, w: 1), spec)
    if spec == "membership":
        return OracleMachine(u, _bounded(u, lambda o, w: int(w in o)), spec)
    if spec in ("parity", "parity-of-element-count"):
        return OracleMachine(u, _bounded(u, lambda o, w: len(o) % 2), spec)
    m = re.fullmatch(r"threshold-(\d+)", spec)
    if m:
        k = int(m.group(1))
        return OracleMachine(u, _bounded(u, lambda o, w: int(len(o) >= k)), spec)
    m = re.fullmatch(r"membership-of-\{?([\d,\s]*)\}?", spec)
    if m:
        chosen = frozenset(int(v) for v in re.findall(r"\d+", m.group(1)))
        return OracleMachine(u, _bounded(u, lambda o, w: int(w in chosen)), spec)
    m = re.fullmatch(r"witness-at-(\d+)", spec)
    if m:
        w0 = int(m.group(1))
        return OracleMachine(u, _bounded(u, lambda o, w: int(w == w0 and bool(o))), spec)
    raise UnknownSpec(f"unknown machine spec {name!r}", spec=name)


def machine_from_json(doc: Mapping) -> OracleMachine:
    u = int(doc.get("use_bound", DEFAULT_USE_BOUND))
    if "builtin" in doc:
        return builtin(doc["builtin"], u)
    if "entries" in doc:
        return table_machine(doc["entries"], u, doc.get("name", "table"))
    raise UnknownSpec("machine document needs 'entries' or 'builtin'")


def machine_to_json(M: OracleMachine) -> dict:
    if M.table is None:
        return {"builtin": M.name, "use_bound": M.use_bound}
    rows = sorted((w, sorted(o), out) for (w, o), out in M.table.items())
    return {"name": M.name, "use_bound": M.use_bound, "entries": [list(r) for r in rows]}


def load_machines(doc: Union[Mapping, Sequence]) -> list[OracleMachine]:
    if isinstance(doc, Mapping) and "machines" in doc:
        return [machine_from_json(d) for d in doc["machines"]]
    if isinstance(doc, Mapping):
        return [machine_from_json(doc)]
    return [machine_from_json(d) for d in doc]


_SPLIT = re.compile(r"[;\s]+|,(?![^{]*\})")


def machine_family(spec: Union[str, Sequence[str], Path],
                   use_bound: int = DEFAULT_USE_BOUND) -> list[OracleMachine]:
    """Deterministic machine list from names or a machine file.

    A string is either a path to a JSON machine file or names separated by
    ``;``, whitespace, or commas outside braces.
    """
    if isinstance(spec, Path) or (isinstance(spec, str) and spec.endswith(".json")):
        path = Path(spec)
        if not path.exists():
            raise UnknownSpec(f"machine file {path} not found")
        return load_machines(json.loads(path.read_text()))
    names = [s for s in _SPLIT.split(spec) if s] if isinstance(spec, str) else list(spec)
    return [builtin(n, use_bound) for n in names]


def random_table_machine(rng: random.Random, use_bound: int = 8, w_range: int = 16,
                         p_one: float = 0.02, p_zero: float = 0.9,
                         name: Optional[str] = None) -> OracleMachine:
    """Random lookup table over every oracle below ``use_bound``.

    Each key outputs 1 with probability ``p_one``, 0 with ``p_zero``, and is
    left undefined otherwise.
    """
    rows = []
    for bits in range(1 << use_bound):
        members = [i for i in range(use_bound) if bits >> i & 1]
        for w in range(w_range):
            r = rng.random()
            if r < p_one:
                rows.append((w, members, 1))
            elif r < p_one + p_zero:
                rows.append((w, members, 0))
    return table_machine(rows, use_bound, name or "random-table")
