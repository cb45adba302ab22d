import json
import random
from itertools import combinations

import pytest

from caclab.errors import MachineDiverged, UnknownSpec, UseConsistencyViolation
from caclab.machines import (
    builtin,
    defined_set,
    evaluate,
    load_machines,
    machine_family,
    machine_to_json,
    random_table_machine,
    set_machine,
    table_machine,
)

BUILTINS = ["constant-0", "constant-1", "membership", "parity", "threshold-2",
            "membership-of-{0,1,2}", "witness-at-3"]


def test_membership_examples():
    M = builtin("membership")
    assert M.use_bound == 64
    assert evaluate(M, {3}, 3) == 1
    assert evaluate(M, {3}, 7) == 0


def test_empty_table_diverges():
    M = table_machine([], 4)
    assert all(evaluate(M, set(), w) is None for w in range(10))


def test_constant_one_defined_below_use():
    M = builtin("constant-1")
    assert all(evaluate(M, {5, 9}, w) == 1 for w in range(64))
    assert evaluate(M, set(), 64) is None


def test_threshold_counts_below_use_only():
    M = builtin("threshold-2", use_bound=8)
    assert evaluate(M, {1, 2}, 0) == 1
    assert evaluate(M, {1}, 0) == 0
    assert evaluate(M, {1, 100}, 0) == 0


def test_family_parsing():
    fam = machine_family("constant-1; membership-of-{0,1,2} threshold-3")
    assert [M.name for M in fam] == ["constant-1", "membership-of-{0,1,2}", "threshold-3"]
    assert machine_family(["parity"])[0].name == "parity"
    with pytest.raises(UnknownSpec):
        machine_family("halting")


def test_inconsistent_use_rejected_at_load(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"use_bound": 2, "entries": [[0, [5], 1]]}))
    with pytest.raises(UseConsistencyViolation):
        machine_family(str(path))
    with pytest.raises(UseConsistencyViolation):
        table_machine([(0, [1], 1), (0, [1], 0)], 2)


def test_table_round_trip(tmp_path):
    M = random_table_machine(random.Random(3), use_bound=4, w_range=5)
    doc = machine_to_json(M)
    again = load_machines(doc)[0]
    for bits in range(16):
        oracle = {i for i in range(4) if bits >> i & 1}
        for w in range(6):
            assert evaluate(M, oracle, w) == evaluate(again, oracle, w)
    path = tmp_path / "family.json"
    path.write_text(json.dumps({"machines": [doc, {"builtin": "parity", "use_bound": 8}]}))
    assert [m.name for m in machine_family(str(path))] == ["random-table", "parity"]


def test_defined_set_and_divergence():
    assert defined_set(builtin("membership", 8), {1, 3}, 8) == {1, 3}
    with pytest.raises(MachineDiverged):
        defined_set(builtin("membership", 8), set(), 9)


def test_set_machine():
    M = set_machine(lambda o: {x + 1 for x in o}, 16)
    assert defined_set(M, {0, 4}, 10) == {1, 5}


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_are_use_consistent_exhaustively(name):
    u = 8
    M = builtin(name, u)
    noise = [set(), {8}, {9, 30}]
    for r in range(u + 1):
        for base in combinations(range(u), r):
            for w in range(u + 2):
                vals = {evaluate(M, set(base) | extra, w) for extra in noise}
                assert len(vals) == 1
                assert evaluate(M, set(base), w) == evaluate(M, set(base), w)


def test_random_tables_are_use_consistent():
    rng = random.Random(7)
    for _ in range(20):
        M = random_table_machine(rng, use_bound=5, w_range=6)
        for bits in range(32):
            base = {i for i in range(5) if bits >> i & 1}
            for w in range(6):
                assert evaluate(M, base, w) == evaluate(M, base | {5, 17}, w)
