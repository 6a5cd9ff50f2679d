import sys
from fractions import Fraction

import pytest

from vmtree.ratios import UNBOUNDED
from vmtree.topology import make_topology, path_edges


def naive_congestion(t, r, assignment):
    """Reference evaluator: walk every request edge's path with Fractions."""
    load = {}
    for vm, bw in r.uplinks:
        for e in path_edges(t, assignment[vm], t.root):
            load[e] = load.get(e, 0) + bw
    for a, b, bw in r.chatter:
        for e in path_edges(t, assignment[a], assignment[b]):
            load[e] = load.get(e, 0) + bw
    best = Fraction(0)
    for e, f in load.items():
        c = t.capacity(e)
        if c is not UNBOUNDED:
            best = max(best, f / c)
    return best


def naive_flow(r, mask):
    inside = {vm for i, vm in enumerate(r.vms) if mask >> i & 1}
    tot = sum((bw for vm, bw in r.uplinks if vm in inside), Fraction(0))
    tot += sum((bw for a, b, bw in r.chatter if (a in inside) != (b in inside)), Fraction(0))
    return tot


@pytest.fixture
def chain():
    return make_topology("g", [("s", "g", "10", 0), ("leaf", "s", "10", 1)])


@pytest.fixture
def two_subtrees():
    return make_topology("g", [
        ("a", "g", "4", 0), ("b", "g", "4", 0),
        ("la", "a", "10", 1), ("lb", "b", "10", 1),
    ])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
