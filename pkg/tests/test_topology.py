from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vmtree.ratios import UNBOUNDED
from vmtree.topogen import random_tree, rng_for
from vmtree.topology import (BinaryTopology, NetworkNode, Topology, UnknownNodeError,
                             dump_topology, ensure_valid, load_topology, make_topology,
                             path_edges, to_binary, validate_topology)


def _finite_path(t, u, v):
    return sorted((e, t.capacity(e)) for e in path_edges(t, u, v)
                  if t.capacity(e) is not UNBOUNDED)


def test_minimal_path_is_valid(chain):
    assert validate_topology(chain) == []
    assert list(chain.leaves) == ["leaf"]


def test_gateway_alone_has_no_servers():
    t = Topology((NetworkNode("g"),), "g")
    assert any("no server leaves" in v for v in validate_topology(t))


def test_two_cycle_detected():
    t = Topology((NetworkNode("g"), NetworkNode("a", "b", Fraction(1)),
                  NetworkNode("b", "a", Fraction(1)), NetworkNode("s", "g", Fraction(1), 1)), "g")
    assert any("cycle detected" in v for v in validate_topology(t))


@pytest.mark.parametrize("rows, needle", [
    ([("s", "g", "0", 1)], "nonpositive capacity"),
    ([("s", "g", "-1", 1)], "nonpositive capacity"),
    ([("a", "g", "1", 2), ("s", "a", "1", 1)], "vm_slots on internal node"),
    ([("s", "nowhere", "1", 1)], "unknown parent"),
    ([("s", "g", "1", 1), ("s", "g", "1", 1)], "duplicate node id"),
])
def test_violations(rows, needle):
    t = make_topology("g", rows)
    found = validate_topology(t)
    assert any(needle in v for v in found), found


def test_multiple_roots_and_disconnected():
    nodes = (NetworkNode("g"), NetworkNode("h"), NetworkNode("s", "g", Fraction(1), 1),
             NetworkNode("x", "h", Fraction(1), 1))
    found = validate_topology(Topology(nodes, "g"))
    assert any("multiple roots" in v for v in found)
    assert any("disconnected" in v for v in found)


def test_ensure_valid_raises():
    with pytest.raises(ValueError):
        ensure_valid(make_topology("g", [("s", "g", "0", 1)]))


def test_star_binarization():
    t = make_topology("g", [(f"l{i}", "g", str(i), 1) for i in range(1, 5)])
    b = to_binary(t)
    assert isinstance(b, BinaryTopology)
    assert len(b.nodes) <= 10
    assert all(len(c) <= 2 for c in b.children.values())
    for i in range(1, 5):
        assert b.capacity(f"l{i}") == i
    synth = [n for n in b.nodes if n.synthetic]
    assert 1 <= len(synth) <= 3
    assert all(n.parent_capacity is UNBOUNDED for n in synth)
    assert set(b.provenance.values()) == {"g"}
    # first ceil(d/2) children go left
    left, right = b.children["g"]
    assert set(b.children[left]) == {"l1", "l2"}
    assert set(b.children[right]) == {"l3", "l4"}


def test_binary_input_unchanged(two_subtrees):
    b = to_binary(two_subtrees)
    assert [n for n in b.nodes] == list(two_subtrees.nodes)
    assert to_binary(b) is b


def test_path_edges(two_subtrees):
    t = make_topology("g", [("a", "g", "4", 0), ("l1", "a", "1", 1), ("l2", "a", "1", 1)])
    assert path_edges(t, "l1", "l1") == []
    assert path_edges(t, "l1", "l2") == ["l1", "l2"]
    assert path_edges(t, "l1", "g") == ["l1", "a"]
    assert path_edges(t, "g", "l2") == ["a", "l2"]
    with pytest.raises(UnknownNodeError):
        path_edges(t, "l1", "zz")


def test_json_roundtrip(tmp_path):
    t = make_topology("g", [("cs", "g", "unbounded", 0), ("s1", "cs", "2.5", 2),
                            ("s2", "cs", "1/3", 1)])
    p = tmp_path / "t.json"
    dump_topology(t, p)
    u = load_topology(p)
    assert u.nodes == t.nodes and u.root == t.root
    assert u.capacity("s2") == Fraction(1, 3)


def test_node_count_bound_random_trees():
    rng = rng_for(2024)
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        t = random_tree(n, rng, max_degree=16)
        b = to_binary(t)
        assert len(b.nodes) <= 2 * n
        assert max(len(c) for c in b.children.values()) <= 2


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2 ** 32 - 1))
def test_binarization_preserves_finite_paths(n, seed):
    rng = rng_for(seed)
    t = random_tree(n, rng, max_degree=8)
    b = to_binary(t)
    assert validate_topology(b) == []
    assert b.leaves == t.leaves or sorted(b.leaves) == sorted(t.leaves)
    assert {u: b.node(u).vm_slots for u in b.leaves} == {u: t.node(u).vm_slots for u in t.leaves}
    ids = [nd.id for nd in t.nodes]
    pick = rng.choice(len(ids), size=min(6, len(ids)), replace=False)
    for i in pick:
        for j in pick:
            assert _finite_path(t, ids[i], ids[j]) == _finite_path(b, ids[i], ids[j])
    # applying twice keeps the finite edge multiset and the leaves
    bb = to_binary(b)
    fin = lambda x: sorted(str(nd.parent_capacity) for nd in x.nodes
                           if nd.parent_capacity not in (None, UNBOUNDED))
    assert fin(bb) == fin(t) and sorted(bb.leaves) == sorted(t.leaves)
