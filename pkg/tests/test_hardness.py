from fractions import Fraction

import pytest

from vmtree.dp_solver import evaluate, solve
from vmtree.hardness import (HardnessError, ThreePartitionInstance, find_equal_sum_partition,
                             find_three_partition, gen_unweighted_tree, gen_weighted_path,
                             is_three_partition, star_multiplier)


def _tp(S, B, m=2, **kw):
    return ThreePartitionInstance(m, tuple(S), B, **kw)


def test_constraint_rejects_small_values():
    with pytest.raises(HardnessError, match="B/4 < s < B/2"):
        _tp((2, 2, 2, 1, 1, 2), 5)


def test_known_partition_checked():
    with pytest.raises(HardnessError):
        _tp((6, 7, 7, 6, 7, 7), 20, known_partition=((0, 1, 3), (2, 4, 5)))


def test_search():
    tp = _tp((6, 7, 7, 6, 7, 7), 20)
    groups = find_three_partition(tp)
    assert is_three_partition(tp, groups)
    assert find_three_partition(_tp((2, 2, 2, 2, 2, 4), 7, constrained=False)) is None
    assert find_equal_sum_partition(_tp((3, 3, 3, 3, 3, 1), 8, constrained=False)) is None


def test_weighted_path_structure():
    tp = _tp((6, 7, 7, 6, 7, 7), 20, known_partition=((0, 1, 2), (3, 4, 5)))
    inst = gen_weighted_path(tp, 100)
    t, r = inst.topology, inst.request
    assert r.k == 40 and len(r.chatter) == 39 and r.uplinks == (("v1", 1),)
    heavy = [bw for *_, bw in r.chatter if bw == 100]
    assert len(heavy) == 40 - 6
    assert [t.capacity(f"S{j}") for j in (1, 2)] == [6, 6]
    assert len(t.servers) == 40
    assert inst.yes_certificate.congestion == 1
    assert evaluate(t, r, inst.yes_certificate) == 1
    assert inst.gap_bound == Fraction(100, 6)


def test_weighted_path_rejects_small_w():
    with pytest.raises(HardnessError):
        gen_weighted_path(_tp((6, 7, 7, 6, 7, 7), 20), 6)


@pytest.mark.parametrize("S, B", [((2, 2, 3, 2, 2, 3), 7), ((3,) * 6, 9)])
def test_weighted_path_yes_solved(S, B):
    tp = _tp(S, B, known_partition=find_three_partition(_tp(S, B)))
    inst = gen_weighted_path(tp)
    assert inst.yes_certificate.congestion == 1
    assert solve(inst.topology, inst.request, embedding=False).congestion == 1


def test_unconstrained_yes_instance_refused():
    with pytest.raises(HardnessError, match="equal-sum"):
        gen_weighted_path(_tp((1, 1, 5, 2, 2, 3), 7, constrained=False))


def test_weighted_path_no_instance_gap():
    tp = _tp((2, 2, 2, 2, 2, 4), 7, constrained=False)
    inst = gen_weighted_path(tp, 100)
    assert solve(inst.topology, inst.request, embedding=False).congestion >= Fraction(100, 6)


def test_unweighted_tree_smallest():
    tp = _tp((6, 7, 7, 6, 7, 7), 20, known_partition=((0, 2, 4), (1, 3, 5)))
    M = star_multiplier(tp, "1/2")
    assert M == 200
    inst = gen_unweighted_tree(tp, "1/2")
    t, r = inst.topology, inst.request
    assert len(t.nodes) == 1 + 2 + 2 * (3 + 20 * M)
    assert r.k == 6 + 40 * M
    assert len(r.chatter) == r.k - 1          # a tree on the VMs
    assert {vm for vm, _ in r.uplinks} == {"c1", "c6"}
    assert inst.yes_certificate.congestion == 1
    assert inst.gap_bound == Fraction(M, 6)


def test_unweighted_tree_size_cap():
    tp = _tp((6, 7, 7, 6, 7, 7), 20)
    with pytest.raises(HardnessError, match="nodes"):
        gen_unweighted_tree(tp, "1/3", max_nodes=10_000)


def test_epsilon_range():
    with pytest.raises(HardnessError):
        star_multiplier(_tp((6, 7, 7, 6, 7, 7), 20), 1)
