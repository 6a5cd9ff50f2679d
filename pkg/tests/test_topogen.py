from fractions import Fraction

from vmtree.ratios import UNBOUNDED
from vmtree.topogen import (apply_residuals, gen_three_tier, random_tree, rng_for,
                            trim_servers)
from vmtree.topology import topology_to_dict, validate_topology


def test_single_chain():
    t = gen_three_tier(1, 1, 1)
    assert [n.id for n in t.nodes] == ["g", "cs", "as0", "tor0.0", "srv0.0.0"]
    assert [n.parent_capacity for n in t.nodes[1:]] == [UNBOUNDED, 100, 40, 10]


def test_shape_counts():
    t = gen_three_tier(2, 2, 2)
    # gateway + core + 2 AS + 4 TOR + 8 servers
    assert len(t.nodes) == 16
    assert len(t.leaves) == 8
    big = gen_three_tier()
    assert len(big.servers) == 1000


def test_seeded_residuals_reproducible():
    a = topology_to_dict(gen_three_tier(3, 2, 2, seed=5, residuals=True))
    b = topology_to_dict(gen_three_tier(3, 2, 2, seed=5, residuals=True))
    c = topology_to_dict(gen_three_tier(3, 2, 2, seed=6, residuals=True))
    assert a == b and a != c


def test_residual_range_and_mean():
    base = gen_three_tier(20, 10, 5)
    ratios = []
    seed = 0
    while len(ratios) < 10_000:
        res = apply_residuals(base, seed)
        assert validate_topology(res) == []
        for n0, n1 in zip(base.nodes, res.nodes):
            c = n0.parent_capacity
            if c is None or c is UNBOUNDED:
                assert n1.parent_capacity == c
                continue
            r = n1.parent_capacity
            assert 0 < r <= c and (r / Fraction(1, 10 ** 6)).denominator == 1
            ratios.append(float(r / c))
        seed += 1
    mean = sum(ratios) / len(ratios)
    assert abs(mean - 0.5) <= 0.02


def test_trim_servers():
    t = trim_servers(gen_three_tier(4, 3, 2), 10)
    assert len(t.servers) == 10 and validate_topology(t) == []
    assert all(t.children[u] or u in t.servers for u in t.by_id if u != t.root)


def test_random_tree_degree():
    t = random_tree(300, rng_for(1), max_degree=4)
    assert validate_topology(t) == []
    assert max(len(c) for c in t.children.values()) <= 4
