"""End-to-end acceptance checks, one per criterion.

Each test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary and when this file is run as a script.
"""

import functools
import math
import time
from fractions import Fraction
from pathlib import Path

import pytest

from vmtree.bench import LOG3, bench_scaling, fit_log_slope, fit_power
from vmtree.cli import main as cli_main
from vmtree.cluster_solver import ClusterRequest, cluster_solve
from vmtree.dp_solver import evaluate, solve
from vmtree.hardness import (ThreePartitionInstance, find_equal_sum_partition,
                             find_three_partition, gen_unweighted_tree, gen_weighted_path,
                             star_multiplier)
from vmtree.oracle import linear_scan
from vmtree.request import SubsetLimitError, random_request
from vmtree.topogen import gen_three_tier, random_tree, rng_for, trim_servers
from vmtree.topology import to_binary

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def test_criterion_1_oracle_equivalence():
    rng = rng_for(101)
    start = time.perf_counter()
    mismatches = trials = 0
    while trials < 250:
        t = gen_three_tier(int(rng.integers(1, 5)), int(rng.integers(1, 4)),
                           int(rng.integers(1, 3)), seed=int(rng.integers(2 ** 32)),
                           residuals=True)
        t = trim_servers(t, int(rng.integers(1, 11)))
        r = random_request(int(rng.integers(1, 5)), rng)
        mismatches += solve(t, r, embedding=False).congestion != linear_scan(t, r).congestion
        trials += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120
    assert record(1, ok, f"{trials} instances, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_2_normalization():
    rng = rng_for(202)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        b = to_binary(random_tree(n, rng, max_degree=16))
        worst = max(worst, len(b.nodes) / n)
    mismatches = checked = 0
    while checked < 120:
        t = random_tree(int(rng.integers(2, 40)), rng, max_degree=16, max_slots=2)
        if len(t.servers) > 12:
            continue
        r = random_request(int(rng.integers(1, 5)), rng)
        mismatches += solve(to_binary(t), r, embedding=False).congestion != \
            linear_scan(t, r).congestion
        checked += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 2 and mismatches == 0 and elapsed < 60
    assert record(2, ok, f"max nodes/n = {worst:.3f} over 1000 trees; {checked} solve-vs-scan, "
                         f"{mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_3_cluster_agreement():
    rng = rng_for(303)
    start = time.perf_counter()
    mismatches = checked = 0
    while checked < 120:
        t = random_tree(int(rng.integers(2, 60)), rng, max_slots=3)
        if len(t.leaves) > 30:
            continue
        c = ClusterRequest(int(rng.integers(1, 9)), Fraction(int(rng.integers(1, 100)), 10))
        mismatches += cluster_solve(t, c).congestion != solve(t, c.as_clique()).congestion
        checked += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120
    assert record(3, ok, f"{checked} instances, {mismatches} mismatches, {elapsed:.1f}s")


YES = [((2, 2, 3, 2, 2, 3), 7), ((3, 2, 2, 3, 2, 2), 7), ((3,) * 6, 9)]
NO = [((2, 2, 2, 2, 2, 4), 7), ((3, 3, 3, 3, 3, 1), 8), ((2, 2, 2, 4, 4, 4), 9)]


def test_criterion_4_hardness_gap():
    notes, ok = [], True
    start = time.perf_counter()
    for S, B in YES:
        tp = ThreePartitionInstance(2, S, B)
        tp = ThreePartitionInstance(2, S, B, find_three_partition(tp))
        inst = gen_weighted_path(tp, 100)
        cert = evaluate(inst.topology, inst.request, inst.yes_certificate)
        got = solve(inst.topology, inst.request, embedding=False).congestion
        ok &= cert == 1 and got == 1
        notes.append(f"path yes B={B}: cert={cert} solve={got}")
    for S, B in NO:
        tp = ThreePartitionInstance(2, S, B, constrained=False)
        assert find_equal_sum_partition(tp) is None
        inst = gen_weighted_path(tp, 100)
        got = solve(inst.topology, inst.request, embedding=False).congestion
        ok &= got >= Fraction(100, 6)
        notes.append(f"path no B={B}: solve={float(got):.3f}")
    tp = ThreePartitionInstance(2, (6, 7, 7, 6, 7, 7), 20, ((0, 2, 4), (1, 3, 5)))
    inst = gen_unweighted_tree(tp, "1/2")
    cert = evaluate(inst.topology, inst.request, inst.yes_certificate)
    ok &= cert == 1
    notes.append(f"tree yes M={inst.M}: cert={cert}")
    for S, B in NO:
        tp = ThreePartitionInstance(2, S, B, constrained=False)
        M = star_multiplier(tp, "1/2")      # smallest legal multiplier, exponent 1
        inst = gen_unweighted_tree(tp, M=M)
        try:
            got = solve(inst.topology, inst.request, embedding=False).congestion
            ok &= got >= Fraction(M, 6)
            notes.append(f"tree no B={B}: solve={float(got):.3f}")
        except SubsetLimitError:
            ok = False
            notes.append(f"tree no B={B}: k={inst.request.k} exceeds the subset limit")
    elapsed = time.perf_counter() - start
    assert record(4, ok, "; ".join(notes) + f"; {elapsed:.1f}s")


@functools.lru_cache(maxsize=None)
def _sweep(mode, sweep, fixed, points):
    rows = bench_scaling(mode, sweep, fixed, list(points), trials=5, seed=7)
    return [r.param for r in rows], [r.median for r in rows]


N_POINTS = tuple(range(200, 2001, 200))
K_POINTS = tuple(range(4, 11))
CK_POINTS = tuple(range(10, 101, 10))


def test_criterion_5_scaling_shapes():
    start = time.perf_counter()
    n_exp = fit_power(*_sweep("generic", "n", 5, N_POINTS))
    k_slope = fit_log_slope(*_sweep("generic", "k", 100, K_POINTS))
    c_exp = fit_power(*_sweep("cluster", "k", 1000, CK_POINTS))
    elapsed = time.perf_counter() - start
    ok = (0.7 <= n_exp <= 1.3 and abs(k_slope - LOG3) <= 0.3 * LOG3
          and 1.6 <= c_exp <= 2.4 and elapsed < 1800)
    assert record(5, ok, f"n exponent {n_exp:.3f} (0.7..1.3); k log-slope {k_slope:.3f} "
                         f"(log3 {LOG3:.3f} +-30%); cluster k exponent {c_exp:.3f} (1.6..2.4); "
                         f"{elapsed:.0f}s")


def test_bench_point_ratios():
    ns, nt = _sweep("generic", "n", 5, N_POINTS)
    assert 5 <= nt[-1] / nt[0] <= 20
    ks, kt = _sweep("cluster", "k", 1000, CK_POINTS)
    a = [t / k ** 2 for k, t in zip(ks, kt)]
    mid = math.sqrt(max(a) * min(a))
    assert all(mid / 2 <= x <= mid * 2 for x in a)


def _run_all(d: Path, tag: str):
    t = d / f"t{tag}.json"
    cli_main(["gen-topology", "--servers-per-rack", "3", "--racks-per-as", "2",
              "--as-count", "2", "--seed", "42", "--residuals", "--out", str(t)])
    req = d / "r.json"
    if not req.exists():
        req.write_text('{"vms": ["a", "b", "c"], "uplinks": [{"vm": "a", "bw": "1.5"}], '
                       '"chatter": [{"a": "a", "b": "b", "bw": "2"}, '
                       '{"a": "b", "b": "c", "bw": "0.3"}]}')
    cli_main(["solve", "--topology", str(t), "--request", str(req), "--out", str(d / f"s{tag}.json")])
    cli_main(["oracle", "--topology", str(t), "--request", str(req), "--out", str(d / f"o{tag}.json")])
    cli_main(["cluster-solve", "--topology", str(t), "-k", "6", "-B", "0.1",
              "--out", str(d / f"c{tag}.json")])
    cli_main(["gen-hard", "--model", "path", "--m", "2", "--B", "20", "--s", "6,7,7,6,7,7",
              "--out-prefix", str(d / f"hp{tag}_")])
    cli_main(["gen-hard", "--model", "tree", "--m", "2", "--B", "20", "--s", "6,7,7,6,7,7",
              "--out-prefix", str(d / f"ht{tag}_")])
    cli_main(["bench", "--mode", "generic", "--sweep", "k", "--fixed-n", "100",
              "--points", "4:6", "--trials", "3", "--seed", "7", "--out", str(d / f"b{tag}.csv")])
    cli_main(["bench", "--mode", "cluster", "--sweep", "n", "--fixed-k", "10",
              "--points", "100,200", "--trials", "3", "--seed", "7",
              "--out", str(d / f"bc{tag}.csv")])
    return {p.name.replace(tag, "#", 1): p.read_bytes() for p in d.iterdir() if tag in p.name}


def test_criterion_6_determinism(tmp_path):
    first = _run_all(tmp_path, "1")
    second = _run_all(tmp_path, "2")
    differ = sorted(name for name in first if first[name] != second.get(name))
    ok = not differ and first.keys() == second.keys()
    detail = f"{len(first)} outputs compared byte-for-byte"
    if differ:
        detail += f"; differing: {', '.join(differ)}"
    assert record(6, ok, detail)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
