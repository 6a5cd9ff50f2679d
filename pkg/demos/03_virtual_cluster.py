"""
Virtual clusters on a three-tier datacenter
===========================================

A cluster <k, B> is k identical VMs, each promised B Gbps. Only the number
of VMs per subtree matters, so the table is indexed by counts instead of
subsets and k can go far past what the subset solver handles.
"""

import time
from fractions import Fraction

from vmtree import ClusterRequest, cluster_solve, evaluate, expand_counts, gen_three_tier, solve

dc = gen_three_tier(20, 10, 5, seed=42, residuals=True)
print("servers:", len(dc.servers))

# the first call also loads the compiled kernels
for k in (10, 50, 100, 200):
    t0 = time.perf_counter()
    sol = cluster_solve(dc, ClusterRequest(k, "0.1"))
    dt = time.perf_counter() - t0
    racks = {leaf.rsplit(".", 1)[0] for leaf in sol.counts}
    print(f"k={k:>3}  congestion={float(sol.congestion):.4f}  racks used={len(racks):>2}  {dt * 1e3:.1f} ms")

# for small k the count table agrees with the subset DP on the explicit clique
small = gen_three_tier(4, 2, 2, seed=3, residuals=True)
c = ClusterRequest(6, Fraction(1, 2))
a = cluster_solve(small, c)
b = solve(small, c.as_clique())
print("count DP:", a.congestion, " subset DP on clique:", b.congestion)

emb = expand_counts(a.counts, c.k, topology=small)
print("expanded:", dict(emb.assignment))
print("evaluated:", evaluate(small, c.as_clique(), emb))
