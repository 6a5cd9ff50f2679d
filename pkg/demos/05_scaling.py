"""
Runtime shape of both dynamic programs
======================================

Subset DP: linear in the number of servers, about 3x per extra VM.
Count DP: quadratic in the cluster size. Absolute numbers depend on the
machine; the fitted slopes are what to look at.
"""

from vmtree.bench import LOG3, bench_scaling, fit_log_slope, fit_power, rows_to_csv

rows = bench_scaling("generic", "k", 100, range(4, 11), trials=3, seed=7)
print(rows_to_csv(rows))
print("log-runtime slope per VM:", round(fit_log_slope([r.param for r in rows],
                                                      [r.median for r in rows]), 3),
      " log 3 =", round(LOG3, 3))

rows = bench_scaling("generic", "n", 5, range(200, 2001, 600), trials=3, seed=7)
print("exponent in n:", round(fit_power([r.param for r in rows], [r.median for r in rows]), 3))

rows = bench_scaling("cluster", "k", 1000, range(10, 101, 30), trials=3, seed=7)
print("exponent in k (clusters):",
      round(fit_power([r.param for r in rows], [r.median for r in rows]), 3))

# the default solver skips subsets that cannot fit and splits that cannot win;
# same answers, flatter curve
rows = bench_scaling("generic", "k", 100, range(4, 11), trials=3, seed=7, prune=True)
print("pruned solver slope:", round(fit_log_slope([r.param for r in rows],
                                                  [r.median for r in rows]), 3))
