"""Runtime sweeps for the subset and count dynamic programs.

Each sweep point times the solver (only the solve call) on freshly generated
residual three-tier topologies. Binarizing a topology and laying it out as
arrays happen before the clock starts. One untimed warm-up solve precedes
every point. Rows report the median, min and max over trials.

Generic mode times the full subset recurrence by default (``prune=False``),
whose cost is the same for every instance of a given size; pass
``prune=True`` to time the default solver instead.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .cluster_solver import ClusterRequest, cluster_solve
from .dp_solver import solve, tree_layout
from .ratios import format_amount
from .request import SUBSET_LIMIT, random_path_request, random_request
from .topogen import gen_three_tier, rng_for
from .topology import to_binary

SERVERS_PER_RACK = 20
RACKS_PER_AS = 10
HEADER = ("param", "median_s", "min_s", "max_s")


def shape_for(n_servers: int):
    """Three-tier fan-outs giving exactly ``n_servers`` servers.

    Uses 20 servers per rack and up to 10 racks per aggregation switch.
    """
    if n_servers % SERVERS_PER_RACK:
        raise ValueError(f"server count must be a multiple of {SERVERS_PER_RACK}")
    racks = n_servers // SERVERS_PER_RACK
    if racks <= RACKS_PER_AS:
        return SERVERS_PER_RACK, racks, 1
    if racks % RACKS_PER_AS:
        raise ValueError(f"server count above {SERVERS_PER_RACK * RACKS_PER_AS} must be "
                         f"a multiple of {SERVERS_PER_RACK * RACKS_PER_AS}")
    return SERVERS_PER_RACK, RACKS_PER_AS, racks // RACKS_PER_AS


@dataclass
class BenchRow:
    param: int
    times: list
    checksum: str = ""

    @property
    def median(self) -> float:
        return statistics.median(self.times)


def parse_points(text: str) -> list:
    """``"4:10"`` -> 4..10, ``"200:2000:200"`` -> stepped range, ``"1,5,9"`` -> list."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        lo, hi, step = parts
        return list(range(lo, hi + 1, step))
    return [int(p) for p in text.split(",") if p]


def _instance(mode, sweep, param, fixed, trial_seed):
    n = param if sweep == "n" else fixed
    k = param if sweep == "k" else fixed
    rng = rng_for(trial_seed)
    t = to_binary(gen_three_tier(*shape_for(n), seed=int(rng.integers(2 ** 63)),
                                 residuals=True))
    tree_layout(t)
    if mode == "cluster":
        return t, ClusterRequest(k, "0.1")
    if mode != "generic":
        raise ValueError(f"unknown mode {mode!r}")
    if k > SUBSET_LIMIT:
        raise ValueError(f"generic mode needs k <= {SUBSET_LIMIT}")
    if sweep == "k":
        return t, random_path_request(k, rng)
    return t, random_request(k, rng)


def _run(mode, t, req, prune):
    if mode == "cluster":
        return cluster_solve(t, req).congestion
    return solve(t, req, embedding=False, prune=prune).congestion


def bench_scaling(mode: str, sweep: str, fixed: int, points, trials: int = 5,
                  seed: int = 0, *, prune: bool = False) -> list:
    """Time ``mode`` ('generic' or 'cluster') sweeping ``sweep`` ('n' or 'k')."""
    if sweep not in ("n", "k"):
        raise ValueError("sweep must be 'n' or 'k'")
    if trials < 1:
        raise ValueError("need at least one trial")
    rows = []
    for p_i, param in enumerate(points):
        point_seed = np.random.SeedSequence([seed, p_i, param])
        seeds = [int(s.generate_state(1)[0]) for s in point_seed.spawn(trials + 1)]
        t, req = _instance(mode, sweep, param, fixed, seeds[0])
        _run(mode, t, req, prune)  # warm-up, discarded
        times, values = [], []
        for s in seeds[1:]:
            t, req = _instance(mode, sweep, param, fixed, s)
            start = time.perf_counter()
            value = _run(mode, t, req, prune)
            times.append(time.perf_counter() - start)
            values.append(format_amount(value) if value is not None else "")
        rows.append(BenchRow(param, times, "|".join(values)))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow((r.param, f"{r.median:.6g}", f"{min(r.times):.6g}", f"{max(r.times):.6g}"))
    return buf.getvalue()


def fit_power(params, times) -> float:
    """Least-squares exponent ``b`` in ``time ~ a * param^b``."""
    x = np.log(np.asarray(params, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def fit_log_slope(params, times) -> float:
    """Least-squares slope of ``log(time)`` against ``param``."""
    y = np.log(np.asarray(times, dtype=float))
    return float(np.polyfit(np.asarray(params, dtype=float), y, 1)[0])


LOG3 = math.log(3)
