"""Brute-force reference: try every slot-respecting allocation.

Runs on the tree as given (no binarization), so agreement with
:func:`vmtree.dp_solver.solve` also checks that binarization is harmless.
"""

from __future__ import annotations

from fractions import Fraction

from .dp_solver import Embedding, Evaluator, Solution
from .ratios import INFEASIBLE
from .request import RequestGraph
from .topology import Topology, ensure_valid

MAX_LEAVES = 12
MAX_VMS = 5


class OracleLimitError(ValueError):
    pass


def allocations(servers, slots, k):
    """Yield every tuple ``leaves`` with ``leaves[i]`` the server of VM ``i``.

    VMs are assigned in index order; servers are tried in the given order.
    """
    used = [0] * len(servers)
    current = [None] * k

    def rec(i):
        if i == k:
            yield tuple(current)
            return
        for j, s in enumerate(servers):
            if used[j] < slots[j]:
                used[j] += 1
                current[i] = s
                yield from rec(i + 1)
                used[j] -= 1

    yield from rec(0)


def linear_scan(t: Topology, r: RequestGraph, *, max_leaves: int = MAX_LEAVES,
                max_vms: int = MAX_VMS) -> Solution:
    ensure_valid(t)
    servers = sorted(t.servers, key=str)
    if len(servers) > max_leaves or r.k > max_vms:
        raise OracleLimitError(
            f"linear scan limited to {max_leaves} servers and {max_vms} VMs "
            f"(got {len(servers)} and {r.k})")
    slots = [t.node(s).vm_slots for s in servers]
    ev = Evaluator(t, r)
    best = None
    best_leaves = None
    for leaves in allocations(servers, slots, r.k):
        l, c = ev.scaled_max(leaves)
        if best is None or l * best[1] < best[0] * c:
            best = (l, c)
            best_leaves = leaves
    if best is None:
        return Solution(INFEASIBLE)
    value = Fraction(best[0] * ev.cap_scale, best[1] * ev.flow_scale)
    return Solution(value, Embedding(dict(zip(r.vms, best_leaves)), value))
