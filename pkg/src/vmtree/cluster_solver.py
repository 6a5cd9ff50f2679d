"""Virtual-cluster requests: ``k`` identical VMs with per-VM bandwidth ``B``.

The request is treated as a clique with ``B / (k - 1)`` on every pair, so
which VMs go where is irrelevant and the table only tracks how many land in
each subtree. A split of ``i`` VMs against ``k - i`` carries
``i * (k - i) * B / (k - 1)``. Work is ``O(n k^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import _kernels
from .dp_solver import Embedding, TreeLayout, tree_layout
from .ratios import INFEASIBLE, parse_amount
from .request import EXACT_INT_LIMIT, RequestGraph, clique_request
from .topology import Topology, to_binary


@dataclass(frozen=True)
class ClusterRequest:
    k: int
    B: Fraction

    def __post_init__(self):
        object.__setattr__(self, "B", parse_amount(self.B, what="bandwidth"))
        if self.k < 1:
            raise ValueError("a cluster needs at least one VM")
        if self.B <= 0:
            raise ValueError("cluster bandwidth must be positive")

    def as_clique(self) -> RequestGraph:
        return clique_request(self.k, self.B)

    def cut_flow(self, i: int) -> Fraction:
        """Bandwidth between ``i`` VMs and the other ``k - i``."""
        if self.k == 1:
            return Fraction(0)
        return i * (self.k - i) * self.B / (self.k - 1)


@dataclass
class ClusterSolution:
    congestion: Fraction | object
    counts: dict | None = None
    layout: TreeLayout | None = field(default=None, repr=False)
    splits: np.ndarray | None = field(default=None, repr=False)

    @property
    def feasible(self) -> bool:
        return self.congestion is not INFEASIBLE


def cluster_solve(t: Topology, c: ClusterRequest) -> ClusterSolution:
    """Minimum congestion of ``c`` on ``t`` plus VMs-per-leaf counts."""
    bt = to_binary(t)
    lay = tree_layout(bt)
    k = c.k
    if lay.cap_sub[lay.root] < k:
        return ClusterSolution(INFEASIBLE)
    if k == 1:
        first = next(lay.ids[i] for i in range(len(lay.ids))
                     if lay.is_leaf[i] and lay.leaf_slots[i] > 0)
        return ClusterSolution(Fraction(0), {first: 1}, lay)
    if (k // 2) * (k - k // 2) >= EXACT_INT_LIMIT:
        raise OverflowError("cluster too large for exact comparison")

    tf, tn, td, part = _kernels.count_dp(
        k, lay.order, lay.left, lay.right, lay.is_leaf, lay.leaf_slots, lay.capn,
        lay.slot, lay.part_row, lay.n_slots, lay.n_rows, lay.root)
    rs = lay.slot[lay.root]
    num, den = int(tn[rs, k]), int(td[rs, k])
    if den == 0:
        return ClusterSolution(INFEASIBLE, layout=lay, splits=part)
    value = Fraction(num * lay.cap_scale, den) * c.B / (k - 1)
    sol = ClusterSolution(value, layout=lay, splits=part)
    sol.counts = _counts(lay, part, k)
    return sol


def _counts(lay: TreeLayout, part: np.ndarray, k: int) -> dict:
    counts = {}
    stack = [(lay.root, k)]
    while stack:
        i, z = stack.pop()
        if z == 0:
            continue
        if lay.is_leaf[i]:
            counts[lay.ids[i]] = z
            continue
        left_z = int(part[lay.part_row[i], z])
        stack.append((int(lay.left[i]), left_z))
        if lay.right[i] >= 0:
            stack.append((int(lay.right[i]), z - left_z))
    # Report leaves in tree order.
    return {u: counts[u] for u in lay.ids if u in counts}


def expand_counts(counts: Mapping, k: int, *, topology: Topology | None = None,
                  prefix: str = "v") -> Embedding:
    """Label counted slots with VMs ``v1..vk`` in leaf order.

    Raises ``ValueError`` if the counts do not add up to ``k`` or exceed a
    leaf's slots (checked when ``topology`` is given).
    """
    total = sum(counts.values())
    if total != k:
        raise ValueError(f"counts place {total} VMs, expected {k}")
    assignment = {}
    i = 0
    for leaf, z in counts.items():
        if z < 0:
            raise ValueError(f"negative count at {leaf!r}")
        if topology is not None and z > topology.node(leaf).vm_slots:
            raise ValueError(f"leaf {leaf!r} has {topology.node(leaf).vm_slots} slots, got {z}")
        for _ in range(z):
            i += 1
            assignment[f"{prefix}{i}"] = leaf
    return Embedding(assignment)
