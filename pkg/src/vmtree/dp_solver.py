"""Exact minimum-congestion placement of a request on a binary tree.

``cong[u, S]`` is the best congestion of the edges inside the subtree at ``u``
when exactly the VMs of ``S`` are placed there. Each internal node combines
its children by trying every split of ``S``; leaves accept up to their
``vm_slots``. Work is ``O(3^k n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping

import numpy as np

from . import _kernels
from .ratios import INFEASIBLE, UNBOUNDED, common_scale
from .request import (EXACT_INT_LIMIT, FlowTable, RequestGraph, build_flow_table,
                      check_subset_limit)
from .topology import BinaryTopology, Topology, ensure_valid, path_edges, to_binary


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Embedding:
    """VM -> leaf assignment; the gateway always sits at the tree root."""

    assignment: Mapping
    congestion: Fraction | None = None

    def leaf_of(self, vm):
        return self.assignment[vm]


@dataclass
class TreeLayout:
    """Array view of a binary topology, shared by both dynamic programs."""

    ids: list
    index: dict
    left: np.ndarray
    right: np.ndarray
    is_leaf: np.ndarray
    leaf_slots: np.ndarray
    cap_sub: np.ndarray
    capn: np.ndarray
    cap_scale: int
    order: np.ndarray
    slot: np.ndarray
    part_row: np.ndarray
    n_slots: int
    n_rows: int
    root: int


def tree_layout(t: BinaryTopology, *, retain: bool = False) -> TreeLayout:
    key = "layout_full" if retain else "layout"
    if key in t._cache:
        return t._cache[key]
    nodes = t.nodes
    ids = [nd.id for nd in nodes]
    index = {u: i for i, u in enumerate(ids)}
    root = index[t.root]
    parent = np.array([-1 if nd.parent is None else index[nd.parent] for nd in nodes],
                      dtype=np.int64)
    slots = np.array([nd.vm_slots for nd in nodes], dtype=np.int64)

    caps = [nd.parent_capacity for nd in nodes]
    scale = 1
    for d in {c.denominator for c in caps if c is not None and c is not UNBOUNDED}:
        scale = lcm(scale, d)
    capn = [0 if c is None or c is UNBOUNDED else c.numerator * (scale // c.denominator)
            for c in caps]
    if max(capn) >= EXACT_INT_LIMIT:
        raise OverflowError("capacities too fine-grained for exact comparison")

    ok, left, right, is_leaf, cap_sub, order, slot, part_row, n_slots = \
        _kernels.tree_arrays(parent, slots, root, retain)
    if not ok:
        raise ValueError("topology has a node with more than two children; binarize first")
    layout = TreeLayout(ids, index, left, right, is_leaf, slots, cap_sub,
                        np.array(capn, dtype=np.int64), scale, order, slot, part_row,
                        int(n_slots), len(order), root)
    t._cache[key] = layout
    return layout


def _to_value(num: int, den: int, cap_scale: int, flow_scale: int):
    if den == 0:
        return INFEASIBLE
    return Fraction(num * cap_scale, den * flow_scale)


@dataclass
class PartitionTable:
    """Chosen left-child subset for every internal node and subset."""

    layout: TreeLayout
    splits: np.ndarray

    def split(self, u, mask: int):
        """``(S_left, S_right)`` stored for node ``u`` and subset ``mask``."""
        lay = self.layout
        i = lay.index[u]
        if lay.is_leaf[i]:
            raise KeyError(f"{u!r} is a leaf")
        sl = int(self.splits[lay.part_row[i], mask])
        if sl < 0:
            return None
        return sl, mask ^ sl


@dataclass
class CongestionTable:
    """Retained ``cong[u, S]`` rows (only the full set at the root)."""

    layout: TreeLayout
    k: int
    tf: np.ndarray
    tn: np.ndarray
    td: np.ndarray
    flow_scale: int

    def value(self, u, mask: int):
        lay = self.layout
        i = lay.index[u]
        full = (1 << self.k) - 1
        if lay.is_leaf[i]:
            if mask == 0 or bin(mask).count("1") <= lay.leaf_slots[i]:
                return Fraction(0)
            return INFEASIBLE
        if i == lay.root and mask != full:
            raise KeyError("only the full VM set is computed at the root")
        row = lay.slot[i]
        return _to_value(int(self.tn[row, mask]), int(self.td[row, mask]),
                         lay.cap_scale, self.flow_scale)


@dataclass
class Solution:
    congestion: Fraction | object
    embedding: Embedding | None = None
    partition: PartitionTable | None = field(default=None, repr=False)
    table: CongestionTable | None = field(default=None, repr=False)
    flow: FlowTable | None = field(default=None, repr=False)

    @property
    def feasible(self) -> bool:
        return self.congestion is not INFEASIBLE


def solve(t: Topology, r: RequestGraph, *, embedding: bool = True,
          retain_tables: bool = False, prune: bool = True) -> Solution:
    """Minimum congestion of ``r`` on ``t`` and an embedding achieving it.

    ``t`` is binarized first if needed. Returns a :class:`Solution` whose
    ``congestion`` is :data:`INFEASIBLE` when the servers lack room.
    ``retain_tables`` keeps every ``cong[u, S]`` row for inspection.
    ``prune=False`` walks every subset and split with no shortcuts; the
    result is identical, only slower.
    """
    check_subset_limit(r)
    bt = to_binary(t)
    lay = tree_layout(bt, retain=retain_tables)
    flow = build_flow_table(r)
    tf, tn, td, part = _kernels.subset_dp(
        r.k, flow.scaled, lay.order, lay.left, lay.right, lay.is_leaf, lay.leaf_slots,
        lay.cap_sub, lay.capn, lay.slot, lay.part_row, lay.n_slots, lay.n_rows, lay.root,
        prune)
    full = (1 << r.k) - 1
    rs = lay.slot[lay.root]
    value = _to_value(int(tn[rs, full]), int(td[rs, full]), lay.cap_scale, flow.scale)
    sol = Solution(value, partition=PartitionTable(lay, part), flow=flow)
    if retain_tables:
        sol.table = CongestionTable(lay, r.k, tf, tn, td, flow.scale)
    if embedding and sol.feasible:
        emb = backtrack(sol.partition, bt, r)
        sol.embedding = Embedding(emb.assignment, value)
    return sol


def backtrack(part: PartitionTable, t: BinaryTopology, r: RequestGraph) -> Embedding:
    """Follow stored splits from the root down to the leaves."""
    lay = part.layout
    full = (1 << r.k) - 1
    if part.splits[lay.part_row[lay.root], full] < 0:
        raise EmbeddingError("no feasible embedding to reconstruct")
    assignment = {}
    stack = [(lay.root, full)]
    while stack:
        i, mask = stack.pop()
        if lay.is_leaf[i]:
            for b in range(r.k):
                if mask >> b & 1:
                    assignment[r.vms[b]] = lay.ids[i]
            continue
        if mask == 0:
            continue
        sl = int(part.splits[lay.part_row[i], mask])
        if sl < 0:
            raise EmbeddingError(f"missing split at {lay.ids[i]!r} for subset {mask:#x}")
        stack.append((int(lay.left[i]), sl))
        if lay.right[i] >= 0:
            stack.append((int(lay.right[i]), mask ^ sl))
    return Embedding({vm: assignment[vm] for vm in r.vms})


class Evaluator:
    """Reusable congestion evaluation of many embeddings of one request."""

    def __init__(self, t: Topology, r: RequestGraph):
        ensure_valid(t)
        self.t = t
        self.r = r
        self.flow_scale, up, chat = r.scaled()
        self.edges = [(i, -1, w) for i, w in enumerate(up) if w] + list(chat)
        finite = {n.id: n.parent_capacity for n in t.nodes
                  if n.parent_capacity is not None and n.parent_capacity is not UNBOUNDED}
        self.cap_scale = common_scale(finite.values())
        self.capn = {u: int(c * self.cap_scale) for u, c in finite.items()}
        self._paths: dict = {}

    def _path(self, a, b):
        key = (a, b)
        p = self._paths.get(key)
        if p is None:
            p = [e for e in path_edges(self.t, a, b) if e in self.capn]
            self._paths[key] = p
        return p

    def loads(self, leaves) -> dict:
        """Scaled load per finite edge for VM ``i`` placed on ``leaves[i]``."""
        root = self.t.root
        load: dict = {}
        for i, j, w in self.edges:
            a = leaves[i]
            b = root if j < 0 else leaves[j]
            if a == b:
                continue
            for e in self._path(a, b):
                load[e] = load.get(e, 0) + w
        return load

    def scaled_max(self, leaves):
        """Max ratio as an integer pair ``(load, capacity)``, unscaled."""
        best_l, best_c = 0, 1
        capn = self.capn
        for e, l in self.loads(leaves).items():
            c = capn[e]
            if l * best_c > best_l * c:
                best_l, best_c = l, c
        return best_l, best_c

    def congestion(self, leaves) -> Fraction:
        l, c = self.scaled_max(leaves)
        return Fraction(l * self.cap_scale, c * self.flow_scale)

    def check(self, assignment: Mapping) -> list:
        t, r = self.t, self.r
        leaves = []
        used: dict = {}
        for vm in r.vms:
            if vm not in assignment:
                raise EmbeddingError(f"VM {vm!r} is not mapped")
            leaf = assignment[vm]
            try:
                node = t.node(leaf)
            except KeyError:
                raise EmbeddingError(f"VM {vm!r} mapped to unknown node {leaf!r}") from None
            if t.children[leaf] or leaf == t.root:
                raise EmbeddingError(f"VM {vm!r} mapped to non-leaf {leaf!r}")
            used[leaf] = used.get(leaf, 0) + 1
            if used[leaf] > node.vm_slots:
                raise EmbeddingError(f"leaf {leaf!r} holds more than {node.vm_slots} VMs")
            leaves.append(leaf)
        return leaves


def evaluate(t: Topology, r: RequestGraph, e: Embedding | Mapping) -> Fraction:
    """Max over edges of carried demand divided by capacity.

    UNBOUNDED edges contribute nothing; co-located endpoints load no edge.
    """
    assignment = e.assignment if isinstance(e, Embedding) else e
    ev = Evaluator(t, r)
    return ev.congestion(ev.check(assignment))
