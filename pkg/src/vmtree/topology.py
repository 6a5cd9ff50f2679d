"""Rooted, capacitated datacenter trees.

A :class:`Topology` is a flat list of :class:`NetworkNode` records linked by
parent pointers. The edge above node ``u`` is identified by ``u``'s id, so
``path_edges`` returns node ids. Children are ordered by their position in
``Topology.nodes``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .ratios import UNBOUNDED, Unbounded, format_capacity, parse_capacity

NodeId = Hashable
Capacity = Fraction | Unbounded


class TopologyError(ValueError):
    """Raised when an operation needs a valid tree and did not get one."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid topology: " + "; ".join(self.violations))


class UnknownNodeError(KeyError):
    pass


@dataclass(frozen=True)
class NetworkNode:
    id: NodeId
    parent: NodeId | None = None
    parent_capacity: Capacity | None = None
    vm_slots: int = 0
    synthetic: bool = False


@dataclass(frozen=True, eq=False)
class Topology:
    nodes: tuple[NetworkNode, ...]
    root: NodeId
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    # Derived structure below assumes a valid tree; validate first.

    @property
    def by_id(self) -> dict:
        c = self._cache
        if "by_id" not in c:
            c["by_id"] = {n.id: n for n in self.nodes}
        return c["by_id"]

    @property
    def children(self) -> dict:
        c = self._cache
        if "children" not in c:
            ch = {n.id: [] for n in self.nodes}
            for n in self.nodes:
                if n.parent is not None and n.parent in ch:
                    ch[n.parent].append(n.id)
            c["children"] = {k: tuple(v) for k, v in ch.items()}
        return c["children"]

    @property
    def leaves(self) -> tuple:
        """Non-root nodes without children, in node order."""
        ch = self.children
        return tuple(n.id for n in self.nodes if not ch[n.id] and n.id != self.root)

    @property
    def servers(self) -> tuple:
        """Leaves with at least one VM slot, in node order."""
        return tuple(u for u in self.leaves if self.by_id[u].vm_slots > 0)

    def capacity(self, u: NodeId) -> Capacity:
        """Capacity of the edge joining ``u`` to its parent."""
        return self.node(u).parent_capacity

    def node(self, u: NodeId) -> NetworkNode:
        try:
            return self.by_id[u]
        except KeyError:
            raise UnknownNodeError(u) from None

    def depth(self) -> dict:
        c = self._cache
        if "depth" not in c:
            depth = {self.root: 0}
            for u in self.preorder():
                for w in self.children[u]:
                    depth[w] = depth[u] + 1
            c["depth"] = depth
        return c["depth"]

    def preorder(self) -> list:
        out, stack = [], [self.root]
        ch = self.children
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(ch[u]))
        return out

    def postorder(self) -> list:
        c = self._cache
        if "postorder" not in c:
            out = []
            ch = self.children
            stack = [(self.root, False)]
            while stack:
                u, done = stack.pop()
                if done:
                    out.append(u)
                    continue
                stack.append((u, True))
                for w in reversed(ch[u]):
                    stack.append((w, False))
            c["postorder"] = out
        return c["postorder"]

    def root_path(self, u: NodeId) -> tuple:
        """Edges from ``u`` up to the root, nearest first."""
        c = self._cache.setdefault("root_path", {})
        if u not in c:
            by_id = self.by_id
            if u not in by_id:
                raise UnknownNodeError(u)
            path = []
            w = u
            while w != self.root:
                path.append(w)
                w = by_id[w].parent
            c[u] = tuple(path)
        return c[u]

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class BinaryTopology(Topology):
    """A topology in which every node has at most two children.

    ``provenance`` maps each synthetic node to the original node it expands.
    """

    provenance: Mapping = field(default_factory=dict)


def make_topology(root: NodeId, rows: Iterable) -> Topology:
    """Build a topology from ``(id, parent, capacity, vm_slots)`` tuples.

    Capacities may be decimal strings, Fractions, ints or ``"unbounded"``.
    The root may be listed or omitted.
    """
    rows = list(rows)
    nodes = [] if any(row[0] == root for row in rows) else [NetworkNode(root)]
    for node_id, parent, cap, slots in rows:
        if parent is None:
            nodes.append(NetworkNode(node_id, None, None, int(slots)))
        else:
            nodes.append(NetworkNode(node_id, parent, parse_capacity(cap), int(slots)))
    return Topology(tuple(nodes), root)


def validate_topology(t: Topology) -> list[str]:
    """Return every invariant violation in ``t``; an empty list means valid."""
    problems = []
    ids = [n.id for n in t.nodes]
    by_id = {}
    for n in t.nodes:
        if n.id in by_id:
            problems.append(f"duplicate node id {n.id!r}")
        by_id[n.id] = n
    if t.root not in by_id:
        problems.append(f"root {t.root!r} is not a node")
        return problems

    root = by_id[t.root]
    if root.parent is not None:
        problems.append(f"root {t.root!r} has a parent")
    if root.parent_capacity is not None:
        problems.append(f"root {t.root!r} has a parent capacity")
    for n in t.nodes:
        if n.id != t.root and n.parent is None:
            problems.append(f"multiple roots: {n.id!r} has no parent")
        elif n.parent is not None and n.parent not in by_id:
            problems.append(f"node {n.id!r} has unknown parent {n.parent!r}")

    # Follow each parent chain until it hits a node of known fate.
    fate = {t.root: "root"}
    for start in ids:
        chain, on_chain, w = [], set(), start
        while w not in fate:
            if w in on_chain:
                problems.append(f"cycle detected through node {w!r}")
                fate[w] = "cycle"
                break
            on_chain.add(w)
            chain.append(w)
            parent = by_id[w].parent
            if parent is None or parent not in by_id:
                fate[w] = "stray"
                break
            w = parent
        for x in chain:
            fate.setdefault(x, fate[w])
    for n in t.nodes:
        if fate[n.id] == "stray" and n.parent is not None and n.parent in by_id:
            problems.append(f"node {n.id!r} is disconnected from the root")

    children = {i: 0 for i in by_id}
    for n in t.nodes:
        if n.parent in children:
            children[n.parent] += 1
    for n in t.nodes:
        if n.id == t.root:
            continue
        c = n.parent_capacity
        if c is None:
            problems.append(f"node {n.id!r} has no parent capacity")
        elif c is not UNBOUNDED:
            if not isinstance(c, Fraction):
                problems.append(f"node {n.id!r} capacity {c!r} is not exact")
            elif c <= 0:
                problems.append(f"nonpositive capacity {c} on edge above {n.id!r}")
    servers = 0
    for n in t.nodes:
        if not isinstance(n.vm_slots, int) or n.vm_slots < 0:
            problems.append(f"node {n.id!r} has invalid vm_slots {n.vm_slots!r}")
            continue
        if n.vm_slots > 0:
            if n.id == t.root:
                problems.append(f"vm_slots on gateway {n.id!r}")
            elif children[n.id] > 0:
                problems.append(f"vm_slots on internal node {n.id!r}")
            else:
                servers += 1
    if servers == 0:
        problems.append("no server leaves")
    return problems


def ensure_valid(t: Topology) -> Topology:
    if "valid" not in t._cache:
        problems = validate_topology(t)
        if problems:
            raise TopologyError(problems)
        t._cache["valid"] = True
    return t


def _fresh_id(base, taken: set, counter: list):
    while True:
        counter[0] += 1
        cand = f"{base}~{counter[0]}"
        if cand not in taken:
            taken.add(cand)
            return cand


def to_binary(t: Topology) -> BinaryTopology:
    """Expand every node with more than two children into a binary subtree.

    The inserted edges are UNBOUNDED; each original child keeps its own edge
    capacity, so every embedding has the same congestion on both trees.
    Children are split left-heavy (first ``ceil(d/2)`` go left).
    """
    if isinstance(t, BinaryTopology):
        return t
    ensure_valid(t)
    ch = t.children
    if all(len(c) <= 2 for c in ch.values()):
        out = BinaryTopology(t.nodes, t.root, provenance={})
        out._cache["valid"] = True
        return out

    taken = {n.id for n in t.nodes}
    counters: dict = {}
    new_parent: dict = {}
    new_cap: dict = {}
    new_children: dict = {}
    synthetic: dict = {}

    def expand(owner, kids):
        # Returns the id of the subtree root spanning ``kids`` below ``owner``.
        if len(kids) == 1:
            return kids[0]
        half = (len(kids) + 1) // 2
        sid = _fresh_id(owner, taken, counters.setdefault(owner, [0]))
        synthetic[sid] = owner
        new_children[sid] = []
        for part in (kids[:half], kids[half:]):
            sub = expand(owner, part)
            new_children[sid].append(sub)
            new_parent[sub] = sid
            if sub in synthetic:
                new_cap[sub] = UNBOUNDED
        return sid

    for n in t.nodes:
        kids = list(ch[n.id])
        if len(kids) <= 2:
            new_children[n.id] = kids
            continue
        half = (len(kids) + 1) // 2
        new_children[n.id] = []
        for part in (kids[:half], kids[half:]):
            sub = expand(n.id, part)
            new_children[n.id].append(sub)
            new_parent[sub] = n.id
            if sub in synthetic:
                new_cap[sub] = UNBOUNDED

    nodes = []
    stack = [t.root]
    by_id = t.by_id
    while stack:
        u = stack.pop()
        if u in synthetic:
            nodes.append(NetworkNode(u, new_parent[u], UNBOUNDED, 0, True))
        else:
            n = by_id[u]
            nodes.append(NetworkNode(u, new_parent.get(u, n.parent), n.parent_capacity,
                                     n.vm_slots, n.synthetic))
        stack.extend(reversed(new_children.get(u, ())))
    out = BinaryTopology(tuple(nodes), t.root, provenance=dict(synthetic))
    out._cache["valid"] = True
    return out


def path_edges(t: Topology, u: NodeId, v: NodeId) -> list:
    """Edges on the unique ``u``-``v`` path: up from ``u``, then down to ``v``."""
    up = t.root_path(u)
    down = t.root_path(v)
    # Strip the shared suffix (edges above the lowest common ancestor).
    i, j = len(up), len(down)
    while i and j and up[i - 1] == down[j - 1]:
        i -= 1
        j -= 1
    return list(up[:i]) + list(reversed(down[:j]))


def topology_to_dict(t: Topology) -> dict:
    rows = []
    for n in t.nodes:
        row = {
            "id": n.id,
            "parent": n.parent,
            "capacity": None if n.parent_capacity is None else format_capacity(n.parent_capacity),
            "vm_slots": n.vm_slots,
        }
        if n.synthetic:
            row["synthetic"] = True
        rows.append(row)
    return {"root": t.root, "nodes": rows}


def topology_from_dict(data: Mapping) -> Topology:
    if "root" not in data or "nodes" not in data:
        raise ValueError("topology JSON needs 'root' and 'nodes'")
    nodes = []
    for row in data["nodes"]:
        cap = row.get("capacity")
        nodes.append(NetworkNode(
            row["id"],
            row.get("parent"),
            None if cap is None else parse_capacity(cap),
            int(row.get("vm_slots", 0)),
            bool(row.get("synthetic", False)),
        ))
    return Topology(tuple(nodes), data["root"])


def load_topology(path) -> Topology:
    with open(path) as fh:
        return topology_from_dict(json.load(fh))


def dump_topology(t: Topology, path) -> None:
    with open(path, "w") as fh:
        json.dump(topology_to_dict(t), fh, indent=2, sort_keys=True)
        fh.write("\n")
