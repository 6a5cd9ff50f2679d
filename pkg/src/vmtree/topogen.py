"""Three-tier datacenter trees and residual-capacity sampling.

Randomness comes from numpy's PCG64 generator (``numpy.random.Generator``
seeded with ``PCG64(seed)``); uniform draws are ``Generator.random()``
doubles. Residuals are quantized to six decimal places so they stay exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .ratios import UNBOUNDED
from .topology import NetworkNode, Topology, ensure_valid

SERVER_LINK = Fraction(10)
TOR_UPLINK = Fraction(40)
AGG_UPLINK = Fraction(100)
QUANTUM = Fraction(1, 10 ** 6)
MIN_RESIDUAL_FRACTION = Fraction(1, 1000)


def rng_for(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_three_tier(servers_per_rack: int = 20, racks_per_as: int = 10, as_count: int = 5,
                   seed=None, *, residuals: bool = False, vm_slots: int = 1) -> Topology:
    """Gateway -> core -> aggregation -> top-of-rack -> servers.

    Links are 10 Gbps (server), 40 Gbps (TOR to AS) and 100 Gbps (AS to
    core); the gateway-core link is UNBOUNDED. With ``residuals`` each
    finite link is replaced by a seeded residual draw.
    """
    for name, v in (("servers_per_rack", servers_per_rack), ("racks_per_as", racks_per_as),
                    ("as_count", as_count)):
        if v < 1:
            raise ValueError(f"{name} must be >= 1")
    nodes = [NetworkNode("g"), NetworkNode("cs", "g", UNBOUNDED)]
    for a in range(as_count):
        agg = f"as{a}"
        nodes.append(NetworkNode(agg, "cs", AGG_UPLINK))
        for rk in range(racks_per_as):
            tor = f"tor{a}.{rk}"
            nodes.append(NetworkNode(tor, agg, TOR_UPLINK))
            for s in range(servers_per_rack):
                nodes.append(NetworkNode(f"srv{a}.{rk}.{s}", tor, SERVER_LINK, vm_slots))
    t = Topology(tuple(nodes), "g")
    if residuals:
        t = apply_residuals(t, seed)
    return t


def draw_residual(rng: np.random.Generator, capacity: Fraction) -> Fraction:
    floor = capacity * MIN_RESIDUAL_FRACTION
    while True:
        x = Fraction(rng.random()) * capacity
        q = min(Fraction(round(x / QUANTUM)) * QUANTUM, capacity)
        if q > floor:
            return q


def apply_residuals(t: Topology, seed) -> Topology:
    """Replace every finite capacity c with a draw from uniform [0, c].

    Draws at or below c/1000 are redrawn. Edges are visited in node order.
    """
    ensure_valid(t)
    rng = rng_for(seed)
    nodes = []
    for n in t.nodes:
        c = n.parent_capacity
        if c is not None and c is not UNBOUNDED:
            c = draw_residual(rng, c)
        nodes.append(NetworkNode(n.id, n.parent, c, n.vm_slots, n.synthetic))
    return Topology(tuple(nodes), t.root)


def trim_servers(t: Topology, max_servers: int) -> Topology:
    """Keep the first ``max_servers`` servers; drop switches left empty."""
    keep = set(t.servers[:max_servers])
    ch = t.children
    alive = set()
    for u in t.postorder():
        if u in keep or any(c in alive for c in ch[u]) or u == t.root:
            alive.add(u)
    return Topology(tuple(n for n in t.nodes if n.id in alive), t.root)


def random_tree(n: int, rng: np.random.Generator, *, max_degree: int = 16,
                capacities=(1, 10), max_slots: int = 1, unbounded_prob: float = 0.1) -> Topology:
    """Random rooted tree on ``n`` nodes with at most ``max_degree`` children each.

    Capacities are integers in ``capacities`` (inclusive) or occasionally
    UNBOUNDED; every leaf gets 1..``max_slots`` VM slots.
    """
    if n < 2:
        raise ValueError("need at least a root and one leaf")
    parents = [None]
    kids = [0]
    for i in range(1, n):
        open_ = [j for j in range(i) if kids[j] < max_degree]
        p = open_[int(rng.integers(len(open_)))]
        parents.append(p)
        kids.append(0)
        kids[p] += 1
    nodes = [NetworkNode("n0")]
    lo, hi = capacities
    for i in range(1, n):
        if rng.random() < unbounded_prob:
            cap = UNBOUNDED
        else:
            cap = Fraction(int(rng.integers(lo, hi + 1)))
        slots = int(rng.integers(1, max_slots + 1)) if kids[i] == 0 else 0
        nodes.append(NetworkNode(f"n{i}", f"n{parents[i]}", cap, slots))
    return Topology(tuple(nodes), "n0")
