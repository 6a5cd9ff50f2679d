"""Request graphs and their cut-flow tables.

A request has ``k`` VMs, optional uplink demands (VM to gateway) and
undirected chatter demands (VM to VM). VM subsets are bitmasks: bit ``i``
stands for ``vms[i]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

import numpy as np

from .ratios import common_scale, format_exact, parse_amount

SUBSET_LIMIT = 24
EXACT_INT_LIMIT = 2 ** 53


class RequestError(ValueError):
    pass


class SubsetLimitError(RequestError):
    def __init__(self, k: int, limit: int = SUBSET_LIMIT):
        super().__init__(
            f"request has {k} VMs; subset tables are limited to {limit} "
            "(use the cluster solver for large uniform requests)")
        self.k = k


@dataclass(frozen=True, eq=False)
class RequestGraph:
    vms: tuple
    uplinks: tuple = ()   # (vm, bandwidth)
    chatter: tuple = ()   # (vm_a, vm_b, bandwidth), vm_a listed before vm_b
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        vms = tuple(self.vms)
        if not vms:
            raise RequestError("request needs at least one VM")
        index = {}
        for i, v in enumerate(vms):
            if v in index:
                raise RequestError(f"duplicate VM {v!r}")
            index[v] = i

        ups = []
        seen_up = set()
        for vm, bw in self.uplinks:
            bw = parse_amount(bw, what="bandwidth")
            if vm not in index:
                raise RequestError(f"uplink references unknown VM {vm!r}")
            if vm in seen_up:
                raise RequestError(f"duplicate edge: second uplink for {vm!r}")
            if bw <= 0:
                raise RequestError(f"nonpositive bandwidth {bw} on uplink of {vm!r}")
            seen_up.add(vm)
            ups.append((vm, bw))

        chat = []
        seen = set()
        for a, b, bw in self.chatter:
            bw = parse_amount(bw, what="bandwidth")
            for v in (a, b):
                if v not in index:
                    raise RequestError(f"chatter references unknown VM {v!r}")
            if a == b:
                raise RequestError(f"self-loop chatter edge on {a!r}")
            if bw <= 0:
                raise RequestError(f"nonpositive bandwidth {bw} on chatter {a!r}-{b!r}")
            if index[a] > index[b]:
                a, b = b, a
            if (a, b) in seen:
                raise RequestError(f"duplicate edge {a!r}-{b!r}")
            seen.add((a, b))
            chat.append((a, b, bw))

        object.__setattr__(self, "vms", vms)
        object.__setattr__(self, "uplinks", tuple(ups))
        object.__setattr__(self, "chatter", tuple(chat))
        self._cache["index"] = index

    def _key(self):
        return self.vms, self.uplinks, self.chatter

    def __eq__(self, other):
        if not isinstance(other, RequestGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def k(self) -> int:
        return len(self.vms)

    @property
    def index(self) -> dict:
        return self._cache["index"]

    def scaled(self):
        """Bandwidths as integers over a common denominator.

        Returns ``(scale, uplink_ints, edges)`` where ``uplink_ints[i]`` is the
        uplink of VM ``i`` and ``edges`` lists ``(i, j, w)`` chatter triples.
        """
        c = self._cache
        if "scaled" not in c:
            scale = common_scale([bw for _, bw in self.uplinks] + [bw for *_, bw in self.chatter])
            up = [0] * self.k
            for vm, bw in self.uplinks:
                up[self.index[vm]] = int(bw * scale)
            edges = [(self.index[a], self.index[b], int(bw * scale)) for a, b, bw in self.chatter]
            if sum(up) + sum(w for *_, w in edges) >= EXACT_INT_LIMIT:
                raise OverflowError("request bandwidths too fine-grained for exact tables")
            c["scaled"] = (scale, up, edges)
        return c["scaled"]

    def total_uplink(self) -> Fraction:
        return sum((bw for _, bw in self.uplinks), Fraction(0))


@dataclass(frozen=True)
class FlowTable:
    """Cut flow of every VM subset, stored as integers times ``1/scale``."""

    k: int
    scale: int
    scaled: np.ndarray

    def __getitem__(self, mask: int) -> Fraction:
        if not 0 <= mask < len(self.scaled):
            raise IndexError(f"subset {mask:#x} outside a {self.k}-VM request")
        return Fraction(int(self.scaled[mask]), self.scale)

    def __len__(self) -> int:
        return len(self.scaled)


def check_subset_limit(r: RequestGraph, limit: int = SUBSET_LIMIT) -> None:
    if r.k > limit:
        raise SubsetLimitError(r.k, limit)


def build_flow_table(r: RequestGraph) -> FlowTable:
    """Flow[S] = uplinks inside S plus chatter with exactly one end in S."""
    from ._kernels import flow_table

    check_subset_limit(r)
    scale, up, edges = r.scaled()
    ea = np.array([e[0] for e in edges], dtype=np.int64)
    eb = np.array([e[1] for e in edges], dtype=np.int64)
    ew = np.array([e[2] for e in edges], dtype=np.int64)
    table = flow_table(r.k, np.array(up, dtype=np.int64), ea, eb, ew)
    return FlowTable(r.k, scale, table)


def request_from_dict(data: Mapping, *, max_vms: int | None = SUBSET_LIMIT) -> RequestGraph:
    try:
        vms = list(data["vms"])
    except (KeyError, TypeError) as exc:
        raise RequestError("request JSON needs a 'vms' list") from exc
    if max_vms is not None and len(vms) > max_vms:
        raise SubsetLimitError(len(vms), max_vms)
    try:
        ups = [(u["vm"], u["bw"]) for u in data.get("uplinks", [])]
        chat = [(c["a"], c["b"], c["bw"]) for c in data.get("chatter", [])]
    except (KeyError, TypeError) as exc:
        raise RequestError(f"malformed edge entry: {exc}") from exc
    try:
        return RequestGraph(tuple(vms), tuple(ups), tuple(chat))
    except ValueError as exc:
        if isinstance(exc, RequestError):
            raise
        raise RequestError(str(exc)) from exc


def parse_request(text: str, *, max_vms: int | None = SUBSET_LIMIT) -> RequestGraph:
    """Parse and validate a JSON request document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RequestError(f"request is not valid JSON: {exc}") from exc
    return request_from_dict(data, max_vms=max_vms)


def request_to_dict(r: RequestGraph) -> dict:
    return {
        "vms": list(r.vms),
        "uplinks": [{"vm": vm, "bw": format_exact(bw)} for vm, bw in r.uplinks],
        "chatter": [{"a": a, "b": b, "bw": format_exact(bw)} for a, b, bw in r.chatter],
    }


def load_request(path, *, max_vms: int | None = SUBSET_LIMIT) -> RequestGraph:
    with open(path) as fh:
        return parse_request(fh.read(), max_vms=max_vms)


def dump_request(r: RequestGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(request_to_dict(r), fh, indent=2, sort_keys=True)
        fh.write("\n")


def clique_request(k: int, bandwidth, *, prefix: str = "v") -> RequestGraph:
    """``k`` VMs, every pair joined by ``bandwidth / (k - 1)``; no uplinks."""
    bw = parse_amount(bandwidth, what="bandwidth")
    vms = tuple(f"{prefix}{i + 1}" for i in range(k))
    if k == 1:
        return RequestGraph(vms)
    per_edge = bw / (k - 1)
    chat = tuple((vms[i], vms[j], per_edge) for i in range(k) for j in range(i + 1, k))
    return RequestGraph(vms, (), chat)


def path_request(k: int, bandwidths, uplink=None, *, prefix: str = "v") -> RequestGraph:
    """VMs chained in order; ``bandwidths[i]`` joins VM ``i`` and ``i + 1``."""
    vms = tuple(f"{prefix}{i + 1}" for i in range(k))
    chat = tuple((vms[i], vms[i + 1], bandwidths[i]) for i in range(k - 1))
    ups = () if uplink is None else ((vms[0], uplink),)
    return RequestGraph(vms, ups, chat)


def _draw_bandwidth(rng, lo: Fraction, hi: Fraction, quantum: Fraction) -> Fraction:
    steps = int((hi - lo) / quantum)
    return lo + quantum * int(rng.integers(0, steps + 1))


def random_request(k: int, rng, *, extra_edges: float = 0.5, uplink_prob: float = 0.5,
                   bandwidth=("0.1", "1"), quantum="0.001") -> RequestGraph:
    """Random connected request: a random spanning tree plus extra chatter.

    ``extra_edges`` is the probability of each remaining VM pair. Bandwidths
    are uniform on a grid of ``quantum`` steps between the two bounds.
    """
    lo, hi = (parse_amount(b) for b in bandwidth)
    q = parse_amount(quantum)
    vms = tuple(f"v{i + 1}" for i in range(k))
    pairs = set()
    for i in range(1, k):
        pairs.add((int(rng.integers(0, i)), i))
    for i in range(k):
        for j in range(i + 1, k):
            if (i, j) not in pairs and rng.random() < extra_edges:
                pairs.add((i, j))
    chat = tuple((vms[i], vms[j], _draw_bandwidth(rng, lo, hi, q)) for i, j in sorted(pairs))
    ups = tuple((vms[i], _draw_bandwidth(rng, lo, hi, q)) for i in range(k)
                if rng.random() < uplink_prob)
    return RequestGraph(vms, ups, chat)


def random_path_request(k: int, rng, *, bandwidth=("0.1", "1"), quantum="0.001",
                        uplink: bool = True) -> RequestGraph:
    lo, hi = (parse_amount(b) for b in bandwidth)
    q = parse_amount(quantum)
    bws = [_draw_bandwidth(rng, lo, hi, q) for _ in range(k - 1)]
    up = _draw_bandwidth(rng, lo, hi, q) if uplink else None
    return path_request(k, bws, up)
