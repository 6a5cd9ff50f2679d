"""Adversarial instances built from 3-partition inputs.

Two constructions, both on height-two trees under a gateway with ``m``
group switches behind capacity-6 links:

* weighted path: a path on ``mB`` VMs whose runs of lengths ``s_1..s_3m``
  are joined by heavy edges (weight ``W``) and separated by light ones;
* unweighted tree: ``3m`` star centers chained together, center ``i`` with
  ``s_i * M`` unit-weight leaves.

Yes-instances admit congestion 1; no-instances force a heavy (resp. ``M``
unit) flow across some capacity-6 link.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil

from .dp_solver import Embedding, evaluate
from .ratios import parse_amount
from .request import RequestGraph
from .topology import NetworkNode, Topology

ROOT_CAPACITY = Fraction(6)
DEFAULT_MAX_NODES = 200_000


class HardnessError(ValueError):
    pass


@dataclass(frozen=True)
class ThreePartitionInstance:
    m: int
    S: tuple
    B: int
    known_partition: tuple | None = None   # m index triples
    constrained: bool = True

    def __post_init__(self):
        S = tuple(int(s) for s in self.S)
        object.__setattr__(self, "S", S)
        problems = self.violations()
        if problems:
            raise HardnessError("; ".join(problems))
        if self.known_partition is not None:
            object.__setattr__(self, "known_partition",
                               tuple(tuple(g) for g in self.known_partition))
            if not is_three_partition(self, self.known_partition):
                raise HardnessError("known_partition is not a valid 3-partition")

    def violations(self) -> list:
        out = []
        if self.m < 1:
            out.append("m must be >= 1")
        if len(self.S) != 3 * self.m:
            out.append(f"need {3 * self.m} integers, got {len(self.S)}")
        if any(s <= 0 for s in self.S):
            out.append("integers must be positive")
        if sum(self.S) != self.m * self.B:
            out.append(f"integers sum to {sum(self.S)}, expected m*B = {self.m * self.B}")
        if self.constrained:
            bad = [s for s in self.S if not (self.B < 4 * s and 2 * s < self.B)]
            if bad:
                out.append(f"values {bad} violate B/4 < s < B/2 with B = {self.B}")
        return out

    @classmethod
    def from_values(cls, S, m: int | None = None, **kw):
        S = tuple(int(s) for s in S)
        if m is None:
            if len(S) % 3:
                raise HardnessError("number of integers must be a multiple of 3")
            m = len(S) // 3
        total = sum(S)
        if total % m:
            raise HardnessError(f"sum {total} is not divisible by m = {m}")
        return cls(m, S, total // m, **kw)


def is_three_partition(tp: ThreePartitionInstance, groups) -> bool:
    used = sorted(i for g in groups for i in g)
    return (len(groups) == tp.m and used == list(range(3 * tp.m))
            and all(len(g) == 3 and sum(tp.S[i] for i in g) == tp.B for g in groups))


def find_three_partition(tp: ThreePartitionInstance):
    """Exhaustive search for ``m`` triples of sum ``B``; None if there is none."""
    def rec(remaining):
        if not remaining:
            return []
        first, rest = remaining[0], remaining[1:]
        for a, b in combinations(rest, 2):
            if tp.S[first] + tp.S[a] + tp.S[b] == tp.B:
                sub = rec([i for i in rest if i not in (a, b)])
                if sub is not None:
                    return [(first, a, b)] + sub
        return None

    found = rec(list(range(len(tp.S))))
    return None if found is None else tuple(found)


def find_equal_sum_partition(tp: ThreePartitionInstance):
    """Exhaustive search for ``m`` groups of any size, each summing to ``B``."""
    n = len(tp.S)
    order = sorted(range(n), key=lambda i: -tp.S[i])
    loads = [0] * tp.m
    groups = [[] for _ in range(tp.m)]

    def rec(pos):
        if pos == n:
            return True
        i = order[pos]
        tried = set()
        for g in range(tp.m):
            if loads[g] in tried or loads[g] + tp.S[i] > tp.B:
                continue
            tried.add(loads[g])
            loads[g] += tp.S[i]
            groups[g].append(i)
            if rec(pos + 1):
                return True
            loads[g] -= tp.S[i]
            groups[g].pop()
        return False

    return tuple(tuple(sorted(g)) for g in groups) if rec(0) else None


@dataclass
class HardInstance:
    topology: Topology
    request: RequestGraph
    gap_bound: Fraction
    yes_certificate: Embedding | None = None
    M: int | None = field(default=None)


def _interval_bounds(S):
    q = [0]
    for s in S:
        q.append(q[-1] + s)
    return q


def _height_two_tree(m: int, per_group: int, leaf_capacity: Fraction) -> Topology:
    nodes = [NetworkNode("g")]
    for j in range(m):
        nodes.append(NetworkNode(f"S{j + 1}", "g", ROOT_CAPACITY))
        for x in range(per_group):
            nodes.append(NetworkNode(f"S{j + 1}.{x + 1}", f"S{j + 1}", leaf_capacity, 1))
    return Topology(tuple(nodes), "g")


def _require_no_instance_or_constrained(tp: ThreePartitionInstance):
    if tp.constrained:
        return
    # Unconstrained input is accepted only when no grouping of any size works,
    # so the lower bound still holds.
    if find_equal_sum_partition(tp) is not None:
        raise HardnessError("unconstrained input must admit no equal-sum grouping")


def gen_weighted_path(tp: ThreePartitionInstance, W=100) -> HardInstance:
    """Weighted path request on a two-level tree (heavy weight ``W > 6``).

    Leaf links have capacity ``2W`` so a VM inside a run, which carries two
    heavy edges, sits exactly at congestion 1.
    """
    W = parse_amount(W, what="W")
    if W <= 6:
        raise HardnessError("W must exceed 6")
    _require_no_instance_or_constrained(tp)
    m, B, S = tp.m, tp.B, tp.S
    k = m * B
    topo = _height_two_tree(m, B, 2 * W)
    q = _interval_bounds(S)
    run_of = [0] * k
    for j in range(len(S)):
        for v in range(q[j], q[j + 1]):
            run_of[v] = j
    vms = tuple(f"v{i + 1}" for i in range(k))
    chat = tuple((vms[i], vms[i + 1], W if run_of[i] == run_of[i + 1] else Fraction(1))
                 for i in range(k - 1))
    req = RequestGraph(vms, ((vms[0], Fraction(1)),), chat)

    cert = None
    groups = tp.known_partition
    if groups is not None:
        assignment = {}
        for j, group in enumerate(groups):
            x = 0
            for idx in sorted(group):
                for v in range(q[idx], q[idx + 1]):
                    x += 1
                    assignment[vms[v]] = f"S{j + 1}.{x}"
        cert = Embedding(assignment, evaluate(topo, req, assignment))
    return HardInstance(topo, req, W / 6, cert)


def star_multiplier(tp: ThreePartitionInstance, epsilon) -> int:
    eps = parse_amount(epsilon, what="epsilon")
    if not 0 < eps < 1:
        raise HardnessError("epsilon must lie strictly between 0 and 1")
    return (5 * tp.m * tp.B) ** ceil((1 - eps) / eps)


def gen_unweighted_tree(tp: ThreePartitionInstance, epsilon="1/2", *,
                        max_nodes: int = DEFAULT_MAX_NODES, M: int | None = None) -> HardInstance:
    """Chain of ``3m`` unit-weight stars on a two-level tree.

    Each group switch has ``3 + B*M`` leaves behind links of capacity
    ``B*M + 2``. ``M`` defaults to ``(5mB)^ceil((1-eps)/eps)``.
    """
    _require_no_instance_or_constrained(tp)
    m, B, S = tp.m, tp.B, tp.S
    if M is None:
        M = star_multiplier(tp, epsilon)
    per_group = 3 + B * M
    n_nodes = 1 + m + m * per_group
    if n_nodes > max_nodes:
        raise HardnessError(f"instance would have {n_nodes} nodes (cap {max_nodes})")
    topo = _height_two_tree(m, per_group, Fraction(B * M + 2))

    n_centers = 3 * m
    centers = tuple(f"c{i + 1}" for i in range(n_centers))
    q = _interval_bounds(S)
    star_leaves = [tuple(f"x{M * q[i] + j + 1}" for j in range(M * S[i])) for i in range(n_centers)]
    vms = centers + tuple(x for leaves in star_leaves for x in leaves)
    one = Fraction(1)
    chat = [(centers[i], centers[i + 1], one) for i in range(n_centers - 1)]
    for i in range(n_centers):
        chat.extend((centers[i], x, one) for x in star_leaves[i])
    ups = ((centers[0], one),) if n_centers == 1 else ((centers[0], one), (centers[-1], one))
    req = RequestGraph(vms, ups, tuple(chat))

    cert = None
    if tp.known_partition is not None:
        assignment = {}
        for j, group in enumerate(tp.known_partition):
            x = 0
            for idx in sorted(group):
                for v in (centers[idx],) + star_leaves[idx]:
                    x += 1
                    assignment[v] = f"S{j + 1}.{x}"
        cert = Embedding(assignment, evaluate(topo, req, assignment))
    return HardInstance(topo, req, Fraction(M, 6), cert, M)
