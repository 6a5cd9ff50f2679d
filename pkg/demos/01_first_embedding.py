"""
Placing a small request on a rack pair
======================================

Two racks behind one switch. The request has a chatty pair (web, cache), a
database talking to the cache, and one VM that needs Internet uplink.
"""

from fractions import Fraction

from vmtree import RequestGraph, evaluate, linear_scan, make_topology, solve

topo = make_topology("g", [
    ("core", "g", "unbounded", 0),
    ("tor1", "core", "40", 0),
    ("tor2", "core", "40", 0),
    ("s1", "tor1", "10", 2),
    ("s2", "tor1", "10", 1),
    ("s3", "tor2", "10", 2),
])

req = RequestGraph(
    vms=("web", "cache", "db", "lb"),
    uplinks=(("lb", "6"),),
    chatter=(("web", "cache", "8"), ("cache", "db", "3"), ("lb", "web", "2")),
)

sol = solve(topo, req)
print("min congestion:", sol.congestion, "=", float(sol.congestion))
for vm, leaf in sol.embedding.assignment.items():
    print(f"  {vm:>5} -> {leaf}")

# the returned placement really achieves that value
assert evaluate(topo, req, sol.embedding) == sol.congestion

# brute force over every slot-respecting placement agrees
print("linear scan:", linear_scan(topo, req).congestion)

# a deliberately naive placement, one VM per server where possible
naive = {"web": "s1", "cache": "s3", "db": "s2", "lb": "s3"}
print("naive placement:", evaluate(topo, req, naive))

# only the full set is kept at the root; retained tables expose every cell
full = solve(topo, req, retain_tables=True)
left_mask, right_mask = full.partition.split("g", 0b1111)
print("root split masks:", bin(left_mask), bin(right_mask))
print("Flow[{web,cache}] =", full.flow[0b0011], "Gbps")
assert full.flow[0] == Fraction(0)
