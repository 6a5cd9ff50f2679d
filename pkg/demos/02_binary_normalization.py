"""
Why wide switches can be split into binary trees
================================================

A top-of-rack switch with five servers is rewritten as a left-heavy binary
tree. The inserted links are unbounded, so every original path keeps the
same set of finite links and every placement keeps its congestion.
"""

from vmtree import UNBOUNDED, make_topology, path_edges, to_binary

rack = make_topology("g", [("tor", "g", "40", 0)] +
                     [(f"s{i}", "tor", str(10 * i), 1) for i in range(1, 6)])
b = to_binary(rack)

print("original nodes:", len(rack.nodes), " binary nodes:", len(b.nodes))
for n in b.nodes:
    cap = "inf" if n.parent_capacity is UNBOUNDED else n.parent_capacity
    tag = " (inserted)" if n.synthetic else ""
    print(f"  {n.id:<7} parent={n.parent!s:<7} cap={cap}{tag}")

# s1 and s5 used to be siblings; now a few synthetic hops sit between them
print("old path s1-s5:", path_edges(rack, "s1", "s5"))
print("new path s1-s5:", path_edges(b, "s1", "s5"))
finite = [e for e in path_edges(b, "s1", "s5") if b.capacity(e) is not UNBOUNDED]
print("finite links on new path:", finite)

# children stay in order: the first ceil(5/2) servers go left
print("left block:", b.children[b.children["tor"][0]])
