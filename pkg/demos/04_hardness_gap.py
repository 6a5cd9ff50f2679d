"""
A gap instance built from 3-partition
=====================================

Six run lengths must be grouped into two triples of equal sum. When they
can be, the path request fits under the two group switches at congestion 1;
when they cannot, some heavy edge crosses a capacity-6 link.
"""

from fractions import Fraction

from vmtree import ThreePartitionInstance, find_three_partition, gen_weighted_path, solve
from vmtree.hardness import find_equal_sum_partition

yes = ThreePartitionInstance(2, (3, 2, 2, 3, 2, 2), 7)
groups = find_three_partition(yes)
print("triples:", groups)
inst = gen_weighted_path(ThreePartitionInstance(2, yes.S, yes.B, groups), W=100)
print("VMs:", inst.request.k, " certificate:", inst.yes_certificate.congestion)
print("solver optimum:", solve(inst.topology, inst.request, embedding=False).congestion)

# no subset of these sums to 7, so no grouping of any shape works
no = ThreePartitionInstance(2, (2, 2, 2, 2, 2, 4), 7, constrained=False)
assert find_equal_sum_partition(no) is None
hard = gen_weighted_path(no, W=100)
opt = solve(hard.topology, hard.request, embedding=False).congestion
print("no-instance optimum:", opt, f"(>= W/6 = {float(Fraction(100, 6)):.3f})")
