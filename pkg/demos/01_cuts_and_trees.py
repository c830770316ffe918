"""Minimum cuts, tree packings and low-degree spanning trees on small graphs."""

from forestdecomp import (
    balanced_strong_orientation,
    global_min_cut,
    low_degree_spanning_tree,
    pack_spanning_trees,
)
from forestdecomp.graph import Multigraph, complete_graph, cycle_graph, degrees_in

# Two triangles joined by a bridge: the minimum cut is the bridge itself.
barbell = Multigraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
cut = global_min_cut(barbell)
print("barbell min cut:", cut.order, "edge", sorted(cut.crossing), "side", sorted(cut.side_a))

# K6 is 5-edge-connected, so two edge-disjoint spanning trees exist.
k6 = complete_graph(6)
pack = pack_spanning_trees(k6, 2)
print("K6 packing:", pack.to_json())

# A 5-cycle has too few edges for two trees; the failure comes with a partition.
c5 = pack_spanning_trees(cycle_graph(5), 2)
print("C5 packing feasible?", c5.feasible, "certificate:", [sorted(p) for p in c5.certificate])

# Balanced strong orientation, then an out-branching of it.
o = balanced_strong_orientation(k6)
print("K6 out-degrees:", o.out_degrees(), "in-degrees:", o.in_degrees())
tree = low_degree_spanning_tree(k6)
print("tree degrees:", degrees_in(k6, tree), "bound (deg+3)/2 =", (5 + 3) / 2)
