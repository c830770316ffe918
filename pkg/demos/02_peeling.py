"""Peeling a clustered graph into highly connected parts joined by stubs."""

from forestdecomp import find_small_cut, peel
from forestdecomp.generators import clustered, properties

g, clusters = clustered([12, 9, 7], seed=3, p=0.9, bridges=1)
print("host:", properties(g))

cut = find_small_cut(g, 3)
print(f"first small cut: order {cut.order}, side of {len(cut.side_a)} vertices")

seq = peel(g, 3)
for i, (vs, cuts) in enumerate(zip(seq.vertex_sets, seq.cut_edges), 1):
    h = seq.part(i - 1)
    print(f"H_{i}: {len(vs)} vertices, {h.edge_count} edges, {len(h.stubs)} stubs, cut C_{i} = {sorted(cuts)}")

# Every cut edge became exactly one stub on the remaining side.
created = [s for s in seq.stubs.values() if s.edge is not None]
print("stubs created:", [(s.vertex, s.index, s.edge) for s in created])
