"""Decompose a two-cluster host into copies of the forest P1 + P2.

The forest has a 1-edge and a 2-edge component (coprime sizes).  The
pipeline builds three chain trees from it, decomposes the host into those
trees with equally many copies of the two auxiliary ones, and finally cuts
every chain tree back into copies of the forest.
"""

from forestdecomp import PipelineConfig, decompose_forest, verify
from forestdecomp.chains import forest_chain_parameters
from forestdecomp.generators import clustered, properties
from forestdecomp.graph import disjoint_union, path_graph

forest = disjoint_union([path_graph(1), path_graph(2)])
params = forest_chain_parameters(forest, minimal=True)
print("chain parameters:", params.summary())

g, _ = clustered([36, 22], seed=0, p=0.85, bridges=2, modulus=3, part_moduli=[None, 15])
print("host:", properties(g, 3))

report = {}
d = decompose_forest(g, forest, minimal=True, config=PipelineConfig(k=3, delta=14), report=report)
print("parts:", len(d.parts), "verdict:", verify(d))
print("chain-tree counts before assembly:", report["counts"])
for step in report["steps"]:
    print("  step", step)
