"""Residue obstruction for complete binary trees.

Deleting one edge of the depth-k complete binary tree leaves only 2k
possible component sizes, so f3 copies meeting a sparse matching can only
produce a few residues mod n_k.  A graph whose halves have a residue
outside that set cannot be decomposed, however well connected it is.
"""

from forestdecomp.counterexample import (
    assemble_counterexample,
    build_blowup,
    certify_obstruction,
    residue_profile,
    smallest_growth_depth,
)

print("smallest depth with (2k)^2 < n_k:", smallest_growth_depth(2))
profile = residue_profile(7, 2)
print("T_7: n_k =", profile.n_k, "split sizes", profile.t_set)
print(f"{len(profile.attainable)} residues reachable with two matching edges; smallest missing: {profile.missing}")

n_k = profile.n_k
g1, s1 = build_blowup(2, 7, 24, profile.missing)
g2, s2 = build_blowup(2, 7, 24, (n_k - 2 - profile.missing) % n_k)
cx = assemble_counterexample(g1, s1, g2, s2, 2, 7)
report = certify_obstruction(profile, cx)
print("certificate issued:", report.issued)
for name, ok in report.premises.items():
    print(f"  [{'x' if ok else ' '}] {name}")
print("instance:", {k: report.details[k] for k in ("edges", "min_degree", "edge_connectivity")})
