"""Folding of the framed p-cycle, and the grading obstruction on D_8(4,2)."""
import numpy as np

from cyclic_loci import identities as ids

rng = np.random.default_rng(1)
for c in ids.folding_report(range(2, 7), rng)["cases"]:
    print(f"p={c['p']}: folding residual {c['max_residual']:.1e}, quiver match {c['quiver_match']}")

g = ids.grading_report(200, 12, rng)
print(f"interval scan: {g['scan_count']} variables in {g['scan_orbits']} orbits")
print(f"grading violations along random walks: {g['violations']}")
