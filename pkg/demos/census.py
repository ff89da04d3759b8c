"""Count rho-invariant clusters: Gr(3,6) under rho^3 and Gr(3,8) under rho^4.
The second one enumerates the full E8 exchange graph (about a minute)."""
import sys
import numpy as np

from cyclic_loci.cluster import (rho_closed_panel, rectangles_seed, exchange_graph,
                                 invariant_cluster_count, invariant_cluster_complex)

pts, perm = rho_closed_panel(3, 6, 3, 3, np.random.default_rng(0))
r = exchange_graph(rectangles_seed(3, 6, pts))
print(f"Gr(3,6): {r['seeds']} seeds, invariant clusters {invariant_cluster_count(r, perm)}")

if "--quick" not in sys.argv:
    pts, perm = rho_closed_panel(3, 8, 4, 3, np.random.default_rng(0))
    r = exchange_graph(rectangles_seed(3, 8, pts), cap=100_000)
    cx = invariant_cluster_complex(r, perm)
    print(f"Gr(3,8): {r['seeds']} seeds, {r['variables']} variables")
    print(f"  invariant complex faces by size: {cx['faces']}")
