"""Sample rho^l-fixed points in the identity cell and check the orbifold
Ptolemy relation L^p = sum_s eta_s K^s J^(k-s) numerically."""
import numpy as np

from cyclic_loci.affine import PosetParams
from cyclic_loci import identities as ids

rng = np.random.default_rng(0)
for k, l, p in [(2, 2, 4), (2, 3, 5), (3, 2, 4), (3, 3, 5), (4, 2, 6)]:
    P = PosetParams(k, l, p * l)
    r = ids.verify_ptolemy(P, 10, rng)
    print(f"k={k} l={l} p={p} n={P.n}: max relative residual {r['max_residual']:.2e}")

fe = ids.firstegs_reduction(10, rng)
print(f"Gr(2,4) reduction: max residual {fe['max_residual']:.2e}")
