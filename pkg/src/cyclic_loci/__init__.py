"""Cyclic symmetry loci in totally nonnegative Grassmannians: bounded affine
permutations, positroids, rho^l-fixed points, TP tests and generalized
cluster structures."""
from .affine import AffinePerm, PosetParams, BridgePoset, identity_perm, bridge_rank
from .positroids import necklace_from_perm, positroid_from_necklace, weakly_separated
from .grassmann import pluckers_of, karp_point, sample_cell_point, extended_minor
from .tptests import OptimalCollection, initial_collection, initial_chain, eta_table
from .cluster import CSSeed, initial_seed, mutate, exchange_graph

__version__ = "0.1.0"
