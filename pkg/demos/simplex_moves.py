"""Coordinate moves on a single simplex block."""

import numpy as np

from gcdvsms.simplex import is_feasible, negative_move, positive_move, sample_uniform, sparsify

v = np.array([0.5, 0.3, 0.2])

# raise the first entry by 0.1; the other two give up 0.05 each
print(positive_move(v, 0, 0.1, lam=1e-6))

# lower it by 0.2 instead; the mass goes back to the others
print(negative_move(v, 0, 0.2, lam=1e-6))

# too large a step leaves the simplex
q = negative_move(v, 2, 0.5, lam=1e-6)
print(q, is_feasible(q))

# tiny entries are folded into the significant ones
print(sparsify([0.6, 0.39999999, 1e-8], lam=1e-6))

# uniform draws, one vector per block
for block in sample_uniform([2, 4], seed=0):
    print(block.round(3), block.sum())
