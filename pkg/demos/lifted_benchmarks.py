"""Hypercube benchmarks lifted onto simplex blocks."""

import numpy as np

from gcdvsms import optimize
from gcdvsms.benchmarks import get_benchmark, known_optimum, lift_to_simplex, make_objective
from gcdvsms.simplex import sample_uniform

bench = get_benchmark("rastrigin", 5)
lifted = lift_to_simplex(bench)

# the box center sits at y = 1/(2d) with half the mass on the slack entry
y = np.array([0.1] * 5 + [0.5])
print(lifted.to_box(y), lifted(y))

# five copies summed over five blocks
H = make_objective("ackley", n=5, d=5)
P_star, f_star = known_optimum(get_benchmark("ackley", 5), 5)
print("known optimum", f_star, H(P_star))

# a single start; each sweep of the acceptance suite uses many of these
res = optimize(sample_uniform(H.sizes, 11), H)
print("ackley from seed 11:", res.value, "after", res.runs, "runs")
