"""Minimize a convex quadratic over a product of two simplices."""

import numpy as np

from gcdvsms import TuningParams, optimize
from gcdvsms.simplex import sample_uniform

target = [np.array([0.7, 0.2, 0.1]), np.array([0.25, 0.25, 0.25, 0.25])]


def f(P):
    return sum(float(np.sum((p - t) ** 2)) for p, t in zip(P, target))


P0 = sample_uniform([3, 4], seed=3)
res = optimize(P0, f)
print("value", res.value, "runs", res.runs, "evaluations", res.total_evaluations)
for p in res.point:
    print(p.round(4))

# a coarser step floor trades accuracy for speed
quick = optimize(P0, f, TuningParams(phi=1e-2))
print("coarse value", quick.value, "evaluations", quick.total_evaluations)

# per-iteration trace of the first few accepted moves
res = optimize(P0, f, TuningParams(phi=1e-2), trace=True)
for rec in res.trace[:5]:
    print(rec)
