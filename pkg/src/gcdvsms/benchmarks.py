"""Hypercube test functions lifted onto unit simplices.

A box ``[l, u]^d`` is mapped onto the first ``d`` coordinates of a
``(d+1)``-simplex through ``y_i = (x_i - l) / (d (u - l))``; the last
coordinate is slack and never read. Inverting that map lets a box benchmark
be evaluated on simplex blocks, and summing over ``n`` independent blocks
gives a multi-block test problem.

Every function accepts a ``(..., d)`` array and reduces over the last axis.
Two variants exist: ``"canonical"`` (textbook formulas, minimum 0 at the
origin) and ``"paper_literal"`` (alternative published forms of Rastrigin,
Ackley and Griewank, kept for comparison).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidInputError, UnsupportedVariantError
from .objective import SimplexObjective

VARIANTS = ("canonical", "paper_literal")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise InvalidInputError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def rastrigin(x, variant="canonical"):
    _check_variant(variant)
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    a = 10.0 if variant == "canonical" else 1.0
    return 10.0 * d + np.sum(x**2 - a * np.cos(2 * np.pi * x), axis=-1)


def ackley(x, variant="canonical"):
    _check_variant(variant)
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    c = 1.0 / d if variant == "canonical" else 0.5
    return (-20.0 * np.exp(-0.2 * np.sqrt(c * np.sum(x**2, axis=-1)))
            - np.exp(c * np.sum(np.cos(2 * np.pi * x), axis=-1)) + np.e + 20.0)


def sphere(x, variant="canonical"):
    _check_variant(variant)
    x = np.asarray(x, dtype=float)
    return np.sum(x**2, axis=-1)


def griewank(x, variant="canonical"):
    _check_variant(variant)
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    value = (np.sum(x**2, axis=-1) / 4000.0
             - np.prod(np.cos(x / np.sqrt(np.arange(1, d + 1))), axis=-1))
    return value + 1.0 if variant == "canonical" else value


# name -> (function, l, u)
REGISTRY: dict[str, tuple[Callable, float, float]] = {
    "rastrigin": (rastrigin, -5.12, 5.12),
    "ackley": (ackley, -5.0, 5.0),
    "sphere": (sphere, -5.12, 5.12),
    "griewank": (griewank, -500.0, 500.0),
}


@dataclass(frozen=True)
class HypercubeBenchmark:
    name: str
    d: int
    l: float
    u: float
    variant: str = "canonical"

    def __post_init__(self):
        if self.name not in REGISTRY:
            raise InvalidInputError(f"unknown benchmark {self.name!r}; known: {sorted(REGISTRY)}")
        _check_variant(self.variant)
        if self.d < 1 or not self.l < self.u:
            raise InvalidInputError("need d >= 1 and l < u")

    def eval(self, x):
        return REGISTRY[self.name][0](x, self.variant)

    def __call__(self, x):
        return self.eval(x)


def get_benchmark(name: str, d: int, variant: str = "canonical") -> HypercubeBenchmark:
    """Benchmark ``name`` on its default box in dimension ``d``."""
    if name not in REGISTRY:
        raise InvalidInputError(f"unknown benchmark {name!r}; known: {sorted(REGISTRY)}")
    _, l, u = REGISTRY[name]
    return HypercubeBenchmark(name, int(d), l, u, variant)


class LiftedObjective:
    """A box benchmark evaluated on ``(d+1)``-entry simplex vectors."""

    def __init__(self, base: HypercubeBenchmark):
        self.base = base
        self.d = base.d
        self.size = base.d + 1

    def to_box(self, y):
        """Map simplex coordinates to box coordinates (slack dropped).

        No clamping: points whose image falls outside the box are evaluated
        on the natural extension of the formula.
        """
        y = np.asarray(y, dtype=float)
        if y.shape[-1] != self.size:
            raise InvalidInputError(f"expected blocks of length {self.size}, got {y.shape[-1]}")
        b = self.base
        return (b.u - b.l) * b.d * y[..., :b.d] + b.l

    def from_box(self, x):
        x = np.asarray(x, dtype=float)
        b = self.base
        y = (x - b.l) / (b.d * (b.u - b.l))
        return np.concatenate([y, 1.0 - y.sum(axis=-1, keepdims=True)], axis=-1)

    def __call__(self, y):
        return self.base.eval(self.to_box(y))


def lift_to_simplex(base: HypercubeBenchmark) -> LiftedObjective:
    return LiftedObjective(base)


def multi_block(lifted: LiftedObjective, n: int) -> SimplexObjective:
    """Sum of ``n`` independent copies of ``lifted``, one per block."""
    if int(n) < 1:
        raise InvalidInputError("n must be >= 1")
    n = int(n)
    size = lifted.size

    def batch(X):
        X = np.asarray(X, dtype=float)
        return lifted(X.reshape(X.shape[0], n, size)).sum(axis=-1)

    def func(blocks):
        return float(batch(np.concatenate(blocks)[None, :])[0])

    b = lifted.base
    name = f"{b.name}[n={n},d={b.d},{b.variant}]"
    return SimplexObjective(func, (size,) * n, batch=batch, name=name)


def make_objective(name: str, n: int, d: int, variant: str = "canonical") -> SimplexObjective:
    return multi_block(lift_to_simplex(get_benchmark(name, d, variant)), n)


def known_optimum(base: HypercubeBenchmark, n: int = 1):
    """Global minimiser and minimum of the lifted ``n``-block problem.

    Only the canonical variants are supported; all four have their box
    minimum at the origin with value 0.
    """
    if base.variant != "canonical":
        raise UnsupportedVariantError("known optimum only available for the canonical variant")
    block = LiftedObjective(base).from_box(np.zeros(base.d))
    return [block.copy() for _ in range(int(n))], 0.0
