"""Objective wrapper with evaluation counting and optional batch evaluation."""

from __future__ import annotations

import threading
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import EvaluationError, InvalidInputError
from .simplex import flatten, unflatten, validate_shape


class SimplexObjective:
    """A black-box function over a product of unit simplices.

    Parameters
    ----------
    func : callable
        ``func(blocks) -> float`` where ``blocks`` is a list of 1-D arrays,
        one per simplex block.
    sizes : sequence of int
        Block sizes ``(n_1, ..., n_B)``.
    batch : callable, optional
        ``batch(X) -> values`` evaluating many points at once. ``X`` has
        shape ``(k, M)`` with the blocks concatenated along each row. When
        given, the optimizer scores all candidate moves of an iteration with
        a single call.
    name : str, optional

    Attributes
    ----------
    n_evaluations : int
        Number of points evaluated so far, through either entry point.
    """

    def __init__(
        self,
        func: Optional[Callable] = None,
        sizes: Sequence[int] = (),
        batch: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        name: Optional[str] = None,
    ):
        if func is None and batch is None:
            raise InvalidInputError("need func or batch")
        self.sizes = validate_shape(sizes)
        self.M = sum(self.sizes)
        self.func = func
        self.batch = batch
        self.name = name or getattr(func, "__name__", "objective")
        self.n_evaluations = 0
        self._lock = threading.Lock()

    def _count(self, k: int) -> None:
        with self._lock:
            self.n_evaluations += k

    def _scalar(self, blocks) -> float:
        if self.func is not None:
            return float(self.func(blocks))
        return float(self.batch(flatten(blocks)[None, :])[0])

    def __call__(self, blocks) -> float:
        blocks = [np.asarray(b, dtype=float) for b in blocks]
        if tuple(b.size for b in blocks) != self.sizes:
            raise InvalidInputError(
                f"point shape {tuple(b.size for b in blocks)} != {self.sizes}"
            )
        self._count(1)
        value = self._scalar(blocks)
        if not np.isfinite(value):
            raise EvaluationError(f"objective returned {value}", point=blocks)
        return value

    def evaluate_flat(self, X: np.ndarray, executor=None) -> np.ndarray:
        """Evaluate every row of ``X`` (shape ``(k, M)``).

        Without a batch function each row is evaluated through ``func``,
        via ``executor.map`` when an executor is supplied.
        """
        X = np.atleast_2d(X)
        if X.shape[0] == 0:
            return np.empty(0)
        self._count(X.shape[0])
        if self.batch is not None:
            values = np.asarray(self.batch(X), dtype=float).reshape(-1)
        else:
            points = [unflatten(row, self.sizes) for row in X]
            mapper = executor.map if executor is not None else map
            values = np.fromiter(mapper(self._scalar, points), dtype=float, count=len(points))
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            r = bad[0]
            raise EvaluationError(
                f"objective returned {values[r]}", point=unflatten(X[r], self.sizes)
            )
        return values

    def reset(self) -> None:
        self.n_evaluations = 0

    def __repr__(self) -> str:
        return f"SimplexObjective({self.name!r}, sizes={self.sizes})"


def as_objective(objective, sizes: Sequence[int]) -> SimplexObjective:
    """Wrap a plain callable; pass a :class:`SimplexObjective` through."""
    if isinstance(objective, SimplexObjective):
        if objective.sizes != tuple(sizes):
            raise InvalidInputError(
                f"objective shape {objective.sizes} != point shape {tuple(sizes)}"
            )
        return objective
    return SimplexObjective(objective, sizes)
