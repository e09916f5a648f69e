"""Geometric primitives on unit simplices.

Vectors are 1-D float arrays; block points are lists of such arrays. Indices
are 0-based in code. Every function here is pure.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DegenerateVectorError, InvalidInputError, MoveUndefinedError

FEAS_TOL = 1e-12


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("simplex vector must be a non-empty 1-D sequence")
    return arr


def validate_shape(sizes: Sequence[int]) -> tuple[int, ...]:
    """Return ``sizes`` as a tuple after checking every block size is >= 1."""
    sizes = tuple(int(n) for n in sizes)
    if not sizes or any(n < 1 for n in sizes):
        raise InvalidInputError(f"invalid block shape {sizes!r}")
    return sizes


def is_feasible(v, tol: float = FEAS_TOL) -> bool:
    """True iff ``min(v) >= -tol`` and ``|sum(v) - 1| <= tol``."""
    v = as_vector(v)
    return bool(v.min() >= -tol and abs(v.sum() - 1.0) <= tol)


def feasible_rows(c: np.ndarray, tol: float = FEAS_TOL) -> np.ndarray:
    """Row-wise :func:`is_feasible` for a 2-D array of candidate vectors."""
    return (c.min(axis=-1) >= -tol) & (np.abs(c.sum(axis=-1) - 1.0) <= tol)


def clamp_rows(c: np.ndarray) -> np.ndarray:
    """Zero out tiny negative entries of feasible rows.

    The removed deficit is taken from the largest entry of each row so sums
    are unchanged. Returns a new array.
    """
    c = np.array(c, dtype=float)
    neg = np.minimum(c, 0.0)
    rows = np.flatnonzero(neg.any(axis=-1))
    if rows.size:
        c[rows] -= neg[rows]
        top = c[rows].argmax(axis=-1)
        c[rows, top] += neg[rows].sum(axis=-1)
    return c


def clamp(v) -> np.ndarray:
    return clamp_rows(as_vector(v)[None, :])[0]


def significant_indices(v, exclude: int, lam: float) -> tuple[np.ndarray, int]:
    """Positions other than ``exclude`` whose value exceeds ``lam``.

    Returns ``(S, K)`` with ``K = len(S)``; ``K == 0`` means no move along
    ``exclude`` is possible.
    """
    v = as_vector(v)
    if not 0 <= exclude < v.size:
        raise InvalidInputError(f"index {exclude} out of range for length {v.size}")
    mask = v > lam
    mask[exclude] = False
    S = np.flatnonzero(mask)
    return S, int(S.size)


def _move(v, i: int, s: float, lam: float, sign: float) -> np.ndarray:
    v = as_vector(v)
    S, K = significant_indices(v, i, lam)
    if K == 0:
        raise MoveUndefinedError(f"no significant position besides {i}")
    q = v.copy()
    q[i] = v[i] + sign * s
    q[S] = v[S] - sign * (s / K)
    return q


def positive_move(v, i: int, s: float, lam: float) -> np.ndarray:
    """Raise entry ``i`` by ``s``, taking ``s/K`` from each significant entry.

    The result may be infeasible; callers check with :func:`is_feasible`.
    """
    return _move(v, i, s, lam, 1.0)


def negative_move(v, i: int, s: float, lam: float) -> np.ndarray:
    """Lower entry ``i`` by ``s``, giving ``s/K`` to each significant entry."""
    return _move(v, i, s, lam, -1.0)


def sparsify(v, lam: float) -> np.ndarray:
    """Set entries ``<= lam`` to zero and spread their mass over the rest.

    The freed mass is split equally among the entries above ``lam``. Vectors
    with every entry significant come back unchanged.
    """
    v = as_vector(v)
    keep = v > lam
    K = int(keep.sum())
    if K == 0:
        raise DegenerateVectorError(f"no entry exceeds lambda={lam}")
    if K == v.size:
        return v.copy()
    garbage = v[~keep].sum()
    out = np.zeros_like(v)
    out[keep] = v[keep] + garbage / K
    return out


def sample_uniform(sizes: Sequence[int], seed=None) -> list[np.ndarray]:
    """Draw a block point uniformly from the product of simplices.

    Each block is a flat Dirichlet sample built by normalising independent
    unit-rate exponentials. ``seed`` may be an int or a ``numpy`` Generator.
    """
    sizes = validate_shape(sizes)
    rng = np.random.default_rng(seed)
    blocks = []
    for n in sizes:
        e = rng.standard_exponential(n)
        blocks.append(e / e.sum())
    return blocks


def flatten(blocks: Sequence[np.ndarray]) -> np.ndarray:
    return np.concatenate([np.asarray(b, dtype=float).ravel() for b in blocks])


def unflatten(x: np.ndarray, sizes: Sequence[int]) -> list[np.ndarray]:
    return [part.copy() for part in np.split(np.asarray(x, dtype=float), np.cumsum(sizes)[:-1])]
