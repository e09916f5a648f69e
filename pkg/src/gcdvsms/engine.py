"""Greedy coordinate descent with varying step sizes on multiple simplices.

Each iteration scores up to ``2M`` candidate moves around the current point
(one positive and one negative move per coordinate), accepts the best one if
it improves, and shrinks the global step when progress stalls. A *run* ends
when the step cannot shrink further; runs are chained until the inter-run
gain drops below ``tol_fun_2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .objective import SimplexObjective, as_objective
from .simplex import (
    FEAS_TOL,
    clamp,
    clamp_rows,
    feasible_rows,
    flatten,
    is_feasible,
    negative_move,
    positive_move,
    significant_indices,
    sparsify,
    unflatten,
    validate_shape,
)

PLUS, MINUS = "+", "-"


@dataclass(frozen=True)
class TuningParams:
    """User-facing controls of the optimizer.

    ``rho1`` is the step decay rate of the first run, ``rho2`` that of every
    later run. ``lam`` is the sparsity threshold: entries at or below it are
    treated as zero.
    """

    s_initial: float = 1.0
    rho1: float = 1.01
    rho2: float = 1.01
    phi: float = 1e-4
    lam: float = 1e-6
    tol_fun_1: float = 1e-6
    tol_fun_2: float = 1e-6
    max_iter: int = 5000
    max_runs: int = 200

    def validate(self, sizes: Optional[Sequence[int]] = None) -> "TuningParams":
        if not self.phi > 0:
            raise InvalidInputError("phi must be positive")
        if not self.s_initial > self.phi:
            raise InvalidInputError("s_initial must exceed phi")
        if not (self.rho1 > 1 and self.rho2 > 1):
            raise InvalidInputError("rho1 and rho2 must exceed 1")
        if self.lam < 0 or self.tol_fun_1 < 0 or self.tol_fun_2 < 0:
            raise InvalidInputError("lam, tol_fun_1 and tol_fun_2 must be nonnegative")
        if int(self.max_iter) < 1 or int(self.max_runs) < 1:
            raise InvalidInputError("max_iter and max_runs must be positive")
        if sizes is not None and not self.lam < 1.0 / max(sizes):
            raise InvalidInputError(
                f"lam={self.lam} must be below 1/max block size = {1.0 / max(sizes)}"
            )
        return self

    def with_overrides(self, **overrides) -> "TuningParams":
        if "lambda" in overrides:
            overrides["lam"] = overrides.pop("lambda")
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise InvalidInputError(f"unknown tuning parameters: {sorted(unknown)}")
        return replace(self, **overrides)


class Move(NamedTuple):
    """An accepted move; ``block`` and ``coordinate`` are 0-based."""

    block: int
    coordinate: int
    direction: str


class Step(NamedTuple):
    point: List[np.ndarray]
    value: float
    gs: float
    stop: bool
    move: Optional[Move]


@dataclass
class TraceRecord:
    run: int
    iteration: int
    best_value: float
    gs: float
    block: Optional[int]  # 1-based, None when no move was accepted
    coordinate: Optional[int]
    direction: Optional[str]
    evaluations: int


@dataclass
class RunResult:
    point: List[np.ndarray]
    value: float
    iterations: int
    evaluations: int
    stop_reason: str  # "CC1" or "max_iter"


@dataclass
class OptimizeResult:
    point: List[np.ndarray]
    value: float
    runs: int
    total_evaluations: int
    stop_reason: str  # "CC2" or "max_runs"
    iterations: int = 0
    run_values: List[float] = field(default_factory=list)
    trace: Optional[List[TraceRecord]] = None


def step_sequence(s: float, rho: float, phi: float) -> np.ndarray:
    """Step sizes tried by the shrink loop: ``s, s/rho, s/rho**2, ...``.

    Only values above ``rho * phi`` are kept; each is obtained by repeated
    division so the entries match the loop in :func:`shrink_until_feasible`.
    """
    out = []
    floor = rho * phi
    while s > floor:
        out.append(s)
        s = s / rho
    return np.array(out)


def shrink_until_feasible(v, i, direction, s, rho, phi, lam):
    """Build a move along coordinate ``i``, dividing ``s`` by ``rho`` until
    the candidate lies on the simplex.

    Returns ``(candidate, s_used)``, or ``(None, s)`` when the step falls to
    ``rho * phi`` first or no significant position exists.
    """
    if not rho > 1 or not s > 0:
        raise InvalidInputError("need rho > 1 and s > 0")
    _, K = significant_indices(v, i, lam)
    if K == 0:
        return None, s
    move = positive_move if direction == PLUS else negative_move
    while s > rho * phi:
        q = move(v, i, s, lam)
        if is_feasible(q):
            return clamp(q), s
        s = s / rho
    return None, s


class _Layout:
    """Flat indexing of a block point, with blocks grouped by size."""

    def __init__(self, sizes):
        self.sizes = validate_shape(sizes)
        self.M = sum(self.sizes)
        self.starts = np.concatenate([[0], np.cumsum(self.sizes)[:-1]]).astype(int)
        self.groups = []
        by_size = {}
        for j, n in enumerate(self.sizes):
            by_size.setdefault(n, []).append(j)
        for n, blocks in by_size.items():
            blocks = np.array(blocks)
            idx = self.starts[blocks][:, None] + np.arange(n)
            self.groups.append((n, blocks, idx, np.eye(n, dtype=bool)))

    def block(self, P, j):
        a = self.starts[j]
        return P[a:a + self.sizes[j]]


def _group_moves(V, seq, lam, eye):
    """All positive and negative moves for a stack of blocks ``V`` (b, n).

    For every coordinate and direction, finds the first entry of ``seq``
    giving a feasible candidate. A bound from the move formula gives a
    starting index that is never past the answer; exact feasibility checks
    walk forward from there.

    Returns ``(rows, valid)`` with shapes ``(2, b, n, n)`` and ``(2, b, n)``;
    index 0 holds positive moves, 1 negative ones.
    """
    b, n = V.shape
    rows_out = np.zeros((2, b, n, n))
    valid = np.zeros((2, b, n), dtype=bool)
    L = seq.size
    if L == 0:
        return rows_out, valid
    mask = (V > lam)[:, None, :] & ~eye  # mask[b, i, l]: l in S(i)
    K = mask.sum(-1)
    min_s = np.where(mask, V[:, None, :], 1.0).min(-1)  # only read where K > 0
    bound = np.stack([K * (min_s + FEAS_TOL), V + FEAS_TOL])
    bound = np.where(K > 0, bound * (1 + 1e-9) + 1e-12, -np.inf)
    k = np.searchsorted(-seq, -bound.ravel(), side="left").reshape(2, b, n)
    pd, pb, pi = np.nonzero((K > 0) & (k < L))
    pk = k[pd, pb, pi]
    while pb.size:
        s = seq[pk]
        sign = 1.0 - 2.0 * pd
        base = V[pb]
        d = s / K[pb, pi]
        rows = np.where(mask[pb, pi], base - (sign * d)[:, None], base)
        r = np.arange(pb.size)
        rows[r, pi] = base[r, pi] + sign * s
        ok = feasible_rows(rows)
        if ok.any():
            rows_out[pd[ok], pb[ok], pi[ok]] = clamp_rows(rows[ok])
            valid[pd[ok], pb[ok], pi[ok]] = True
        keep = ~ok & (pk + 1 < L)
        pd, pb, pi, pk = pd[keep], pb[keep], pi[keep], pk[keep] + 1
    return rows_out, valid


def _select(fp, fm, Y):
    """Pick each block's best move from its per-coordinate values.

    Returns ``(f_temp, coord, is_plus, improved)`` per block. The lowest
    index wins ties; equal best values pick the negative move.
    """
    kp = fp.argmin(-1)
    km = fm.argmin(-1)
    r = np.arange(fp.shape[0])
    bp, bm = fp[r, kp], fm[r, km]
    improved = np.minimum(bp, bm) < Y
    is_plus = bp < bm
    f_temp = np.where(improved, np.where(is_plus, bp, bm), Y)
    coord = np.where(is_plus, kp, km)
    return f_temp, coord, is_plus, improved


KEEP, DECAY, STOP = "keep", "decay", "stop"


def _finish(P, Y, gs, u_w, w, move, objective, params, rho, layout):
    """Sparsify the winning block, re-evaluate, and decide on the step size."""
    u = sparsify(u_w, params.lam)
    P_new = P.copy()
    a = layout.starts[w]
    P_new[a:a + layout.sizes[w]] = u
    Y_new = float(objective.evaluate_flat(P_new[None, :])[0])
    if Y_new > Y:
        # sparsification made things worse; keep the current point
        P_new, Y_new, move = P, Y, None
    if Y - Y_new > params.tol_fun_1:
        return P_new, Y_new, KEEP, move
    if gs > rho * params.phi:
        return P_new, Y_new, DECAY, move
    return P_new, Y_new, STOP, move


def _iterate_vectorized(P, Y, gs, seq, objective, params, rho, layout, executor=None):
    moves = []
    rows, slots = [], []
    for g, (n, blocks, idx, eye) in enumerate(layout.groups):
        cand, valid = _group_moves(P[idx], seq, params.lam, eye)
        moves.append((cand, valid))
        dd, bb, ii = np.nonzero(valid)
        if bb.size:
            X = np.tile(P, (bb.size, 1))
            X[np.arange(bb.size)[:, None], idx[bb]] = cand[dd, bb, ii]
            rows.append(X)
            slots.append((g, dd, bb, ii))
    values = objective.evaluate_flat(np.concatenate(rows), executor=executor) if rows else None

    B = len(layout.sizes)
    f_temp = np.full(B, Y)
    choice = {}
    pos = 0
    for g, dd, bb, ii in slots:
        n, blocks, _, _ = layout.groups[g]
        cand, valid = moves[g]
        f = np.full(valid.shape, Y)
        f[dd, bb, ii] = values[pos:pos + bb.size]
        pos += bb.size
        ft, coord, is_plus, improved = _select(f[0], f[1], Y)
        f_temp[blocks] = ft
        for r in np.flatnonzero(improved):
            d = 0 if is_plus[r] else 1
            choice[int(blocks[r])] = (cand[d, r, coord[r]],
                                      Move(int(blocks[r]), int(coord[r]), PLUS if d == 0 else MINUS))
    w = int(f_temp.argmin())
    if w in choice:
        u_w, move = choice[w]
    else:
        u_w, move = layout.block(P, w), None
    return _finish(P, Y, gs, u_w, w, move, objective, params, rho, layout)


def _iterate_sequential(P, Y, gs, objective, params, rho, layout):
    """Literal coordinate-by-coordinate sweep; the reference for the
    vectorized path."""
    B = len(layout.sizes)
    f_temp = np.full(B, Y)
    choice = {}
    for j in range(B):
        v = layout.block(P, j).copy()
        n = v.size
        q = {PLUS: [None] * n, MINUS: [None] * n}
        f = {PLUS: np.full(n, Y), MINUS: np.full(n, Y)}
        for direction in (PLUS, MINUS):
            for i in range(n):
                cand, _ = shrink_until_feasible(v, i, direction, gs, rho, params.phi, params.lam)
                if cand is None:
                    continue
                X = P.copy()
                a = layout.starts[j]
                X[a:a + n] = cand
                q[direction][i] = cand
                f[direction][i] = objective.evaluate_flat(X[None, :])[0]
        ft, coord, is_plus, improved = _select(f[PLUS][None], f[MINUS][None], Y)
        f_temp[j] = ft[0]
        if improved[0]:
            d = PLUS if is_plus[0] else MINUS
            choice[j] = (q[d][coord[0]], Move(j, int(coord[0]), d))
    w = int(f_temp.argmin())
    if w in choice:
        u_w, move = choice[w]
    else:
        u_w, move = layout.block(P, w), None
    return _finish(P, Y, gs, u_w, w, move, objective, params, rho, layout)


def _iterate_flat(P, Y, gs, seq, objective, params, rho, layout, mode, executor):
    if mode == "vectorized":
        return _iterate_vectorized(P, Y, gs, seq, objective, params, rho, layout, executor)
    if mode == "sequential":
        return _iterate_sequential(P, Y, gs, objective, params, rho, layout)
    raise InvalidInputError(f"unknown mode {mode!r}")


def _check_point(P0, params):
    blocks = [np.asarray(b, dtype=float) for b in P0]
    sizes = validate_shape([b.size for b in blocks])
    for j, b in enumerate(blocks):
        if not is_feasible(b):
            raise InvalidInputError(f"block {j} is not on the unit simplex")
    params.validate(sizes)
    return blocks, sizes


def iterate(P, Y, gs, objective, params: TuningParams = TuningParams(), rho=None,
            mode="vectorized", executor=None) -> Step:
    """Perform one greedy iteration from block point ``P`` with value ``Y``.

    ``mode="sequential"`` evaluates moves one at a time in coordinate order;
    ``"vectorized"`` builds all moves at once and hands them to the objective
    in a single batch (or to ``executor.map``). Both accept the same move.
    """
    blocks, sizes = _check_point(P, params)
    objective = as_objective(objective, sizes)
    rho = params.rho1 if rho is None else rho
    gs = float(gs)
    P_new, Y_new, decision, move = _iterate_flat(
        flatten(blocks), float(Y), gs, step_sequence(gs, rho, params.phi), objective, params,
        rho, _Layout(sizes), mode, executor,
    )
    return Step(unflatten(P_new, sizes), Y_new, gs / rho if decision == DECAY else gs,
                decision == STOP, move)


def _run_flat(P, rho, objective, params, layout, run_index, sink, mode, executor):
    # gs only ever moves along the division sequence from s_initial, so the
    # shrink candidates of an iteration are a suffix of that sequence.
    steps = step_sequence(float(params.s_initial), rho, params.phi)
    g = 0
    gs = float(params.s_initial)
    Y = float(objective.evaluate_flat(P[None, :])[0])
    h = 1
    while True:
        P, Y, decision, move = _iterate_flat(P, Y, gs, steps[g:], objective, params, rho,
                                             layout, mode, executor)
        if sink is not None:
            sink(TraceRecord(
                run_index, h, Y, gs,
                None if move is None else move.block + 1,
                None if move is None else move.coordinate + 1,
                None if move is None else move.direction,
                objective.n_evaluations,
            ))
        if decision == STOP:
            return P, Y, h, "CC1"
        if decision == DECAY:
            gs = gs / rho
            g += 1
        if h + 1 > params.max_iter:
            return P, Y, h, "max_iter"
        h += 1


def run_stage1(P0, rho, objective, params: TuningParams = TuningParams(), *, run_index=1,
               sink: Optional[Callable[[TraceRecord], None]] = None, mode="vectorized",
               executor=None) -> RunResult:
    """One run: iterate from ``P0`` with decay rate ``rho`` until the global
    step can no longer shrink (``"CC1"``) or ``max_iter`` is reached."""
    blocks, sizes = _check_point(P0, params)
    objective = as_objective(objective, sizes)
    start = objective.n_evaluations
    P, Y, h, reason = _run_flat(flatten(blocks), rho, objective, params, _Layout(sizes),
                                run_index, sink, mode, executor)
    return RunResult(unflatten(P, sizes), Y, h, objective.n_evaluations - start, reason)


def optimize(P0, objective, params: Optional[TuningParams] = None, *, trace=False,
             sink: Optional[Callable[[TraceRecord], None]] = None, mode="vectorized",
             executor=None) -> OptimizeResult:
    """Minimize ``objective`` over a product of unit simplices from ``P0``.

    Parameters
    ----------
    P0 : list of array_like
        Starting point, one simplex vector per block.
    objective : SimplexObjective or callable
        A plain callable receives the list of block vectors.
    params : TuningParams, optional
    trace : bool
        Keep one :class:`TraceRecord` per iteration on the result.
    sink : callable, optional
        Receives every :class:`TraceRecord` as it is produced.
    mode : {"vectorized", "sequential"}
    executor : concurrent.futures.Executor, optional
        Used to score candidates when the objective has no batch function.

    Returns
    -------
    OptimizeResult
    """
    params = TuningParams() if params is None else params
    blocks, sizes = _check_point(P0, params)
    objective = as_objective(objective, sizes)
    layout = _Layout(sizes)
    records = [] if trace else None

    def emit(rec):
        if records is not None:
            records.append(rec)
        if sink is not None:
            sink(rec)

    start = objective.n_evaluations
    P = flatten(blocks)
    P, Y, iters, _ = _run_flat(P, params.rho1, objective, params, layout, 1, emit, mode, executor)
    run_values = [Y]
    runs = 1
    reason = "max_runs"
    while runs < params.max_runs:
        P, Y_new, h, _ = _run_flat(P, params.rho2, objective, params, layout, runs + 1, emit,
                                   mode, executor)
        runs += 1
        iters += h
        gain = Y - Y_new
        Y = Y_new
        run_values.append(Y)
        if gain < params.tol_fun_2:
            reason = "CC2"
            break
    return OptimizeResult(unflatten(P, sizes), Y, runs, objective.n_evaluations - start,
                          reason, iters, run_values, records)
