"""Seeded multistart experiments over the lifted benchmarks.

One optimizer run is made per seed, each started from a uniform random block
point drawn with that seed. An optional random-search baseline gets exactly
the number of evaluations the optimizer used for the same seed. Rows are
written as CSV with round-trip float precision.
"""

from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np
import yaml

from .benchmarks import REGISTRY, VARIANTS, make_objective
from .engine import TraceRecord, TuningParams, optimize
from .errors import ConfigError, InvalidInputError
from .objective import SimplexObjective
from .simplex import sample_uniform, unflatten, validate_shape

log = logging.getLogger(__name__)

ALGORITHMS = ("gcdvsms", "random_search")
TRACE_COLUMNS = ("run", "iteration", "best_value", "gs", "block", "coordinate", "direction",
                 "evaluations")


def parse_seeds(spec) -> List[int]:
    """Accept a list of ints, ``{"count": c, "base_seed": b}``, or a string
    like ``"1,2,5"`` or ``"0:100"``."""
    if isinstance(spec, dict):
        unknown = set(spec) - {"count", "base_seed"}
        if unknown or "count" not in spec:
            raise ConfigError(f"bad seeds spec {spec!r}")
        base = int(spec.get("base_seed", 0))
        return list(range(base, base + int(spec["count"])))
    if isinstance(spec, int):
        return [spec]
    if isinstance(spec, str):
        seeds = []
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                if ":" in part:
                    a, b = part.split(":")
                    seeds.extend(range(int(a), int(b)))
                else:
                    seeds.append(int(part))
            except ValueError:
                raise ConfigError(f"bad seeds spec {spec!r}") from None
        return seeds
    try:
        return [int(s) for s in spec]
    except (TypeError, ValueError):
        raise ConfigError(f"bad seeds spec {spec!r}") from None


@dataclass
class ExperimentConfig:
    function: str
    n: int
    d: int
    variant: str = "canonical"
    seeds: List[int] = field(default_factory=lambda: [0])
    tuning: dict = field(default_factory=dict)
    baseline: Optional[str] = None
    output_path: Optional[str] = None
    trace: bool = False
    parallel_starts: int = 1

    def __post_init__(self):
        self.seeds = parse_seeds(self.seeds)
        self.validate()

    def validate(self) -> "ExperimentConfig":
        if self.function not in REGISTRY:
            raise ConfigError(f"unknown function {self.function!r}; known: {sorted(REGISTRY)}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if int(self.n) < 1 or int(self.d) < 1:
            raise ConfigError("n and d must be positive")
        if not self.seeds:
            raise ConfigError("seeds must be non-empty")
        if self.baseline not in (None, "random_search"):
            raise ConfigError(f"unknown baseline {self.baseline!r}")
        if int(self.parallel_starts) < 1:
            raise ConfigError("parallel_starts must be positive")
        try:
            self.params().validate((self.d + 1,))
        except InvalidInputError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def params(self) -> TuningParams:
        try:
            return TuningParams().with_overrides(**self.tuning)
        except (InvalidInputError, TypeError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "function" not in data or "n" not in data or "d" not in data:
            raise ConfigError("config needs function, n and d")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        """Read a YAML (or JSON) file."""
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        return cls.from_dict(data)


@dataclass
class ResultRow:
    function: str
    n: int
    d: int
    variant: str
    seed: int
    algorithm: str
    best_value: float
    runs_used: int
    iterations: int
    evaluations: int
    wall_time_seconds: float


RESULT_COLUMNS = tuple(f.name for f in fields(ResultRow))


@dataclass
class SummaryRow:
    function: str
    n: int
    d: int
    algorithm: str
    min_value: float
    mean_value: float
    mean_time: float
    mean_evaluations: float
    seed_count: int


def sample_uniform_batch(sizes: Sequence[int], k: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` flat block points, each block uniform on its simplex."""
    sizes = validate_shape(sizes)
    E = rng.standard_exponential((k, sum(sizes)))
    out = np.empty_like(E)
    a = 0
    for n in sizes:
        blk = E[:, a:a + n]
        out[:, a:a + n] = blk / blk.sum(axis=1, keepdims=True)
        a += n
    return out


def random_search(objective: SimplexObjective, budget: int, seed, chunk: int = 4096):
    """Best of ``budget`` uniform samples; returns ``(point, value)``."""
    budget = int(budget)
    if budget < 1:
        raise InvalidInputError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    best_x, best_f = None, np.inf
    left = budget
    while left:
        k = min(chunk, left)
        X = sample_uniform_batch(objective.sizes, k, rng)
        f = objective.evaluate_flat(X)
        r = int(f.argmin())
        if f[r] < best_f:
            best_f, best_x = float(f[r]), X[r].copy()
        left -= k
    return unflatten(best_x, objective.sizes), best_f


def trace_path(output_path, seed) -> Path:
    p = Path(output_path)
    return p.with_name(f"{p.stem}.trace.seed{seed}.csv")


def _write_trace(path, records: Iterable[TraceRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for r in records:
            w.writerow([r.run, r.iteration, repr(r.best_value), repr(r.gs),
                        "" if r.block is None else r.block,
                        "" if r.coordinate is None else r.coordinate,
                        r.direction or "", r.evaluations])


def run_seed(config: ExperimentConfig, seed: int) -> List[ResultRow]:
    """Optimizer row (and baseline row, if configured) for one seed."""
    params = config.params()
    objective = make_objective(config.function, config.n, config.d, config.variant)
    P0 = sample_uniform(objective.sizes, seed)
    t0 = time.perf_counter()
    res = optimize(P0, objective, params, trace=config.trace)
    elapsed = time.perf_counter() - t0
    rows = [ResultRow(config.function, config.n, config.d, config.variant, seed, "gcdvsms",
                      res.value, res.runs, res.iterations, res.total_evaluations, elapsed)]
    if config.trace and config.output_path:
        _write_trace(trace_path(config.output_path, seed), res.trace)
    if config.baseline == "random_search":
        baseline_obj = make_objective(config.function, config.n, config.d, config.variant)
        t0 = time.perf_counter()
        _, value = random_search(baseline_obj, res.total_evaluations, seed)
        rows.append(ResultRow(config.function, config.n, config.d, config.variant, seed,
                              "random_search", value, 0, 0, baseline_obj.n_evaluations,
                              time.perf_counter() - t0))
    log.info("seed %d: %s", seed, ", ".join(f"{r.algorithm}={r.best_value:.6g}" for r in rows))
    return rows


def run_experiment(config: ExperimentConfig) -> List[ResultRow]:
    """Run every seed of ``config`` and write the rows to ``output_path``.

    Seeds may run in up to ``parallel_starts`` worker processes; rows come
    back in seed order either way.
    """
    config.validate()
    if config.output_path:
        out = Path(config.output_path)
        if out.parent and not out.parent.exists():
            raise OSError(f"output directory {out.parent} does not exist")
    if config.parallel_starts > 1 and len(config.seeds) > 1:
        with ProcessPoolExecutor(max_workers=config.parallel_starts) as pool:
            per_seed = list(pool.map(run_seed, [config] * len(config.seeds), config.seeds))
    else:
        per_seed = [run_seed(config, s) for s in config.seeds]
    rows = [r for group in per_seed for r in group]
    if config.output_path:
        write_results(config.output_path, rows)
    return rows


def write_results(path, rows: Sequence[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in asdict(r).values()])


def read_results(path) -> List[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RESULT_COLUMNS:
            raise InvalidInputError(f"{path}: unexpected header {header!r}")
        rows = []
        for rec in reader:
            kw = {}
            for f, v in zip(fields(ResultRow), rec):
                kw[f.name] = {"int": int, "float": float}.get(f.type, str)(v)
            rows.append(ResultRow(**kw))
    return rows


def summarize(rows: Sequence[ResultRow]) -> List[SummaryRow]:
    """Per (function, n, d, algorithm): min and mean value, mean time and
    evaluations over seeds. Sorted by that key."""
    if not rows:
        raise InvalidInputError("no rows to summarize")
    groups = {}
    for r in rows:
        groups.setdefault((r.function, r.n, r.d, r.algorithm), []).append(r)
    out = []
    for key in sorted(groups):
        g = groups[key]
        values = [r.best_value for r in g]
        out.append(SummaryRow(*key,
                              min_value=min(values),
                              mean_value=float(np.mean(values)),
                              mean_time=float(np.mean([r.wall_time_seconds for r in g])),
                              mean_evaluations=float(np.mean([r.evaluations for r in g])),
                              seed_count=len(g)))
    return out


def format_summary(summary: Sequence[SummaryRow]) -> str:
    header = f"{'function':<10} {'n':>3} {'d':>3} {'algorithm':<14} {'min value':>11} " \
             f"{'mean value':>11} {'mean time':>10} {'mean evals':>11} {'seeds':>5}"
    lines = [header, "-" * len(header)]
    for s in summary:
        lines.append(f"{s.function:<10} {s.n:>3} {s.d:>3} {s.algorithm:<14} {s.min_value:>11.3e} "
                     f"{s.mean_value:>11.3e} {s.mean_time:>10.3f} {s.mean_evaluations:>11.0f} "
                     f"{s.seed_count:>5}")
    return "\n".join(lines)
