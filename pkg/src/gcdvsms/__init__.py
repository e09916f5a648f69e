"""Derivative-free minimisation over products of unit simplices."""

from .benchmarks import (
    HypercubeBenchmark,
    LiftedObjective,
    ackley,
    get_benchmark,
    griewank,
    known_optimum,
    lift_to_simplex,
    make_objective,
    multi_block,
    rastrigin,
    sphere,
)
from .engine import (
    OptimizeResult,
    RunResult,
    TraceRecord,
    TuningParams,
    iterate,
    optimize,
    run_stage1,
    shrink_until_feasible,
)
from .errors import (
    ConfigError,
    DegenerateVectorError,
    EvaluationError,
    GCDError,
    InvalidInputError,
    MoveUndefinedError,
    UnsupportedVariantError,
)
from .objective import SimplexObjective
from .simplex import (
    is_feasible,
    negative_move,
    positive_move,
    sample_uniform,
    significant_indices,
    sparsify,
)

__version__ = "0.1.0"
