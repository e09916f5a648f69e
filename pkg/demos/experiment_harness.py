"""Seeded restart experiments with a budget-matched random baseline."""

import tempfile
from pathlib import Path

from gcdvsms.harness import ExperimentConfig, format_summary, read_results, run_experiment, summarize

out = Path(tempfile.mkdtemp()) / "griewank.csv"
cfg = ExperimentConfig(
    function="griewank", n=3, d=3,
    seeds={"count": 4, "base_seed": 0},
    tuning={"phi": 1e-3},
    baseline="random_search",
    output_path=str(out),
)
rows = run_experiment(cfg)
for r in rows:
    print(r.seed, r.algorithm, round(r.best_value, 4), r.evaluations)

# the CSV reads back to the same rows
print(format_summary(summarize(read_results(out))))
