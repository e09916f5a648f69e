import csv
import json

import numpy as np
import pytest

from gcdvsms import SimplexObjective, optimize
from gcdvsms.benchmarks import make_objective
from gcdvsms.cli import main
from gcdvsms.errors import ConfigError, InvalidInputError
from gcdvsms.harness import (
    RESULT_COLUMNS,
    TRACE_COLUMNS,
    ExperimentConfig,
    ResultRow,
    parse_seeds,
    random_search,
    read_results,
    run_experiment,
    summarize,
    trace_path,
)
from gcdvsms.simplex import sample_uniform

# cheap settings so each seed finishes in a fraction of a second
QUICK = {"phi": 1e-2, "max_runs": 3}


def quick_config(tmp_path, **kw):
    base = dict(function="sphere", n=1, d=2, seeds=[1, 2], tuning=QUICK,
                output_path=str(tmp_path / "results.csv"))
    base.update(kw)
    return ExperimentConfig(**base)


def strip_time(path):
    with open(path) as fh:
        return [row[:-1] for row in csv.reader(fh)]


class TestRandomSearch:
    def test_budget_one(self):
        obj = make_objective("sphere", 2, 3)
        P, value = random_search(obj, 1, seed=4)
        assert obj.n_evaluations == 1
        assert value == obj(P)

    def test_constant(self):
        obj = SimplexObjective(lambda P: 2.5, [3, 2])
        assert random_search(obj, 500, seed=0)[1] == 2.5

    def test_finds_low_first_coordinate(self):
        obj = SimplexObjective(batch=lambda X: X[:, 0], sizes=[2])
        for seed in range(5):
            P, value = random_search(obj, 10_000, seed)
            assert value <= 0.01
            assert value == P[0][0]

    def test_deterministic(self):
        obj = make_objective("ackley", 2, 2)
        a = random_search(obj, 3000, seed=12)
        b = random_search(obj, 3000, seed=12)
        assert a[1] == b[1]

    def test_bad_budget(self):
        with pytest.raises(InvalidInputError):
            random_search(make_objective("sphere", 1, 2), 0, 1)


class TestConfig:
    def test_seed_forms(self):
        assert parse_seeds([3, 1]) == [3, 1]
        assert parse_seeds({"count": 3, "base_seed": 10}) == [10, 11, 12]
        assert parse_seeds("1,2,5") == [1, 2, 5]
        assert parse_seeds("0:3,7") == [0, 1, 2, 7]
        with pytest.raises(ConfigError):
            parse_seeds("a")

    @pytest.mark.parametrize("bad", [
        dict(function="rosenbrock"), dict(seeds=[]), dict(variant="weird"),
        dict(baseline="ga"), dict(tuning={"rho1": 0.5}), dict(tuning={"bogus": 1}),
        dict(parallel_starts=0), dict(n=0),
    ])
    def test_invalid(self, tmp_path, bad):
        with pytest.raises(ConfigError):
            quick_config(tmp_path, **bad)

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"function": "sphere", "n": 1, "d": 2, "colour": "red"})

    def test_load_yaml_and_json(self, tmp_path):
        y = tmp_path / "c.yaml"
        y.write_text("function: ackley\nn: 2\nd: 3\nseeds: {count: 2, base_seed: 5}\n"
                     "tuning: {lambda: 1.0e-5}\n")
        cfg = ExperimentConfig.load(y)
        assert cfg.seeds == [5, 6] and cfg.params().lam == 1e-5
        j = tmp_path / "c.json"
        j.write_text(json.dumps({"function": "sphere", "n": 1, "d": 2, "seeds": [4]}))
        assert ExperimentConfig.load(j).seeds == [4]


class TestRunExperiment:
    def test_row_count(self, tmp_path):
        rows = run_experiment(quick_config(tmp_path))
        assert len(rows) == 2
        assert [r.algorithm for r in rows] == ["gcdvsms", "gcdvsms"]
        assert [r.seed for r in rows] == [1, 2]

    def test_deterministic_files(self, tmp_path):
        a = quick_config(tmp_path, output_path=str(tmp_path / "a.csv"))
        b = quick_config(tmp_path, output_path=str(tmp_path / "b.csv"))
        run_experiment(a)
        run_experiment(b)
        assert strip_time(a.output_path) == strip_time(b.output_path)

    def test_baseline_budget_matched(self, tmp_path):
        rows = run_experiment(quick_config(tmp_path, baseline="random_search"))
        assert len(rows) == 4
        by_seed = {}
        for r in rows:
            by_seed.setdefault(r.seed, {})[r.algorithm] = r
        for pair in by_seed.values():
            assert pair["random_search"].evaluations == pair["gcdvsms"].evaluations

    def test_rows_match_direct_engine(self, tmp_path):
        cfg = quick_config(tmp_path, function="griewank", n=2, d=3, seeds=[7])
        (row,) = run_experiment(cfg)
        obj = make_objective("griewank", 2, 3)
        res = optimize(sample_uniform(obj.sizes, 7), obj, cfg.params())
        assert row.best_value == res.value
        assert (row.runs_used, row.iterations, row.evaluations) == \
            (res.runs, res.iterations, res.total_evaluations)

    def test_results_file_format(self, tmp_path):
        cfg = quick_config(tmp_path)
        rows = run_experiment(cfg)
        with open(cfg.output_path) as fh:
            lines = list(csv.reader(fh))
        assert tuple(lines[0]) == RESULT_COLUMNS
        assert len(lines) == 3
        back = read_results(cfg.output_path)
        assert back == rows  # repr floats round-trip exactly

    def test_summary_from_file_equals_in_memory(self, tmp_path):
        cfg = quick_config(tmp_path, baseline="random_search")
        rows = run_experiment(cfg)
        assert summarize(read_results(cfg.output_path)) == summarize(rows)

    def test_trace_files(self, tmp_path):
        cfg = quick_config(tmp_path, trace=True)
        run_experiment(cfg)
        for seed in cfg.seeds:
            with open(trace_path(cfg.output_path, seed)) as fh:
                lines = list(csv.reader(fh))
            assert tuple(lines[0]) == TRACE_COLUMNS
            assert len(lines) > 1
            assert lines[1][0] == "1" and lines[1][1] == "1"

    def test_parallel_matches_serial(self, tmp_path):
        serial = run_experiment(quick_config(tmp_path, output_path=None, seeds=[3, 1, 2]))
        parallel = run_experiment(quick_config(tmp_path, output_path=None, seeds=[3, 1, 2],
                                               parallel_starts=2))
        assert [r.seed for r in parallel] == [3, 1, 2]
        strip = lambda rows: [(r.seed, r.best_value, r.evaluations) for r in rows]
        assert strip(parallel) == strip(serial)

    def test_unwritable_output(self, tmp_path):
        with pytest.raises(OSError):
            run_experiment(quick_config(tmp_path, output_path=str(tmp_path / "no" / "r.csv")))


def row(fn="sphere", algo="gcdvsms", value=1.0, t=1.0, seed=0, evals=10):
    return ResultRow(fn, 1, 2, "canonical", seed, algo, value, 1, 1, evals, t)


class TestSummarize:
    def test_single(self):
        (s,) = summarize([row(value=5.0, t=2.0)])
        assert (s.min_value, s.mean_value, s.mean_time, s.seed_count) == (5.0, 5.0, 2.0, 1)

    def test_min_mean(self):
        (s,) = summarize([row(value=1.0, seed=0), row(value=3.0, seed=1)])
        assert (s.min_value, s.mean_value) == (1.0, 2.0)

    def test_algorithms_not_merged(self):
        out = summarize([row(algo="gcdvsms"), row(algo="random_search")])
        assert [s.algorithm for s in out] == ["gcdvsms", "random_search"]

    def test_ordering(self):
        out = summarize([row(fn="sphere"), row(fn="ackley"), row(fn="griewank")])
        assert [s.function for s in out] == ["ackley", "griewank", "sphere"]

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            summarize([])


class TestCLI:
    def test_list(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for name in ("rastrigin", "ackley", "sphere", "griewank"):
            assert name in out

    def test_run_and_summarize(self, tmp_path, capsys):
        cfg = tmp_path / "exp.yaml"
        cfg.write_text("function: sphere\nn: 1\nd: 2\nseeds: [1]\ntuning: {phi: 0.01, max_runs: 3}\n")
        out = tmp_path / "r.csv"
        assert main(["run", str(cfg), "--seeds", "1,2", "--out", str(out), "--trace"]) == 0
        assert len(read_results(out)) == 2
        assert trace_path(out, 2).exists()
        capsys.readouterr()
        assert main(["summarize", str(out)]) == 0
        assert "sphere" in capsys.readouterr().out

    def test_flags_only(self, tmp_path):
        out = tmp_path / "r.csv"
        rc = main(["run", "--function", "ackley", "--n", "1", "--d", "2", "--seeds", "0",
                   "--variant", "paper_literal", "--out", str(out)])
        assert rc == 0
        assert read_results(out)[0].variant == "paper_literal"

    def test_config_errors_exit_1(self, tmp_path):
        assert main(["run", "--function", "nope", "--n", "1", "--d", "2"]) == 1
        bad = tmp_path / "bad.yaml"
        bad.write_text("function: sphere\nn: 1\nd: 2\nextra: 3\n")
        assert main(["run", str(bad)]) == 1
        with pytest.raises(SystemExit) as info:
            main(["run", "--n", "x"])
        assert info.value.code == 1

    def test_runtime_errors_exit_2(self, tmp_path):
        assert main(["run", "--function", "sphere", "--n", "1", "--d", "2",
                     "--out", str(tmp_path / "missing" / "r.csv")]) == 2
        assert main(["summarize", str(tmp_path / "absent.csv")]) == 2
