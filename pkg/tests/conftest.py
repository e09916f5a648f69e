import pytest

# Acceptance verdict lines, printed once more at the end of the session so
# they survive output capture.
VERDICTS = []

# Outcomes of the property tests seen in this session, keyed by node id.
PROPERTY_OUTCOMES = {}

PROPERTY_TESTS = {
    "feasibility of every evaluation": ["test_properties.py::test_run_invariants",
                                        "test_engine.py::TestOptimize::test_every_evaluation_feasible"],
    "within-run and across-run monotonicity": ["test_properties.py::test_run_invariants"],
    "single-block update": ["test_properties.py::test_single_block_update"],
    "determinism": ["test_properties.py::test_determinism"],
    "move sum preservation": ["test_simplex.py::test_moves_preserve_sum"],
    "sparsify idempotence and exactness": ["test_simplex.py::test_sparsify_idempotent_and_exact"],
    "lift correctness": ["test_benchmarks.py::TestLift::test_lift_correctness"],
    "parallel vs sequential candidates": [
        "test_properties.py::test_parallel_candidates_match_sequential_on_benchmark",
        "test_properties.py::test_vectorized_equals_sequential_iteration",
        "test_properties.py::test_vectorized_equals_sequential_full_run",
    ],
}


def _is_property(nodeid):
    return any(key in nodeid for keys in PROPERTY_TESTS.values() for key in keys)


def pytest_collection_modifyitems(session, config, items):
    # the property summary must run after the property tests themselves
    last = [it for it in items if it.name == "test_criterion_8_property_suites"]
    items[:] = [it for it in items if it not in last] + last


def pytest_runtest_logreport(report):
    if report.when == "call" and _is_property(report.nodeid):
        PROPERTY_OUTCOMES[report.nodeid] = report.outcome
    elif report.failed and _is_property(report.nodeid):
        PROPERTY_OUTCOMES[report.nodeid] = "failed"


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def verdict():
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        VERDICTS.append(line)
        print(line)
        return ok
    return record
