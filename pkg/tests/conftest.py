import random
from importlib import resources
from pathlib import Path

import pytest

from strucsel import StructuralDigraph
from strucsel.io import gen_random, parse_system

DENSITIES = (0.1, 0.2, 0.4)


def benchmark_path() -> Path:
    return Path(str(resources.files("strucsel") / "data" / "benchmark.json"))


def random_plants(count, n_max, seed, densities=DENSITIES, n_min=1):
    """Seeded stream of random plants with ``n_min <= n <= n_max``."""
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(n_min, n_max)
        yield gen_random(n, densities[i % len(densities)], rng.getrandbits(64))


def digraph(n, *edges):
    return StructuralDigraph(n, frozenset(edges))


@pytest.fixture(scope="session")
def bench():
    return parse_system(benchmark_path().read_bytes()).plant


# one PASS/FAIL line per acceptance criterion, printed after the run
_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.failed:
        prev = _criteria.get(name, "PASS")
        _criteria[name] = "FAIL" if report.failed or prev == "FAIL" else ("PASS" if report.passed else "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")

    def key(name):
        return int(name.split("_")[2])

    for name in sorted(_criteria, key=key):
        terminalreporter.write_line(f"criterion {key(name)}: {_criteria[name]}  ({name})")
