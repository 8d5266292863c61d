import io as _io
import json

import pytest

from strucsel import solve_p2
from strucsel.cli import run_cli
from strucsel.io import parse_system, serialize_system

from conftest import benchmark_path


def run(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--json", *argv)
    return code, json.loads(out)


@pytest.fixture
def bench_file():
    return str(benchmark_path())


@pytest.fixture
def bench_closed(tmp_path, bench):
    path = tmp_path / "bench_p2.json"
    path.write_bytes(serialize_system(solve_p2(bench)))
    return str(path)


def test_analyze(bench_file):
    code, doc = run_json("analyze", bench_file)
    assert code == 0
    assert (doc["m"], doc["beta"], doc["alpha"], doc["p"]) == (2, 2, 2, 2)
    assert (doc["m_dual"], doc["beta_dual"], doc["alpha_dual"], doc["p_dual"]) == (2, 2, 1, 3)
    assert doc["input_config"]["states"] == [2, 4]
    assert doc["output_config"]["states"] == [7, 9, 10]
    assert len(doc["input_sha256"]) == 64 and "wall_time_s" in doc


def test_select_commands(bench_file):
    code, doc = run_json("select-inputs", bench_file)
    assert code == 0 and doc["config"]["states"] == [2, 4]
    code, doc = run_json("--limit", "3", "select-outputs", bench_file)
    assert code == 0 and doc["config"]["states"] == [7, 9, 10]
    assert 1 <= len(doc["designs"]) <= 3
    assert all(len(d) == 3 for d in doc["designs"])


def test_solve(bench_file):
    code, doc = run_json("solve", "p1d", bench_file)
    assert code == 0 and doc["b_edges"] == [[1, 2], [2, 4]]
    assert sorted(x for x, _ in doc["c_edges"]) == [7, 9, 10]
    code, doc = run_json("solve", "p1", bench_file, "--minimal")
    assert doc["minimal"] and doc["effective_outputs"] == 2 and doc["c_nnz"] == 3
    code, doc = run_json("solve", "p2", bench_file, "--limit", "5")
    assert code == 0
    assert (doc["b_nnz"], doc["c_nnz"], doc["k_nnz"]) == (2, 3, 2)
    assert doc["verification"]["sfm_free"]["verdict"] == "pass"
    assert doc["mix_pairings"] == [doc["k_edges"]]


def test_verify_exit_codes(bench_file, bench_closed):
    assert run("verify", "sfm-free", bench_closed)[0] == 0
    assert run("verify", "controllable", bench_closed)[0] == 0
    code, doc = run_json("verify", "controllable", bench_file)
    assert code == 1 and doc["verdict"] == "fail" and doc["witness"]["unreachable"]
    assert run("verify", "observable", bench_file)[0] == 1


def test_verify_per_stem_pairing_fails(tmp_path, bench):
    closed = solve_p2(bench)
    io_pairs = {(u, y) for u in closed.effective_inputs for y in closed.effective_outputs}
    per_stem = closed.with_feedback(
        (y, u) for u, y in io_pairs if (y, u) not in closed.feedback_edges
    )
    path = tmp_path / "per_stem.json"
    path.write_bytes(serialize_system(per_stem))
    code, doc = run_json("verify", "sfm-free", str(path))
    assert code == 1 and doc["witness"]["condition"] == "a"


def test_input_errors(tmp_path):
    assert run("analyze", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"n 0\n")
    code, _, err = run("analyze", str(bad))
    assert code == 2 and "line 1" in err
    assert run("no-such-command")[0] == 2
    assert run("analyze", "--bogus-flag", str(bad))[0] == 2
    assert run("--limit", "-1", "analyze", str(bad))[0] == 2
    assert run("--seed", "-1", "gen", "3", "0.5")[0] == 2
    assert run("gen", "3", "2.0")[0] == 2


def test_gen_formats():
    code, out, _ = run("--seed", "42", "gen", "6", "0.3", "--format", "edgelist")
    assert code == 0 and out.startswith("n 6\n")
    code, out2, _ = run("--seed", "42", "gen", "6", "0.3")
    assert parse_system(out2).plant == parse_system(out).plant


def test_flags_accepted_after_subcommand(bench_file):
    code, out, _ = run("analyze", bench_file, "--json")
    assert code == 0 and json.loads(out)["p"] == 2


def test_human_output(bench_file):
    code, out, _ = run("analyze", bench_file)
    assert code == 0 and "p_dual" in out and "wall_time_s" not in out


def test_export_dot(bench_file):
    code, out, _ = run("export-dot", bench_file, "--annotate", "p2")
    assert code == 0 and out.count("color=gray") == 2
    code, out, _ = run("export-dot", bench_file, "--annotate", "matching")
    assert out.count("color=blue") == 8


def test_batch_preserves_order(tmp_path, bench_file):
    small = tmp_path / "small.txt"
    small.write_bytes(b"n 1\n1 1\n")
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"n 0\n")
    code, doc = run_json("batch", bench_file, str(small), str(bad))
    assert code == 2
    results = doc["results"]
    assert results[0]["p"] == 2 and results[1]["p"] == 1 and "error" in results[2]
    code, doc = run_json("batch", "--command", "select-outputs", bench_file, str(small))
    assert code == 0 and [r["config"]["states"] for r in doc["results"]] == [[7, 9, 10], [1]]
