from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strucsel import Matching, StructuralDigraph, SystemStructure, solve_p1, solve_p2
from strucsel.io import ParseError, export_dot, gen_random, parse_system, serialize_system

from conftest import benchmark_path

GOLDEN = Path(__file__).parent / "golden"


def test_parse_edgelist():
    s = parse_system(b"n 1\n1 1", "edgelist")
    assert s.plant == StructuralDigraph(1, frozenset({(1, 1)}))
    assert parse_system(b"n 2\n1 2\n").plant.edges == {(1, 2)}


def test_parse_json_path():
    s = parse_system(b'{"n": 3, "a_edges": [[1, 2], [2, 3]]}', "json")
    assert s.plant.edges == {(1, 2), (2, 3)} and not s.input_edges


def test_parse_full_json():
    text = b'{"n": 1, "a_edges": [[1, 1]], "b_edges": [[1, 1]], "c_edges": [[1, 2]], "k_edges": [[2, 1]]}'
    s = parse_system(text)
    assert s.input_edges == {(1, 1)} and s.output_edges == {(1, 2)} and s.feedback_edges == {(2, 1)}


def test_bench_file_parses():
    s = parse_system(benchmark_path().read_bytes())
    assert s.n == 10 and len(s.plant.edges) == 14


@pytest.mark.parametrize(
    "text, line",
    [
        (b"n 0\n", 1),
        (b"", 1),
        (b"m 2\n", 1),
        (b"n 2\n1 3\n", 2),
        (b"n 2\n1 2\n1 2\n", 3),
        (b"n 2\n1 2 \n", 2),
        (b"n 2\n1\n", 2),
        (b"n 2\n\n", 2),
        (b"n 2\r\n1 2\n", 1),
    ],
)
def test_edgelist_errors_carry_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_system(text, "edgelist")
    assert err.value.line == line


@pytest.mark.parametrize(
    "text, field",
    [
        (b'{"n": 0, "a_edges": []}', "n"),
        (b'{"n": true, "a_edges": []}', "n"),
        (b'{"a_edges": []}', "n"),
        (b'{"n": 2}', "a_edges"),
        (b'{"n": 2, "a_edges": [], "extra": 1}', "extra"),
        (b'{"n": 2, "a_edges": [[1, 3]]}', "a_edges[0]"),
        (b'{"n": 2, "a_edges": [[1, 2], [1, 2]]}', "a_edges[1]"),
        (b'{"n": 2, "a_edges": [[1, 2, 3]]}', "a_edges[0]"),
        (b'{"n": 2, "a_edges": [], "b_edges": [[0, 1]]}', "b_edges[0]"),
        (b'{"n": 2, "a_edges": [], "c_edges": [[3, 1]]}', "c_edges[0]"),
        (b'{"n": 2, "a_edges": {}}', "a_edges"),
        (b'{"n": 2, "a_edges": [], "comments": 5}', "comments"),
        (b"[1, 2]", "$"),
    ],
)
def test_json_errors_carry_field(text, field):
    with pytest.raises(ParseError) as err:
        parse_system(text, "json")
    assert err.value.field == field


def test_json_syntax_error_has_line():
    with pytest.raises(ParseError) as err:
        parse_system(b'{"n": 2,\n "a_edges": [}')
    assert err.value.line == 2


def test_non_ascii_rejected():
    with pytest.raises(ParseError):
        parse_system("n 1\n1 1 é".encode("utf-8"))


def test_unknown_format():
    with pytest.raises(ValueError):
        parse_system(b"n 1\n", "yaml")


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 2**64 - 1))
def test_round_trip(n, density, seed):
    g = gen_random(n, density, seed)
    s = SystemStructure(g)
    assert parse_system(serialize_system(s, "edgelist")) == s
    assert parse_system(serialize_system(s, "json")) == s
    full = solve_p2(g)
    assert parse_system(serialize_system(full)) == full


def test_edgelist_is_plant_only():
    g = StructuralDigraph(1, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        serialize_system(solve_p2(g), "edgelist")
    assert serialize_system(SystemStructure(g), "edgelist") == b"n 1\n1 1\n"


def test_gen_random_extremes():
    assert not gen_random(5, 0.0, 1).edges
    assert len(gen_random(5, 1.0, 1).edges) == 25
    with pytest.raises(ValueError):
        gen_random(3, 1.5, 0)


def test_gen_random_golden():
    g = gen_random(6, 0.3, 42)
    assert serialize_system(SystemStructure(g), "edgelist") == (GOLDEN / "gen_n6_d0.3_s42.txt").read_bytes()


def test_export_dot_plant_only():
    dot = export_dot(SystemStructure(StructuralDigraph(1, frozenset({(1, 1)}))))
    assert dot.startswith("digraph") and "x1 -> x1" in dot
    assert not any(c in dot for c in ("green", "red", "gray"))


def test_export_dot_bench_colours(bench):
    dot = export_dot(solve_p2(bench))
    assert dot.count("color=green") == 2
    assert dot.count("color=red") == 3
    assert dot.count("color=gray") == 2
    assert dot == export_dot(solve_p2(bench))


def test_export_dot_annotations(bench):
    m = Matching(frozenset({(2, 1), (1, 3)}), tuple(bench.states), tuple(bench.states))
    assert export_dot(SystemStructure(bench), m).count("color=blue") == 2
    dot = export_dot(SystemStructure(bench), solve_p1(bench))
    assert dot.count("color=green") == 2 and dot.count("color=red") == 3
    with pytest.raises(TypeError):
        export_dot(SystemStructure(bench), "nope")
