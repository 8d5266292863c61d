import random

import pytest

from strucsel import (
    SystemStructure,
    VerificationReport,
    has_no_sfm,
    is_feasible_dedicated_config,
    is_structurally_controllable,
    is_structurally_observable,
    numeric_rank_oracle,
    solve_p1,
    solve_p2,
)
from strucsel.oracle import EnumerationBudget, brute_cycle_cover
from strucsel.selection import solve_p2_detailed
from strucsel.verify import cycle_cover_matching

from conftest import digraph, random_plants

LOOP = digraph(1, (1, 1))
PATH = digraph(3, (1, 2), (2, 3))


def dedicated(g, inputs=(), outputs=()):
    return SystemStructure(
        g,
        frozenset(enumerate(sorted(inputs), start=1)),
        frozenset((x, y) for y, x in enumerate(sorted(outputs), start=1)),
    )


def test_report_needs_witness_on_fail():
    with pytest.raises(ValueError):
        VerificationReport("fail")
    with pytest.raises(ValueError):
        VerificationReport("maybe")
    assert VerificationReport("pass") and not VerificationReport("fail", {"x": 1})


def test_controllability_examples(bench):
    r = is_structurally_controllable(SystemStructure(LOOP))
    assert not r and r.witness["unreachable"] == [1]
    assert is_structurally_controllable(dedicated(PATH, [1]))
    assert is_structurally_controllable(dedicated(bench, [2, 4]))
    assert not is_structurally_controllable(dedicated(bench, [2]))


def test_dilation_is_reported():
    # x1 drives x2 and x3 that have no other predecessor: reachable but not saturable
    g = digraph(3, (1, 2), (1, 3))
    r = is_structurally_controllable(dedicated(g, [1]))
    assert not r and "unsaturated" in r.witness


def test_observability_examples(bench):
    assert is_structurally_observable(dedicated(bench, outputs=[7, 9, 10]))
    assert not is_structurally_observable(dedicated(PATH, outputs=[1]))
    assert is_structurally_observable(dedicated(LOOP, outputs=[1]))


def test_observability_is_controllability_of_transpose():
    rng = random.Random(1)
    for g in random_plants(200, 6, seed=12):
        outs = rng.sample(list(g.states), rng.randint(0, min(3, g.n)))
        s = dedicated(g, outputs=outs)
        assert is_structurally_observable(s).verdict == is_structurally_controllable(s.transpose()).verdict


def test_feasible_dedicated_config(bench):
    assert is_feasible_dedicated_config(PATH, {1})
    assert not is_feasible_dedicated_config(PATH, {2})
    assert is_feasible_dedicated_config(bench, {2, 4})
    for g in random_plants(50, 6, seed=13):
        assert is_feasible_dedicated_config(g, g.states)
        assert is_feasible_dedicated_config(g, g.states, "output")
    with pytest.raises(ValueError):
        is_feasible_dedicated_config(PATH, {4})
    with pytest.raises(ValueError):
        is_feasible_dedicated_config(PATH, {1}, "both")


def test_sfm_examples(bench):
    s = SystemStructure(LOOP, frozenset({(1, 1)}), frozenset({(1, 1)}), frozenset({(1, 1)}))
    assert has_no_sfm(s)
    p2 = solve_p2_detailed(bench)
    assert has_no_sfm(p2.system)
    per_stem = p2.system.with_feedback((y, u) for u, y in p2.io_matching.edges)
    r = has_no_sfm(per_stem)
    assert not r and r.witness["condition"] == "a"
    assert 10 in r.witness["states_without_feedback_scc"]


def test_sfm_path_closed_by_one_cycle():
    # u1 -> x1 -> x2 -> x3 -> y1 -> u1 is a single cycle through every state
    s = SystemStructure(PATH, frozenset({(1, 1)}), frozenset({(3, 1)}), frozenset({(1, 1)}))
    assert has_no_sfm(s)
    assert brute_cycle_cover(s) is True


def test_sfm_condition_b_failure():
    # x1 and x2 both need u1 on their covering cycle
    g = digraph(3, (1, 3), (2, 3))
    s = SystemStructure(g, frozenset({(1, 1), (1, 2)}), frozenset({(3, 1)}), frozenset({(1, 1)}))
    r = has_no_sfm(s)
    assert not r and r.witness["condition"] == "b"
    assert brute_cycle_cover(s) is False


def test_sfm_without_feedback_fails():
    assert not has_no_sfm(solve_p1(LOOP).system(LOOP))


def test_condition_b_matches_brute_force_on_random_closed_loops():
    rng = random.Random(14)
    budget = EnumerationBudget(max_vertices=8)
    checked = 0
    for g in random_plants(400, 5, seed=14):
        ins = rng.randint(0, 2)
        outs = rng.randint(0, 2)
        b = frozenset((rng.randint(1, ins), x) for x in g.states if ins and rng.random() < 0.4)
        c = frozenset((x, rng.randint(1, outs)) for x in g.states if outs and rng.random() < 0.4)
        k = frozenset((y, u) for y in {y for _, y in c} for u in {u for u, _ in b} if rng.random() < 0.6)
        s = SystemStructure(g, b, c, k)
        if len(s.vertices()) > 8:
            continue
        assert (cycle_cover_matching(s) is None) == brute_cycle_cover(s, budget=budget)
        checked += 1
    assert checked > 300


def test_monotonicity():
    rng = random.Random(15)
    for g in random_plants(150, 6, seed=15):
        s = solve_p1(g).system(g)
        extra = frozenset(s.input_edges | {(1, rng.randint(1, g.n))})
        assert is_structurally_controllable(SystemStructure(g, extra))
        closed = solve_p2(g)
        more = closed.with_feedback(
            closed.feedback_edges | {(y, u) for y in closed.effective_outputs for u in closed.effective_inputs}
        )
        assert has_no_sfm(more)


def test_numeric_oracle_examples(bench):
    assert not numeric_rank_oracle(SystemStructure(PATH), trials=3)
    assert numeric_rank_oracle(dedicated(bench, [2, 4]))
    for g in random_plants(100, 8, seed=16):
        assert numeric_rank_oracle(solve_p1(g).system(g), trials=3, seed=1)
    with pytest.raises(ValueError):
        numeric_rank_oracle(SystemStructure(PATH), trials=0)


def test_numeric_oracle_is_seed_deterministic():
    s = dedicated(PATH, [2])
    assert numeric_rank_oracle(s, seed=5) == numeric_rank_oracle(s, seed=5)
