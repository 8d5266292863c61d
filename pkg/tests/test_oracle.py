import pytest

from strucsel import BipartiteGraph, StructuralDigraph, SystemStructure, solve_p1, solve_p2
from strucsel.oracle import (
    BudgetExceeded,
    EnumerationBudget,
    brute_cycle_cover,
    brute_min_dedicated_config,
    brute_min_information_pattern,
    brute_sparsest_B,
    enumerate_maximum_matchings,
    set_partitions,
)

from conftest import digraph

PATH = digraph(3, (1, 2), (2, 3))
TRIANGLE = digraph(3, (1, 2), (2, 3), (3, 1))


def test_budget_validation():
    with pytest.raises(ValueError):
        EnumerationBudget(max_vertices=0)
    with pytest.raises(BudgetExceeded):
        brute_min_dedicated_config(StructuralDigraph(9))
    with pytest.raises(BudgetExceeded):
        brute_sparsest_B(digraph(4, (1, 2)), EnumerationBudget(max_candidates=3))
    # without the abort flag the search runs to completion
    assert brute_sparsest_B(digraph(4, (1, 2)), EnumerationBudget(max_candidates=3, abort_on_exceed=False)) == 3


def test_enumerate_maximum_matchings():
    assert len(enumerate_maximum_matchings(BipartiteGraph((1, 2), (3,), frozenset({(1, 3), (2, 3)})))) == 2
    empty = enumerate_maximum_matchings(BipartiteGraph((1,), (2,)))
    assert len(empty) == 1 and len(empty[0]) == 0
    full = BipartiteGraph((1, 2), ("a", "b"), frozenset({(1, "a"), (1, "b"), (2, "a"), (2, "b")}))
    assert len(enumerate_maximum_matchings(full)) == 2


def test_brute_min_dedicated_config(bench):
    assert brute_min_dedicated_config(PATH) == (1, [frozenset({1})])
    assert brute_min_dedicated_config(StructuralDigraph(2)) == (2, [frozenset({1, 2})])
    assert brute_min_dedicated_config(PATH, "output") == (1, [frozenset({3})])
    assert brute_min_dedicated_config(bench, budget=EnumerationBudget(max_vertices=10)) == (2, [frozenset({2, 4})])


def test_brute_sparsest_B():
    assert brute_sparsest_B(TRIANGLE) == 1
    assert brute_sparsest_B(PATH) == 1
    assert brute_sparsest_B(StructuralDigraph(2)) == 2


def test_set_partitions_are_bell_numbers():
    assert [sum(1 for _ in set_partitions(list(range(k)))) for k in range(6)] == [1, 1, 2, 5, 15, 52]


def test_brute_cycle_cover(bench):
    loop = digraph(1, (1, 1))
    assert brute_cycle_cover(([("x", 1)], {("x", 1): (("x", 1),)}), [("x", 1)])
    two = {("x", 1): (("x", 2),), ("x", 2): ()}
    assert not brute_cycle_cover((list(two), two), list(two))
    closed = solve_p2(bench)
    assert brute_cycle_cover(closed, budget=EnumerationBudget(max_vertices=20))
    assert brute_cycle_cover(SystemStructure(loop)) is True


def test_brute_min_information_pattern(bench):
    loop = digraph(1, (1, 1))
    assert brute_min_information_pattern(solve_p1(loop).system(loop)) == 1
    assert brute_min_information_pattern(solve_p2(bench).without_feedback()) == 2
    # x2 is never reached by the input
    broken = SystemStructure(digraph(2, (1, 1), (2, 2)), frozenset({(1, 1)}), frozenset({(1, 1), (2, 1)}))
    assert brute_min_information_pattern(broken) is None
