"""Exhaustive reference searches for small instances.

These exist to certify the polynomial algorithms in the test suite and are
never called by the solvers.  Every search runs under an
:class:`EnumerationBudget` and aborts with :class:`BudgetExceeded` instead of
silently running for an exponential amount of time.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .bipartite import BipartiteGraph, Matching
from .digraph import STATE, StructuralDigraph, SystemStructure, scc_decompose
from . import verify


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class EnumerationBudget:
    max_vertices: int = 8
    max_candidates: int = 2_000_000
    abort_on_exceed: bool = True

    def __post_init__(self) -> None:
        if self.max_vertices < 1 or self.max_candidates < 1:
            raise ValueError("budget bounds must be positive")

    def check_size(self, size: int) -> None:
        if size > self.max_vertices and self.abort_on_exceed:
            raise BudgetExceeded(f"{size} vertices exceeds the budget of {self.max_vertices}")


class _Counter:
    def __init__(self, budget: EnumerationBudget):
        self.budget = budget
        self.used = 0

    def tick(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.budget.max_candidates and self.budget.abort_on_exceed:
            raise BudgetExceeded(f"more than {self.budget.max_candidates} candidates examined")


def enumerate_maximum_matchings(b: BipartiteGraph, budget: Optional[EnumerationBudget] = None) -> List[Matching]:
    """All maximum matchings of ``b``, by backtracking over the left side."""
    budget = budget or EnumerationBudget()
    budget.check_size(max(len(b.left), len(b.right)))
    counter = _Counter(budget)
    adj: Dict[Hashable, List[Hashable]] = {l: [] for l in b.left}
    for l, r in sorted(b.edges, key=repr):
        adj[l].append(r)
    left = list(b.left)
    best: List[FrozenSet] = []
    best_size = -1
    chosen: List[Tuple[Hashable, Hashable]] = []
    used = set()

    def rec(i: int) -> None:
        nonlocal best, best_size
        counter.tick()
        if len(chosen) + (len(left) - i) < best_size:
            return
        if i == len(left):
            if len(chosen) > best_size:
                best_size = len(chosen)
                best = []
            best.append(frozenset(chosen))
            return
        l = left[i]
        for r in adj[l]:
            if r not in used:
                used.add(r)
                chosen.append((l, r))
                rec(i + 1)
                chosen.pop()
                used.discard(r)
        rec(i + 1)

    rec(0)
    uniq = sorted(set(best), key=lambda es: sorted(map(repr, es)))
    return [Matching(es, b.left, b.right) for es in uniq]


def brute_assignability(g: StructuralDigraph, budget: Optional[EnumerationBudget] = None) -> Tuple[int, int, int, int]:
    """``(m, beta, alpha, p)`` from SCCs and all maximum matchings."""
    states = tuple(g.states)
    matchings = enumerate_maximum_matchings(BipartiteGraph(states, states, g.edges), budget)
    scc = scc_decompose(g)
    comp_of = scc.component_of
    m = g.n - len(matchings[0])
    alpha = max(len({comp_of[x] for x in mm.right_unmatched} & scc.non_top) for mm in matchings)
    beta = len(scc.non_top)
    return m, beta, alpha, m + beta - alpha


def brute_min_dedicated_config(
    g: StructuralDigraph, mode: str = "input", budget: Optional[EnumerationBudget] = None
) -> Tuple[int, List[FrozenSet[int]]]:
    """Smallest feasible dedicated configuration size and every minimizer."""
    budget = budget or EnumerationBudget()
    budget.check_size(g.n)
    counter = _Counter(budget)
    for k in range(0, g.n + 1):
        found = []
        for combo in itertools.combinations(g.states, k):
            counter.tick()
            if verify.is_feasible_dedicated_config(g, combo, mode).passed:
                found.append(frozenset(combo))
        if found:
            return k, found
    raise AssertionError("full actuation is always feasible")


def set_partitions(items: Sequence) -> Iterator[List[List]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def brute_sparsest_B(g: StructuralDigraph, budget: Optional[EnumerationBudget] = None) -> int:
    """Fewest input edges giving structural controllability.

    Searches every set of actuated states together with every way of
    grouping them onto inputs.
    """
    budget = budget or EnumerationBudget(max_vertices=6)
    budget.check_size(g.n)
    counter = _Counter(budget)
    for k in range(1, g.n + 1):
        for combo in itertools.combinations(g.states, k):
            for part in set_partitions(list(combo)):
                counter.tick()
                b = frozenset((u, x) for u, grp in enumerate(part, start=1) for x in grp)
                if verify.is_structurally_controllable(SystemStructure(g, b)).passed:
                    return k
    raise AssertionError("full actuation is always feasible")


def min_effective_inputs(g: StructuralDigraph, budget: Optional[EnumerationBudget] = None) -> int:
    """Fewest inputs achieving controllability; ``k`` inputs wired to every
    state dominate any other ``k``-input matrix."""
    budget = budget or EnumerationBudget()
    budget.check_size(g.n)
    for k in range(1, g.n + 1):
        b = frozenset((u, x) for u in range(1, k + 1) for x in g.states)
        if verify.is_structurally_controllable(SystemStructure(g, b)).passed:
            return k
    raise AssertionError("n dedicated inputs are always enough")


def _closed_loop(d) -> Tuple[List[Hashable], Mapping[Hashable, Sequence[Hashable]]]:
    if isinstance(d, SystemStructure):
        return d.vertices(), d.successors
    vertices, succ = d
    return list(vertices), succ


def brute_cycle_cover(
    d, required: Optional[Iterable[Hashable]] = None, budget: Optional[EnumerationBudget] = None
) -> bool:
    """Whether disjoint cycles of ``d`` cover every required vertex.

    ``d`` is a :class:`SystemStructure` (required defaults to its states) or a
    ``(vertices, successors)`` pair.
    """
    budget = budget or EnumerationBudget()
    vertices, succ = _closed_loop(d)
    budget.check_size(len(vertices))
    counter = _Counter(budget)
    if required is None:
        required = [v for v in vertices if isinstance(v, tuple) and v[0] == STATE]
    req = sorted(set(required))
    used = set()

    def cycles_through(start) -> Iterator[List]:
        path = [start]
        on_path = {start}

        def walk(v) -> Iterator[List]:
            for w in succ[v]:
                counter.tick()
                if w == start:
                    yield list(path)
                elif w not in on_path and w not in used:
                    path.append(w)
                    on_path.add(w)
                    yield from walk(w)
                    path.pop()
                    on_path.discard(w)

        yield from walk(start)

    def solve() -> bool:
        target = next((v for v in req if v not in used), None)
        if target is None:
            return True
        for cyc in cycles_through(target):
            used.update(cyc)
            ok = solve()
            used.difference_update(cyc)
            if ok:
                return True
        return False

    return solve()


def brute_min_information_pattern(s: SystemStructure, budget: Optional[EnumerationBudget] = None) -> Optional[int]:
    """Fewest feedback edges (effective output to effective input) leaving no
    structurally fixed modes, or ``None`` if no pattern works."""
    budget = budget or EnumerationBudget()
    counter = _Counter(budget)
    plain = s.without_feedback()
    candidates = [(y, u) for y in plain.effective_outputs for u in plain.effective_inputs]
    for k in range(0, len(candidates) + 1):
        for combo in itertools.combinations(candidates, k):
            counter.tick()
            if verify.has_no_sfm(plain.with_feedback(combo)).passed:
                return k
    return None
