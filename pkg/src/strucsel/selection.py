"""Sparsest input/output placement and feedback information patterns.

All solvers return one canonical member of their (usually large) solution
family.  Ties are broken towards the lowest state/input ids, and inputs and
outputs are numbered in ascending order of the state they attach to.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .bipartite import (
    BipartiteGraph,
    Matching,
    MatchingError,
    check_matching,
    common_matching,
    maximum_matching,
    min_cost_max_matching,
    state_bipartite,
)
from .digraph import (
    INPUT,
    OUTPUT,
    SccDecomposition,
    StructuralDigraph,
    StructureError,
    SystemStructure,
    reachable_set,
    scc_decompose,
)
from . import verify

Edge = Tuple[int, int]

STATE_EDGE_COST = 1
SLACK_EDGE_COST = 2


class DesignError(ValueError):
    """A design precondition does not hold."""

    def __init__(self, message: str, report: Optional["verify.VerificationReport"] = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class AssignabilityReport:
    """Matching quantities of a state digraph.

    ``m`` right-unmatched vertices of any maximum matching, ``beta`` non-top
    linked SCCs, ``alpha`` maximum top assignability index and
    ``p = m + beta - alpha`` dedicated inputs.  Run on the transposed digraph
    the same numbers are the output-side (bottom) quantities.
    """

    m: int
    beta: int
    alpha: int
    p: int
    witness_matching: Matching
    u_r_star: FrozenSet[int]
    scc: SccDecomposition

    @property
    def assigned(self) -> FrozenSet[int]:
        """Non-top linked components holding a vertex of ``u_r_star``."""
        comp_of = self.scc.component_of
        return frozenset(c for c in (comp_of[x] for x in self.u_r_star) if c in self.scc.non_top)

    @property
    def non_assigned(self) -> Tuple[int, ...]:
        return tuple(sorted(self.scc.non_top - self.assigned))


@dataclass(frozen=True)
class DedicatedConfig:
    s: FrozenSet[int]
    u_r: FrozenSet[int]
    a_u_c: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.s)


@dataclass(frozen=True)
class DesignSolution:
    b_edges: FrozenSet[Edge] = frozenset()
    c_edges: FrozenSet[Edge] = frozenset()
    gamma: int = 0
    gamma_dual: int = 0

    @property
    def effective_inputs(self) -> int:
        return len({u for u, _ in self.b_edges})

    @property
    def effective_outputs(self) -> int:
        return len({y for _, y in self.c_edges})

    @property
    def b_nnz(self) -> int:
        return len(self.b_edges)

    @property
    def c_nnz(self) -> int:
        return len(self.c_edges)

    def system(self, g: StructuralDigraph) -> SystemStructure:
        return SystemStructure(g, self.b_edges, self.c_edges)


@dataclass(frozen=True)
class InformationPattern:
    k_edges: FrozenSet[Edge]
    partition: Tuple[Tuple[Edge, ...], ...]


@dataclass(frozen=True)
class P2Solution:
    system: SystemStructure
    inputs: AssignabilityReport
    outputs: AssignabilityReport
    common: Matching
    io_matching: Matching
    pattern: InformationPattern


def _require_states(g: StructuralDigraph) -> None:
    if g.n < 1:
        raise StructureError("the plant must have at least one state")


def assignability(g: StructuralDigraph) -> AssignabilityReport:
    """Maximum matching with maximum top assignability via one weighted matching.

    Each non-top linked SCC gets a slack left vertex joined to all its
    states.  State edges cost one and slack edges two, so the minimum cost
    maximum matching keeps a maximum state matching and uses as many slack
    edges as possible; the states taken by slack edges are freed and join the
    right-unmatched set.
    """
    _require_states(g)
    scc = scc_decompose(g)
    non_top = sorted(scc.non_top)
    slack = {c: g.n + k + 1 for k, c in enumerate(non_top)}
    left = tuple(g.states) + tuple(slack[c] for c in non_top)
    weights: Dict[Edge, int] = {e: STATE_EDGE_COST for e in g.edges}
    for c in non_top:
        for x in scc.components[c]:
            weights[(slack[c], x)] = SLACK_EDGE_COST
    weighted = BipartiteGraph(left, tuple(g.states), frozenset(weights), weights)
    full = min_cost_max_matching(weighted)

    witness = Matching(frozenset(e for e in full.edges if e[0] <= g.n), tuple(g.states), tuple(g.states))
    u_r_star = witness.right_unmatched
    comp_of = scc.component_of
    alpha = len({comp_of[x] for x in u_r_star} & scc.non_top)
    m = len(u_r_star)
    beta = len(non_top)
    return AssignabilityReport(m, beta, alpha, m + beta - alpha, witness, u_r_star, scc)


def _config_from_report(rep: AssignabilityReport) -> DedicatedConfig:
    a_u_c = frozenset(rep.scc.components[c][0] for c in rep.non_assigned)
    return DedicatedConfig(rep.u_r_star | a_u_c, rep.u_r_star, a_u_c)


def minimal_dedicated_input_config(g: StructuralDigraph) -> DedicatedConfig:
    return _config_from_report(assignability(g))


def minimal_dedicated_output_config(g: StructuralDigraph) -> DedicatedConfig:
    return _config_from_report(assignability(g.transpose()))


def _dedicated(states: Sequence[int]) -> FrozenSet[Edge]:
    return frozenset((k, x) for k, x in enumerate(sorted(states), start=1))


def solve_p1d(g: StructuralDigraph) -> SystemStructure:
    """Fewest dedicated inputs and dedicated outputs."""
    s_u = minimal_dedicated_input_config(g).s
    s_y = minimal_dedicated_output_config(g).s
    return SystemStructure(g, _dedicated(s_u), frozenset((x, y) for y, x in _dedicated(s_y)))


def _non_assigned_components(g: StructuralDigraph, m: Matching, scc: SccDecomposition) -> List[Tuple[int, ...]]:
    comp_of = scc.component_of
    assigned = {comp_of[x] for x in m.right_unmatched}
    return [scc.components[c] for c in sorted(scc.non_top) if c not in assigned]


def _input_edges(u_r: Sequence[int], reps: Sequence[int], minimal: bool) -> FrozenSet[Edge]:
    edges = [(j, x) for j, x in enumerate(sorted(u_r), start=1)]
    if minimal:
        edges += [(1, x) for x in reps]
    else:
        edges += [(len(u_r) + k, x) for k, x in enumerate(sorted(reps), start=1)]
    return frozenset(edges)


def build_I_M(g: StructuralDigraph, m: Matching, minimal: bool = False) -> DesignSolution:
    """Canonical input matrix built on the maximum matching ``m``.

    One distinct input per right-unmatched state, plus an edge into the
    lowest state of every non-top linked SCC that ``m`` leaves unassigned.
    With ``minimal`` those extra edges reuse input 1 (the only input when the
    matching is perfect).
    """
    _require_states(g)
    b = state_bipartite(g)
    try:
        check_matching(b, m)
    except MatchingError as exc:
        raise DesignError(str(exc)) from None
    if len(m) != len(maximum_matching(b)):
        raise DesignError("matching is not maximum")
    scc = scc_decompose(g)
    reps = [comp[0] for comp in _non_assigned_components(g, m, scc)]
    return DesignSolution(b_edges=_input_edges(sorted(m.right_unmatched), reps, minimal), gamma=len(reps))


def _design_from_matching(g: StructuralDigraph, m: Matching, minimal: bool) -> DesignSolution:
    """Inputs from ``m`` on ``g`` and outputs from ``m`` read on the transpose."""
    ins = build_I_M(g, m, minimal)
    outs = build_I_M(g.transpose(), m.transpose(), minimal)
    c_edges = frozenset((x, y) for y, x in outs.b_edges)
    return DesignSolution(ins.b_edges, c_edges, ins.gamma, outs.gamma)


def solve_p1(g: StructuralDigraph, minimal: bool = False) -> DesignSolution:
    """Sparsest input and output matrices.

    ``b_nnz = m + beta - alpha`` and ``c_nnz`` is the dual count; with
    ``minimal`` the number of effective inputs (outputs) is also the least
    possible, ``max(m, 1)``.
    """
    rep = assignability(g)
    dual = assignability(g.transpose())
    ins = build_I_M(g, rep.witness_matching, minimal)
    outs = build_I_M(g.transpose(), dual.witness_matching, minimal)
    c_edges = frozenset((x, y) for y, x in outs.b_edges)
    return DesignSolution(ins.b_edges, c_edges, ins.gamma, outs.gamma)


def enumerate_input_designs(g: StructuralDigraph, minimal: bool = False, limit: int = 10) -> Iterator[DesignSolution]:
    """Members of the sparsest input family around the top-assignable witness.

    Varies the state chosen in each unassigned non-top SCC and, for the
    minimal family with ``m > 0``, which input serves it.  Stops after
    ``limit`` designs.
    """
    rep = assignability(g)
    m = rep.witness_matching
    u_r = sorted(m.right_unmatched)
    comps = _non_assigned_components(g, m, rep.scc)
    base = [(j, x) for j, x in enumerate(u_r, start=1)]
    if minimal:
        hosts = range(1, max(len(u_r), 1) + 1)
    count = 0
    for reps in itertools.product(*comps):
        if minimal:
            choices = itertools.product(hosts, repeat=len(reps))
        else:
            choices = [tuple(range(len(u_r) + 1, len(u_r) + len(reps) + 1))]
        for owners in choices:
            if count >= limit:
                return
            yield DesignSolution(b_edges=frozenset(base + list(zip(owners, reps))), gamma=len(reps))
            count += 1


def io_reachability_bipartite(s: SystemStructure) -> BipartiteGraph:
    """Effective inputs versus effective outputs, joined when the input reaches the output."""
    plain = s.without_feedback()
    ctrb = verify.is_structurally_controllable(plain)
    if not ctrb.passed:
        raise DesignError("system is not structurally controllable", ctrb)
    obsv = verify.is_structurally_observable(plain)
    if not obsv.passed:
        raise DesignError("system is not structurally observable", obsv)
    edges = set()
    for u in plain.effective_inputs:
        for tag, y in reachable_set(plain, [(INPUT, u)]):
            if tag == OUTPUT:
                edges.add((u, y))
    return BipartiteGraph(plain.effective_inputs, plain.effective_outputs, frozenset(edges))


def _cycle_edges(subset: Sequence[Edge]) -> List[Edge]:
    """Feedback edges closing the matched pairs of ``subset`` into one cycle."""
    ordered = sorted(subset)
    k = len(ordered)
    return [(ordered[i][1], ordered[(i + 1) % k][0]) for i in range(k)]


def _io_matching(s: SystemStructure) -> Tuple[BipartiteGraph, Matching]:
    io = io_reachability_bipartite(s)
    mm = maximum_matching(io)
    if len(mm) != len(io.left) or len(io.left) != len(io.right):
        raise DesignError(
            "input-output reachability graph has no perfect matching; "
            "the design is not a minimal sparsest input/output design"
        )
    return io, mm


def mix_pairing(s: SystemStructure, partition: Optional[Sequence[Sequence[Edge]]] = None) -> InformationPattern:
    """Sparsest feedback pattern free of structurally fixed modes.

    Without ``partition`` the matched (input, output) pairs, ordered by
    input, are chained into a single cycle ``y(e_i) -> u(e_{i+1})``.  A
    ``partition`` lists groups of matched ``(input, output)`` pairs whose
    union must be a perfect matching of the reachability graph; each group is
    closed into its own cycle and the result is verified.
    """
    io, mm = _io_matching(s)
    if partition is None:
        groups: Tuple[Tuple[Edge, ...], ...] = (tuple(mm.sorted_edges()),)
    else:
        groups = tuple(tuple(sorted((int(u), int(y)) for u, y in grp)) for grp in partition)
        flat = [e for grp in groups for e in grp]
        if len(set(flat)) != len(flat):
            raise DesignError("partition groups overlap")
        try:
            union = Matching(frozenset(flat), io.left, io.right)
            check_matching(io, union)
        except MatchingError as exc:
            raise DesignError(f"partition is not a partition of an input-output matching: {exc}") from None
        if len(union) != len(io.left):
            raise DesignError("partition does not cover every effective input and output")
        groups = tuple(grp for grp in groups if grp)
    k_edges = frozenset(f for grp in groups for f in _cycle_edges(grp))
    report = verify.has_no_sfm(s.with_feedback(k_edges))
    if not report.passed:
        raise DesignError("pairing leaves structurally fixed modes", report)
    return InformationPattern(k_edges, groups)


def enumerate_mix_pairings(s: SystemStructure, limit: int = 10, max_inputs: int = 8) -> Iterator[InformationPattern]:
    """Every mix-pairing of a minimal design, up to ``limit`` of them.

    Each candidate closes the input-output stems with one feedback edge per
    output, i.e. it is a bijection from effective outputs to effective
    inputs; candidates are generated in lexicographic order of that
    bijection and kept when the closed loop has no structurally fixed modes.
    """
    io, _ = _io_matching(s)
    if len(io.left) > max_inputs:
        raise DesignError(f"enumeration limited to {max_inputs} effective inputs, got {len(io.left)}")
    count = 0
    for perm in itertools.permutations(io.left):
        if count >= limit:
            return
        k_edges = frozenset(zip(io.right, perm))
        if verify.has_no_sfm(s.with_feedback(k_edges)).passed:
            yield InformationPattern(k_edges, _groups_of(k_edges, s))
            count += 1


def _groups_of(k_edges: FrozenSet[Edge], s: SystemStructure) -> Tuple[Tuple[Edge, ...], ...]:
    """Recover the (input, output) pairs grouped by the feedback cycles they lie on."""
    io, mm = _io_matching(s)
    # feedback y -> u together with the matched pairs define a permutation on pairs
    pair_of_input = {u: (u, y) for u, y in mm.edges}
    nxt = {}
    for y, u in k_edges:
        src = next(e for e in mm.edges if e[1] == y)
        nxt[src] = pair_of_input[u]
    groups, seen = [], set()
    for e in mm.sorted_edges():
        if e in seen:
            continue
        grp, cur = [], e
        while cur not in seen:
            seen.add(cur)
            grp.append(cur)
            cur = nxt[cur]
        groups.append(tuple(sorted(grp)))
    return tuple(groups)


def solve_p2_detailed(g: StructuralDigraph) -> P2Solution:
    rep = assignability(g)
    dual = assignability(g.transpose())
    b = state_bipartite(g)
    common = common_matching(b, rep.witness_matching, dual.witness_matching.transpose())
    design = _design_from_matching(g, common, minimal=True)
    system = design.system(g)
    _, io_m = _io_matching(system)
    pattern = mix_pairing(system)
    return P2Solution(system.with_feedback(pattern.k_edges), rep, dual, common, io_m, pattern)


def solve_p2(g: StructuralDigraph) -> SystemStructure:
    """Jointly sparsest inputs, outputs and feedback pattern with no structurally fixed modes."""
    return solve_p2_detailed(g).system
