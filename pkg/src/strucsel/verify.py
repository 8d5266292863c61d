"""Independent checks of the properties the solvers claim."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Mapping, Optional

import numpy as np
from scipy.linalg import orth

from .bipartite import BipartiteGraph, maximum_matching
from .digraph import INPUT, OUTPUT, STATE, StructuralDigraph, SystemStructure, condense, reachable_set


@dataclass(frozen=True)
class VerificationReport:
    verdict: str
    witness: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verdict not in ("pass", "fail"):
            raise ValueError(f"verdict must be 'pass' or 'fail', got {self.verdict!r}")
        if self.verdict == "fail" and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __bool__(self) -> bool:
        return self.passed


def _ok() -> VerificationReport:
    return VerificationReport("pass")


def _fail(**witness: Any) -> VerificationReport:
    return VerificationReport("fail", witness)


def is_structurally_controllable(s: SystemStructure) -> VerificationReport:
    """Every state reachable from an input, and a matching that gives every
    state a distinct predecessor (state or input)."""
    plain = SystemStructure(s.plant, s.input_edges)
    sources = [(INPUT, u) for u in plain.effective_inputs]
    reached = reachable_set(plain, sources)
    unreachable = [i for i in s.plant.states if (STATE, i) not in reached]
    if unreachable:
        return _fail(unreachable=unreachable)
    states = tuple((STATE, i) for i in s.plant.states)
    left = states + tuple(sources)
    edges = {((STATE, a), (STATE, b)) for a, b in s.plant.edges}
    edges |= {((INPUT, u), (STATE, x)) for u, x in s.input_edges}
    mm = maximum_matching(BipartiteGraph(left, states, frozenset(edges)))
    if len(mm) < len(states):
        return _fail(unsaturated=sorted(x for _, x in mm.right_unmatched))
    return _ok()


def is_structurally_observable(s: SystemStructure) -> VerificationReport:
    return is_structurally_controllable(s.transpose())


def is_feasible_dedicated_config(g: StructuralDigraph, s: Iterable[int], mode: str = "input") -> VerificationReport:
    states = sorted(set(s))
    for x in states:
        if not 1 <= x <= g.n:
            raise ValueError(f"state {x} outside 1..{g.n}")
    if mode == "input":
        return is_structurally_controllable(SystemStructure(g, frozenset(enumerate(states, start=1))))
    if mode == "output":
        return is_structurally_observable(
            SystemStructure(g, output_edges=frozenset((x, k) for k, x in enumerate(states, start=1)))
        )
    raise ValueError(f"mode must be 'input' or 'output', got {mode!r}")


def has_no_sfm(s: SystemStructure) -> VerificationReport:
    """Absence of structurally fixed modes for the closed loop ``(A, B, K, C)``.

    (a) every state lies in an SCC of the closed-loop digraph that contains a
    feedback edge; (b) the states are covered by disjoint cycles, decided as
    a perfect matching after adding a self-loop to every input and output
    vertex.
    """
    vertices = s.vertices()
    succ = s.successors
    scc = condense(vertices, succ)
    comp_of = scc.component_of
    with_feedback = {comp_of[(OUTPUT, y)] for y, u in s.feedback_edges if comp_of[(OUTPUT, y)] == comp_of[(INPUT, u)]}
    lacking = [i for i in s.plant.states if comp_of[(STATE, i)] not in with_feedback]
    if lacking:
        return _fail(condition="a", states_without_feedback_scc=lacking)
    cover = cycle_cover_matching(s)
    if cover is not None:
        return _fail(condition="b", uncovered=cover)
    return _ok()


def cycle_cover_matching(s: SystemStructure) -> Optional[list]:
    """``None`` if the states of the closed loop are covered by disjoint
    cycles, otherwise the vertices left unmatched by a maximum matching of the
    self-loop augmented bipartite graph."""
    vertices = tuple(s.vertices())
    edges = set(s.tagged_edges())
    edges |= {(v, v) for v in vertices if v[0] != STATE}
    mm = maximum_matching(BipartiteGraph(vertices, vertices, frozenset(edges)))
    if len(mm) == len(vertices):
        return None
    return [f"{t}{i}" for t, i in sorted(mm.right_unmatched)]


def _controllable_dimension(a: np.ndarray, b: np.ndarray, rcond: float) -> int:
    if b.shape[1] == 0:
        return 0
    basis = orth(b, rcond=rcond)
    n = a.shape[0]
    while basis.shape[1] < n:
        grown = orth(np.hstack([basis, a @ basis]), rcond=rcond)
        if grown.shape[1] == basis.shape[1]:
            break
        basis = grown
    return basis.shape[1]


def sample_realization(s: SystemStructure, rng: np.random.Generator, low: float = 0.5, high: float = 1.5):
    """Random real ``(A, B)`` with the sparsity of ``s``; magnitudes in
    ``[low, high]`` with random signs."""
    n = s.n
    ins = s.effective_inputs
    col = {u: j for j, u in enumerate(ins)}

    def draw(k: int) -> np.ndarray:
        return rng.uniform(low, high, k) * rng.choice((-1.0, 1.0), k)

    a = np.zeros((n, n))
    es = sorted(s.plant.edges)
    if es:
        vals = draw(len(es))
        for (src, dst), v in zip(es, vals):
            a[dst - 1, src - 1] = v
    b = np.zeros((n, len(ins)))
    bs = sorted(s.input_edges)
    if bs:
        vals = draw(len(bs))
        for (u, x), v in zip(bs, vals):
            b[x - 1, col[u]] = v
    return a, b


def numeric_rank_oracle(
    s: SystemStructure,
    trials: int = 3,
    seed: int = 0,
    low: float = 0.5,
    high: float = 1.5,
    rcond: float = 1e-9,
) -> VerificationReport:
    """Controllability of random numeric realizations; passes if any trial
    has a controllable subspace of full dimension.  Test oracle only."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        a, b = sample_realization(s, rng, low, high)
        best = max(best, _controllable_dimension(a, b, rcond))
        if best == s.n:
            return _ok()
    return _fail(rank=best, n=s.n)
