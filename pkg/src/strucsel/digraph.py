"""State digraphs, full system structures and their SCC condensation.

Edge convention used throughout the package: a plant edge ``(src, dst)`` means
``x_src -> x_dst``, i.e. ``A[dst][src] != 0``.  Input edges are ``(u, x)``
(``B[x][u] != 0``), output edges ``(x, y)`` (``C[y][x] != 0``) and feedback
edges ``(y, u)`` (``K[u][y] != 0``, input ``u`` may read output ``y``).

Vertices of a full system digraph are tagged tuples ``("x", i)``,
``("u", j)`` and ``("y", k)`` so that states, inputs and outputs sharing a
numeric id never collide.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Sequence, Tuple

Edge = Tuple[int, int]

STATE = "x"
INPUT = "u"
OUTPUT = "y"


class StructureError(ValueError):
    """Raised when a structure violates its invariants."""


def _edge_set(edges: Iterable[Sequence[int]], what: str) -> FrozenSet[Edge]:
    seen = set()
    for e in edges:
        a, b = e
        if not (isinstance(a, int) and isinstance(b, int)) or isinstance(a, bool) or isinstance(b, bool):
            raise StructureError(f"{what} edge {tuple(e)!r} must hold two integers")
        if (a, b) in seen:
            raise StructureError(f"duplicate {what} edge {(a, b)!r}")
        seen.add((a, b))
    return frozenset(seen)


@dataclass(frozen=True)
class StructuralDigraph:
    """Zero/non-zero pattern of the dynamics matrix as a digraph on ``1..n``."""

    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise StructureError(f"state count must be a non-negative integer, got {self.n!r}")
        edges = _edge_set(self.edges, "state")
        for s, d in edges:
            if not (1 <= s <= self.n and 1 <= d <= self.n):
                raise StructureError(f"state edge {(s, d)!r} outside 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @property
    def states(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def successors(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = {v: [] for v in self.states}
        for s, d in self.edges:
            out[s].append(d)
        return {v: tuple(sorted(ws)) for v, ws in out.items()}

    @cached_property
    def predecessors(self) -> Dict[int, Tuple[int, ...]]:
        inc: Dict[int, List[int]] = {v: [] for v in self.states}
        for s, d in self.edges:
            inc[d].append(s)
        return {v: tuple(sorted(ws)) for v, ws in inc.items()}

    def transpose(self) -> "StructuralDigraph":
        return StructuralDigraph(self.n, frozenset((d, s) for s, d in self.edges))

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> List[List[int]]:
        """Return the pattern ``A`` with ``A[dst-1][src-1] = 1``."""
        a = [[0] * self.n for _ in range(self.n)]
        for s, d in self.edges:
            a[d - 1][s - 1] = 1
        return a


@dataclass(frozen=True)
class SystemStructure:
    """Plant pattern together with input, output and feedback edges."""

    plant: StructuralDigraph
    input_edges: FrozenSet[Edge] = field(default_factory=frozenset)
    output_edges: FrozenSet[Edge] = field(default_factory=frozenset)
    feedback_edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        n = self.plant.n
        b = _edge_set(self.input_edges, "input")
        c = _edge_set(self.output_edges, "output")
        k = _edge_set(self.feedback_edges, "feedback")
        for u, x in b:
            if u < 1 or not 1 <= x <= n:
                raise StructureError(f"input edge {(u, x)!r}: input id must be positive and state in 1..{n}")
        for x, y in c:
            if y < 1 or not 1 <= x <= n:
                raise StructureError(f"output edge {(x, y)!r}: output id must be positive and state in 1..{n}")
        for y, u in k:
            if y < 1 or u < 1:
                raise StructureError(f"feedback edge {(y, u)!r}: ids must be positive")
        object.__setattr__(self, "input_edges", b)
        object.__setattr__(self, "output_edges", c)
        object.__setattr__(self, "feedback_edges", k)

    @property
    def n(self) -> int:
        return self.plant.n

    @property
    def effective_inputs(self) -> Tuple[int, ...]:
        return tuple(sorted({u for u, _ in self.input_edges}))

    @property
    def effective_outputs(self) -> Tuple[int, ...]:
        return tuple(sorted({y for _, y in self.output_edges}))

    @property
    def b_nnz(self) -> int:
        return len(self.input_edges)

    @property
    def c_nnz(self) -> int:
        return len(self.output_edges)

    @property
    def k_nnz(self) -> int:
        return len(self.feedback_edges)

    def with_feedback(self, feedback_edges: Iterable[Edge]) -> "SystemStructure":
        return SystemStructure(self.plant, self.input_edges, self.output_edges, frozenset(feedback_edges))

    def without_feedback(self) -> "SystemStructure":
        return SystemStructure(self.plant, self.input_edges, self.output_edges)

    def transpose(self) -> "SystemStructure":
        """Dual system: inputs become outputs and vice versa, all arrows reversed."""
        return SystemStructure(
            self.plant.transpose(),
            input_edges=frozenset((y, x) for x, y in self.output_edges),
            output_edges=frozenset((x, u) for u, x in self.input_edges),
            feedback_edges=frozenset((u, y) for y, u in self.feedback_edges),
        )

    def vertices(self) -> List[Tuple[str, int]]:
        """All vertices of the closed-loop digraph (isolated inputs/outputs excluded)."""
        vs = [(STATE, i) for i in self.plant.states]
        ins = {u for u, _ in self.input_edges} | {u for _, u in self.feedback_edges}
        outs = {y for _, y in self.output_edges} | {y for y, _ in self.feedback_edges}
        vs += [(INPUT, u) for u in sorted(ins)]
        vs += [(OUTPUT, y) for y in sorted(outs)]
        return vs

    def tagged_edges(self) -> List[Tuple[Tuple[str, int], Tuple[str, int]]]:
        es = [((STATE, s), (STATE, d)) for s, d in self.plant.edges]
        es += [((INPUT, u), (STATE, x)) for u, x in self.input_edges]
        es += [((STATE, x), (OUTPUT, y)) for x, y in self.output_edges]
        es += [((OUTPUT, y), (INPUT, u)) for y, u in self.feedback_edges]
        return sorted(es)

    @cached_property
    def successors(self) -> Dict[Tuple[str, int], Tuple[Tuple[str, int], ...]]:
        out: Dict[Tuple[str, int], List[Tuple[str, int]]] = {v: [] for v in self.vertices()}
        for a, b in self.tagged_edges():
            out[a].append(b)
        return {v: tuple(ws) for v, ws in out.items()}

    @cached_property
    def predecessors(self) -> Dict[Tuple[str, int], Tuple[Tuple[str, int], ...]]:
        inc: Dict[Tuple[str, int], List[Tuple[str, int]]] = {v: [] for v in self.vertices()}
        for a, b in self.tagged_edges():
            inc[b].append(a)
        return {v: tuple(sorted(ws)) for v, ws in inc.items()}


@dataclass(frozen=True)
class SccDecomposition:
    """Strongly connected components and their condensation DAG.

    ``non_top`` holds the components without incoming condensation edges,
    ``non_bottom`` those without outgoing ones.
    """

    components: Tuple[Tuple[Hashable, ...], ...]
    condensation_edges: FrozenSet[Tuple[int, int]]
    non_top: FrozenSet[int]
    non_bottom: FrozenSet[int]

    @cached_property
    def component_of(self) -> Dict[Hashable, int]:
        return {v: c for c, comp in enumerate(self.components) for v in comp}

    @property
    def beta(self) -> int:
        return len(self.non_top)

    @property
    def beta_dual(self) -> int:
        return len(self.non_bottom)


def strongly_connected_components(
    vertices: Sequence[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]
) -> List[List[Hashable]]:
    """Iterative Tarjan; returns components in reverse topological order."""
    index: Dict[Hashable, int] = {}
    low: Dict[Hashable, int] = {}
    on_stack = set()
    stack: List[Hashable] = []
    result: List[List[Hashable]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


def condense(
    vertices: Sequence[Hashable], successors: Mapping[Hashable, Iterable[Hashable]]
) -> SccDecomposition:
    comps = [sorted(c) for c in strongly_connected_components(vertices, lambda v: successors[v])]
    comps.sort(key=lambda c: c[0])
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    cedges = set()
    for v in vertices:
        for w in successors[v]:
            a, b = comp_of[v], comp_of[w]
            if a != b:
                cedges.add((a, b))
    has_in = {b for _, b in cedges}
    has_out = {a for a, _ in cedges}
    ids = range(len(comps))
    return SccDecomposition(
        components=tuple(tuple(c) for c in comps),
        condensation_edges=frozenset(cedges),
        non_top=frozenset(i for i in ids if i not in has_in),
        non_bottom=frozenset(i for i in ids if i not in has_out),
    )


def scc_decompose(g: StructuralDigraph) -> SccDecomposition:
    """SCCs of the state digraph, ordered by their smallest state id."""
    return condense(list(g.states), g.successors)


def reachable_set(g, sources: Iterable[Hashable], direction: str = "forward") -> FrozenSet[Hashable]:
    """Vertices reachable from ``sources`` (sources included).

    ``g`` is a :class:`StructuralDigraph` (vertices are state ids) or a
    :class:`SystemStructure` (vertices are tagged tuples of the closed-loop
    digraph).  ``direction="backward"`` follows edges in reverse.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    adj = g.successors if direction == "forward" else g.predecessors
    seen = set()
    queue = deque()
    for s in sources:
        if s not in adj:
            raise StructureError(f"unknown source vertex {s!r}")
        if s not in seen:
            seen.add(s)
            queue.append(s)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)
