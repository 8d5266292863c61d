"""Bipartite graphs and matchings.

Only the contracted properties of a returned maximum matching (its size and
its unmatched vertex sets) are meaningful to callers; the particular edge set
is deterministic for a fixed input but otherwise unspecified.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .digraph import StructuralDigraph, StructureError

BEdge = Tuple[Hashable, Hashable]


class MatchingError(ValueError):
    """Raised when an argument is not a (maximum) matching of the given graph."""


@dataclass(frozen=True)
class BipartiteGraph:
    left: Tuple[Hashable, ...]
    right: Tuple[Hashable, ...]
    edges: FrozenSet[BEdge] = field(default_factory=frozenset)
    weights: Optional[Mapping[BEdge, int]] = None

    def __post_init__(self) -> None:
        left, right = tuple(self.left), tuple(self.right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        edges = frozenset(self.edges)
        object.__setattr__(self, "edges", edges)
        ls, rs = set(left), set(right)
        if len(ls) != len(left) or len(rs) != len(right):
            raise StructureError("duplicate vertex on one side of a bipartite graph")
        for l, r in edges:
            if l not in ls or r not in rs:
                raise StructureError(f"bipartite edge {(l, r)!r} has an endpoint outside its side")
        if self.weights is not None:
            for e, w in self.weights.items():
                if e not in edges:
                    raise StructureError(f"weight given for non-edge {e!r}")
                if not isinstance(w, (int, np.integer)) or w < 0:
                    raise StructureError(f"weight of {e!r} must be a non-negative integer")
            missing = edges - set(self.weights)
            if missing:
                raise StructureError(f"edges without weight: {sorted(missing)[:3]!r}")

    @cached_property
    def adjacency(self) -> Dict[Hashable, Tuple[Hashable, ...]]:
        adj: Dict[Hashable, List[Hashable]] = {l: [] for l in self.left}
        for l, r in self.edges:
            adj[l].append(r)
        order = {r: i for i, r in enumerate(self.right)}
        return {l: tuple(sorted(rs, key=order.__getitem__)) for l, rs in adj.items()}

    def weight(self, e: BEdge) -> int:
        return 1 if self.weights is None else int(self.weights[e])


@dataclass(frozen=True)
class Matching:
    """A set of bipartite edges sharing no vertex, with the sides it lives on."""

    edges: FrozenSet[BEdge]
    left: Tuple[Hashable, ...]
    right: Tuple[Hashable, ...]

    def __post_init__(self) -> None:
        edges = frozenset(self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        ls = [l for l, _ in edges]
        rs = [r for _, r in edges]
        if len(set(ls)) != len(ls) or len(set(rs)) != len(rs):
            raise MatchingError("edges of a matching must not share vertices")

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def mate_of_left(self) -> Dict[Hashable, Hashable]:
        return {l: r for l, r in self.edges}

    @cached_property
    def mate_of_right(self) -> Dict[Hashable, Hashable]:
        return {r: l for l, r in self.edges}

    @property
    def right_unmatched(self) -> FrozenSet[Hashable]:
        m = self.mate_of_right
        return frozenset(r for r in self.right if r not in m)

    @property
    def left_unmatched(self) -> FrozenSet[Hashable]:
        m = self.mate_of_left
        return frozenset(l for l in self.left if l not in m)

    def sorted_edges(self) -> List[BEdge]:
        return sorted(self.edges)

    def cost(self, b: BipartiteGraph) -> int:
        return sum(b.weight(e) for e in self.edges)

    def transpose(self) -> "Matching":
        """Same matching seen on the reversed digraph (sides swapped)."""
        return Matching(frozenset((r, l) for l, r in self.edges), self.right, self.left)


def state_bipartite(g: StructuralDigraph) -> BipartiteGraph:
    """Bipartite copy of the state digraph: left and right are both ``1..n``."""
    states = tuple(g.states)
    return BipartiteGraph(states, states, g.edges)


def check_matching(b: BipartiteGraph, m: Matching) -> None:
    if not m.edges <= b.edges:
        extra = sorted(m.edges - b.edges)[:3]
        raise MatchingError(f"matching uses edges not in the graph: {extra!r}")
    if set(m.left) != set(b.left) or set(m.right) != set(b.right):
        raise MatchingError("matching is declared over different vertex sides than the graph")


def maximum_matching(b: BipartiteGraph) -> Matching:
    """Hopcroft-Karp on the unweighted view of ``b``.

    Free left vertices and adjacency lists are scanned in declared order, so
    the result is a deterministic function of ``b``.
    """
    adj = b.adjacency
    mate_l: Dict[Hashable, Hashable] = {}
    mate_r: Dict[Hashable, Hashable] = {}
    # greedy warm start
    for l in b.left:
        for r in adj[l]:
            if r not in mate_r:
                mate_l[l] = r
                mate_r[r] = l
                break

    inf = float("inf")
    while True:
        dist: Dict[Hashable, float] = {}
        queue = deque()
        for l in b.left:
            if l not in mate_l:
                dist[l] = 0
                queue.append(l)
        found = inf
        while queue:
            l = queue.popleft()
            if dist[l] >= found:
                continue
            for r in adj[l]:
                nl = mate_r.get(r)
                if nl is None:
                    if found == inf:
                        found = dist[l] + 1
                elif nl not in dist:
                    dist[nl] = dist[l] + 1
                    queue.append(nl)
        if found == inf:
            break

        augmented = False
        for root in b.left:
            if root in mate_l:
                continue
            # iterative DFS along the BFS layers
            stack = [root]
            iters = {root: iter(adj[root])}
            chosen: List[Hashable] = []
            success = False
            while stack and not success:
                l = stack[-1]
                advanced = False
                for r in iters[l]:
                    nl = mate_r.get(r)
                    if nl is None:
                        if dist[l] + 1 == found:
                            chosen.append(r)
                            success = True
                            break
                    elif dist.get(nl, inf) == dist[l] + 1:
                        chosen.append(r)
                        stack.append(nl)
                        iters[nl] = iter(adj[nl])
                        advanced = True
                        break
                if not success and not advanced:
                    dist[l] = inf
                    stack.pop()
                    if chosen:
                        chosen.pop()
            if success:
                for l, r in zip(stack, chosen):
                    mate_l[l] = r
                    mate_r[r] = l
                    dist[l] = inf
                augmented = True
        if not augmented:
            break
    return Matching(frozenset(mate_l.items()), b.left, b.right)


def min_cost_max_matching(b: BipartiteGraph) -> Matching:
    """Minimum total weight among all maximum-cardinality matchings of ``b``.

    Every real edge of weight ``w`` gets cost ``w - W`` with
    ``W = 1 + sum(weights)``, non-edges cost ``0`` and are discarded from the
    assignment afterwards; one more matched edge therefore always outweighs
    any weight difference.
    """
    if not b.edges:
        return Matching(frozenset(), b.left, b.right)
    li = {l: i for i, l in enumerate(b.left)}
    ri = {r: j for j, r in enumerate(b.right)}
    total = sum(b.weight(e) for e in b.edges)
    big = 1 + total
    if big * max(len(b.left), len(b.right)) >= 2**52:
        raise OverflowError("weights too large for exact float64 assignment")
    cost = np.zeros((len(b.left), len(b.right)), dtype=np.float64)
    for e in b.edges:
        cost[li[e[0]], ri[e[1]]] = b.weight(e) - big
    rows, cols = linear_sum_assignment(cost)
    chosen = frozenset(
        (b.left[i], b.right[j]) for i, j in zip(rows.tolist(), cols.tolist()) if cost[i, j] < 0
    )
    return Matching(chosen, b.left, b.right)


@dataclass(frozen=True)
class MatchingDecomposition:
    """Spanning decomposition of the state digraph into stems and cycles.

    Stems run from their root (right-unmatched) to their tip (left-unmatched);
    an isolated vertex is a one-vertex stem.  Cycles start at their smallest
    vertex.
    """

    stems: Tuple[Tuple[int, ...], ...]
    cycles: Tuple[Tuple[int, ...], ...]


def matching_decomposition(g: StructuralDigraph, m: Matching) -> MatchingDecomposition:
    check_matching(state_bipartite(g), m)
    nxt = m.mate_of_left
    prev = m.mate_of_right
    seen = set()
    stems = []
    for root in g.states:
        if root in prev:
            continue
        stem = [root]
        seen.add(root)
        v = root
        while v in nxt:
            v = nxt[v]
            stem.append(v)
            seen.add(v)
        stems.append(tuple(stem))
    cycles = []
    for start in g.states:
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = nxt[start]
        while v != start:
            cyc.append(v)
            seen.add(v)
            v = nxt[v]
        cycles.append(tuple(cyc))
    return MatchingDecomposition(tuple(stems), tuple(cycles))


def _check_maximum(b: BipartiteGraph, m: Matching, name: str) -> None:
    try:
        check_matching(b, m)
    except MatchingError as exc:
        raise MatchingError(f"{name}: {exc}") from None
    if len(m) != len(maximum_matching(b)):
        raise MatchingError(f"{name} is not a maximum matching")


def common_matching(b: BipartiteGraph, m1: Matching, m2: Matching) -> Matching:
    """Maximum matching with the right-unmatched set of ``m1`` and the
    left-unmatched set of ``m2``.

    Components of ``m1 ^ m2`` that are alternating paths with both ends on
    the left side are flipped from ``m1`` to ``m2``; everything else keeps the
    ``m1`` edges.  Paths are traced from the left vertices free in ``m1`` in
    ascending order.
    """
    _check_maximum(b, m1, "m1")
    _check_maximum(b, m2, "m2")
    m1_l, m1_r = m1.mate_of_left, m1.mate_of_right
    m2_l = m2.mate_of_left
    edges = set(m1.edges)
    for start in sorted(m1.left_unmatched - m2.left_unmatched):
        # start is free in m1 and matched in m2: walk m2, m1, m2, ... edges
        l = start
        path_m1, path_m2 = [], []
        while l in m2_l:
            r = m2_l[l]
            path_m2.append((l, r))
            nl = m1_r.get(r)
            if nl is None:
                raise MatchingError("augmenting path found; inputs are not both maximum")
            path_m1.append((nl, r))
            l = nl
        edges.difference_update(path_m1)
        edges.update(path_m2)
    return Matching(frozenset(edges), b.left, b.right)
