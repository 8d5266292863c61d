"""Reading and writing systems, DOT export and seeded random plants.

Two formats are understood.

Edge list (plant only)::

    n 3
    1 2
    2 3

ASCII, first line ``n <N>``, then one ``src dst`` pair per line meaning
``x_src -> x_dst`` (``A[dst][src] != 0``), LF line endings and no trailing
whitespace.

JSON (full system)::

    {"n": 3, "a_edges": [[1, 2], [2, 3]], "b_edges": [[1, 1]],
     "c_edges": [[3, 1]], "k_edges": [[1, 1]]}

``b_edges`` are ``[input, state]``, ``c_edges`` ``[state, output]`` and
``k_edges`` ``[output, input]``.  Besides those keys only a free-form
``comments`` entry (string or list of strings) is accepted.
"""
from __future__ import annotations

import json
import random
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .bipartite import Matching
from .digraph import StructuralDigraph, SystemStructure
from .selection import DesignSolution

EDGE_KEYS = ("a_edges", "b_edges", "c_edges", "k_edges")
JSON_KEYS = ("n",) + EDGE_KEYS
COMMENT_KEY = "comments"


class ParseError(ValueError):
    """Malformed system file; ``line`` or ``field`` locate the problem."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        where = f"line {line}: " if line is not None else f"{field}: " if field else ""
        super().__init__(where + message)
        self.line = line
        self.field = field


def _as_text(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"non-ASCII byte at offset {exc.start}") from None


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _check_n(n: Any, **where) -> int:
    if not _is_int(n):
        raise ParseError(f"state count must be an integer, got {n!r}", **where)
    if n < 1:
        raise ParseError(f"state count must be at least 1, got {n}", **where)
    return n


def _parse_edgelist(text: str) -> SystemStructure:
    if not text:
        raise ParseError("empty input", line=1)
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    header = lines[0]
    parts = header.split(" ")
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise ParseError(f"expected header 'n <count>', got {header!r}", line=1)
    n = _check_n(int(parts[1]), line=1)
    edges = set()
    for no, raw in enumerate(lines[1:], start=2):
        if raw != raw.rstrip() or raw != raw.lstrip():
            raise ParseError("leading or trailing whitespace", line=no)
        fields = raw.split(" ")
        if len(fields) != 2 or not all(f.isdigit() for f in fields):
            raise ParseError(f"expected 'src dst', got {raw!r}", line=no)
        src, dst = int(fields[0]), int(fields[1])
        for v in (src, dst):
            if not 1 <= v <= n:
                raise ParseError(f"state id {v} outside 1..{n}", line=no)
        if (src, dst) in edges:
            raise ParseError(f"duplicate edge {src} {dst}", line=no)
        edges.add((src, dst))
    return SystemStructure(StructuralDigraph(n, frozenset(edges)))


def _edge_list(doc: Dict[str, Any], key: str) -> List[Tuple[int, int]]:
    raw = doc.get(key, [])
    if not isinstance(raw, list):
        raise ParseError("must be an array of [int, int] pairs", field=key)
    seen = set()
    out = []
    for i, e in enumerate(raw):
        where = f"{key}[{i}]"
        if not (isinstance(e, list) and len(e) == 2 and all(_is_int(v) for v in e)):
            raise ParseError(f"expected a pair of integers, got {e!r}", field=where)
        pair = (e[0], e[1])
        if min(pair) < 1:
            raise ParseError(f"ids must be positive, got {e!r}", field=where)
        if pair in seen:
            raise ParseError(f"duplicate edge {e!r}", field=where)
        seen.add(pair)
        out.append(pair)
    return out


def _parse_json(text: str) -> SystemStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", field="$")
    unknown = sorted(set(doc) - set(JSON_KEYS) - {COMMENT_KEY})
    if unknown:
        raise ParseError(f"unknown key(s) {', '.join(unknown)}", field=unknown[0])
    if "n" not in doc:
        raise ParseError("missing", field="n")
    if "a_edges" not in doc:
        raise ParseError("missing", field="a_edges")
    comments = doc.get(COMMENT_KEY)
    if comments is not None and not (
        isinstance(comments, str) or (isinstance(comments, list) and all(isinstance(c, str) for c in comments))
    ):
        raise ParseError("must be a string or an array of strings", field=COMMENT_KEY)
    n = _check_n(doc["n"], field="n")
    a, b, c, k = (_edge_list(doc, key) for key in EDGE_KEYS)

    def in_range(pairs, pos, key):
        for i, e in enumerate(pairs):
            for j in pos:
                if e[j] > n:
                    raise ParseError(f"state id {e[j]} outside 1..{n}", field=f"{key}[{i}]")

    in_range(a, (0, 1), "a_edges")
    in_range(b, (1,), "b_edges")
    in_range(c, (0,), "c_edges")
    return SystemStructure(StructuralDigraph(n, frozenset(a)), frozenset(b), frozenset(c), frozenset(k))


def detect_format(data: Union[bytes, str]) -> str:
    head = data.lstrip()[:1]
    return "json" if head in ("{", b"{") else "edgelist"


def parse_system(data: Union[bytes, str], format: str = "auto") -> SystemStructure:
    """Parse a system from ``json`` or ``edgelist`` text (``auto`` sniffs it)."""
    if format == "auto":
        format = detect_format(data)
    text = _as_text(data)
    if format == "json":
        return _parse_json(text)
    if format == "edgelist":
        return _parse_edgelist(text)
    raise ValueError(f"unknown format {format!r}")


def _pairs(edges) -> str:
    return "[" + ", ".join(f"[{a}, {b}]" for a, b in sorted(edges)) + "]"


def serialize_system(s: SystemStructure, format: str = "json", comments: Optional[Sequence[str]] = None) -> bytes:
    """Canonical bytes for ``s``; edges are sorted so equal systems serialize equally."""
    if format == "edgelist":
        if s.input_edges or s.output_edges or s.feedback_edges or comments:
            raise ValueError("the edge-list format holds the plant only")
        lines = [f"n {s.n}"] + [f"{a} {b}" for a, b in s.plant.sorted_edges()]
        return ("\n".join(lines) + "\n").encode("ascii")
    if format != "json":
        raise ValueError(f"unknown format {format!r}")
    body = [f'  "n": {s.n}']
    for key, edges in zip(EDGE_KEYS, (s.plant.edges, s.input_edges, s.output_edges, s.feedback_edges)):
        body.append(f'  "{key}": {_pairs(edges)}')
    if comments:
        body.append(f'  "{COMMENT_KEY}": {json.dumps(list(comments))}')
    return ("{\n" + ",\n".join(body) + "\n}\n").encode("ascii")


def export_dot(s: SystemStructure, annotations: Optional[Union[Matching, DesignSolution]] = None) -> str:
    """DOT text for the closed-loop digraph.

    Plant edges are black, matched edges blue, input edges green, output
    edges red and feedback edges gray.  A :class:`DesignSolution` adds its
    input and output edges; a :class:`Matching` of the state bipartite graph
    colours its edges.
    """
    matched = frozenset()
    if isinstance(annotations, DesignSolution):
        s = SystemStructure(
            s.plant, s.input_edges | annotations.b_edges, s.output_edges | annotations.c_edges, s.feedback_edges
        )
    elif isinstance(annotations, Matching):
        matched = annotations.edges
    elif annotations is not None:
        raise TypeError(f"cannot annotate with {type(annotations).__name__}")

    out = ["digraph system {", "  rankdir=LR;"]
    for tag, i in s.vertices():
        shape = "circle" if tag == "x" else "box"
        out.append(f'  {tag}{i} [label="{tag}{i}", shape={shape}];')
    for a, b in s.plant.sorted_edges():
        color = "blue" if (a, b) in matched else "black"
        out.append(f"  x{a} -> x{b} [class=state, color={color}];")
    for u, x in sorted(s.input_edges):
        out.append(f"  u{u} -> x{x} [class=input, color=green];")
    for x, y in sorted(s.output_edges):
        out.append(f"  x{x} -> y{y} [class=output, color=red];")
    for y, u in sorted(s.feedback_edges):
        out.append(f"  y{y} -> u{u} [class=feedback, color=gray];")
    out.append("}")
    return "\n".join(out) + "\n"


def gen_random(n: int, density: float, seed: int) -> StructuralDigraph:
    """Erdos-Renyi style plant including self-loops.

    Uses Python's Mersenne Twister (``random.Random(seed)``) and visits the
    ordered pairs ``(src, dst)`` in ascending order, drawing one
    ``random()`` per pair; the edge is kept when the draw is below
    ``density``.
    """
    if not _is_int(n) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density!r}")
    rng = random.Random(seed)
    edges = frozenset(
        (src, dst) for src in range(1, n + 1) for dst in range(1, n + 1) if rng.random() < density
    )
    return StructuralDigraph(n, edges)
