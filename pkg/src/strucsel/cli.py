"""Command line interface: ``strucsel <command> ...``.

Exit status is 0 on success, 1 when a verification verdict is ``fail`` and
2 on unreadable or invalid input.  ``--json`` prints one result document
with sorted keys; apart from ``wall_time_s`` it is a pure function of the
command line and the input bytes.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__, io
from .digraph import StructureError, SystemStructure
from .selection import (
    AssignabilityReport,
    DesignError,
    assignability,
    enumerate_input_designs,
    enumerate_mix_pairings,
    solve_p1,
    solve_p1d,
    solve_p2_detailed,
)
from .verify import (
    VerificationReport,
    has_no_sfm,
    is_structurally_controllable,
    is_structurally_observable,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _edges(es) -> List[List[int]]:
    return [list(e) for e in sorted(es)]


def _read(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _load(path: str, fmt: str) -> Tuple[SystemStructure, str]:
    data = _read(path)
    try:
        s = io.parse_system(data, fmt)
    except (io.ParseError, StructureError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return s, hashlib.sha256(data).hexdigest()


def _report(rep: AssignabilityReport, suffix: str = "") -> Dict[str, Any]:
    return {f"m{suffix}": rep.m, f"beta{suffix}": rep.beta, f"alpha{suffix}": rep.alpha, f"p{suffix}": rep.p}


def _config(rep: AssignabilityReport) -> Dict[str, Any]:
    a_u_c = sorted(rep.scc.components[c][0] for c in rep.non_assigned)
    return {
        "states": sorted(set(rep.u_r_star) | set(a_u_c)),
        "unmatched": sorted(rep.u_r_star),
        "scc_representatives": a_u_c,
    }


def _verdict(r: VerificationReport) -> Dict[str, Any]:
    return {"verdict": r.verdict, "witness": dict(r.witness)}


def _design(s: SystemStructure) -> Dict[str, Any]:
    return {
        "b_edges": _edges(s.input_edges),
        "c_edges": _edges(s.output_edges),
        "k_edges": _edges(s.feedback_edges),
        "b_nnz": s.b_nnz,
        "c_nnz": s.c_nnz,
        "k_nnz": s.k_nnz,
        "effective_inputs": len(s.effective_inputs),
        "effective_outputs": len(s.effective_outputs),
    }


# -- commands -------------------------------------------------------------


def cmd_analyze(s: SystemStructure, args) -> Tuple[Dict[str, Any], int]:
    g = s.plant
    rep = assignability(g)
    dual = assignability(g.transpose())
    doc = {"n": g.n, "a_nnz": len(g.edges), "scc_count": len(rep.scc.components)}
    doc.update(_report(rep))
    doc.update(_report(dual, "_dual"))
    doc["input_config"] = _config(rep)
    doc["output_config"] = _config(dual)
    return doc, EXIT_OK


def _select(s: SystemStructure, args, dual: bool) -> Tuple[Dict[str, Any], int]:
    g = s.plant.transpose() if dual else s.plant
    rep = assignability(g)
    doc = dict(_report(rep))
    doc["config"] = _config(rep)
    if args.limit is not None:
        designs = []
        for d in enumerate_input_designs(g, minimal=args.minimal, limit=args.limit):
            edges = d.b_edges if not dual else frozenset((x, y) for y, x in d.b_edges)
            designs.append(_edges(edges))
        doc["designs"] = designs
    return doc, EXIT_OK


def cmd_select_inputs(s, args):
    return _select(s, args, dual=False)


def cmd_select_outputs(s, args):
    return _select(s, args, dual=True)


def cmd_solve(s: SystemStructure, args) -> Tuple[Dict[str, Any], int]:
    g = s.plant
    doc: Dict[str, Any] = {"problem": args.problem}
    if args.problem == "p1d":
        out = solve_p1d(g)
    elif args.problem == "p1":
        sol = solve_p1(g, minimal=args.minimal)
        out = sol.system(g)
        doc["gamma"], doc["gamma_dual"] = sol.gamma, sol.gamma_dual
        doc["minimal"] = bool(args.minimal)
    else:
        p2 = solve_p2_detailed(g)
        out = p2.system
        doc["common_matching"] = _edges(p2.common.edges)
        doc["io_matching"] = _edges(p2.io_matching.edges)
        doc["partition"] = [_edges(grp) for grp in p2.pattern.partition]
        if args.limit is not None:
            doc["mix_pairings"] = [
                _edges(k.k_edges) for k in enumerate_mix_pairings(out.without_feedback(), limit=args.limit)
            ]
    doc.update(_design(out))
    checks = {
        "controllable": is_structurally_controllable(out),
        "observable": is_structurally_observable(out),
    }
    if args.problem == "p2":
        checks["sfm_free"] = has_no_sfm(out)
    doc["verification"] = {k: _verdict(v) for k, v in checks.items()}
    return doc, EXIT_OK if all(v.passed for v in checks.values()) else EXIT_FAIL


_CHECKS: Dict[str, Callable[[SystemStructure], VerificationReport]] = {
    "controllable": is_structurally_controllable,
    "observable": is_structurally_observable,
    "sfm-free": has_no_sfm,
}


def cmd_verify(s: SystemStructure, args) -> Tuple[Dict[str, Any], int]:
    r = _CHECKS[args.property](s)
    doc = {"property": args.property}
    doc.update(_verdict(r))
    return doc, EXIT_OK if r.passed else EXIT_FAIL


def cmd_export_dot(s: SystemStructure, args) -> Tuple[Dict[str, Any], int]:
    g = s.plant
    if args.annotate == "matching":
        text = io.export_dot(s, assignability(g).witness_matching)
    elif args.annotate == "p1":
        text = io.export_dot(s, solve_p1(g, minimal=args.minimal))
    elif args.annotate == "p2":
        text = io.export_dot(solve_p2_detailed(g).system)
    else:
        text = io.export_dot(s)
    return {"dot": text}, EXIT_OK


FILE_COMMANDS = {
    "analyze": cmd_analyze,
    "select-inputs": cmd_select_inputs,
    "select-outputs": cmd_select_outputs,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "export-dot": cmd_export_dot,
}


def _run_file_command(name: str, path: str, args) -> Tuple[Dict[str, Any], int]:
    s, digest = _load(path, args.format)
    start = time.perf_counter()
    try:
        doc, code = FILE_COMMANDS[name](s, args)
    except DesignError as exc:
        raise InputError(f"{path}: {exc}") from None
    doc["command"] = name
    doc["input_sha256"] = digest
    doc["wall_time_s"] = round(time.perf_counter() - start, 6)
    return doc, code


def _batch_item(item: Tuple[str, str, argparse.Namespace]) -> Tuple[Dict[str, Any], int]:
    name, path, args = item
    try:
        doc, code = _run_file_command(name, path, args)
    except InputError as exc:
        return {"error": str(exc)}, EXIT_INPUT
    doc["path"] = path
    return doc, code


# -- output ---------------------------------------------------------------


def _emit_json(doc: Dict[str, Any], out) -> None:
    out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _emit_text(doc: Dict[str, Any], out) -> None:
    if "dot" in doc:
        out.write(doc["dot"])
        return
    width = max(len(k) for k in doc)
    for key in sorted(doc):
        if key in ("input_sha256", "wall_time_s"):
            continue
        val = doc[key]
        text = json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else str(val)
        out.write(f"{key.ljust(width)}  {text}\n")


# -- argument parsing -----------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="print one JSON result document")
    p.add_argument("--seed", type=int, default=d(0), help="PRNG seed (unsigned 64-bit)")
    p.add_argument("--limit", type=int, default=d(None), help="cap on enumerated solutions")
    p.add_argument("--minimal", action="store_true", default=d(False), help="fewest effective inputs/outputs")
    p.add_argument(
        "--format", choices=("auto", "json", "edgelist"), default=d("auto"), help="input or output file format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strucsel", description="Sparsest input, output and feedback structure selection."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        return p

    add("analyze", "matching quantities and minimal dedicated configurations").add_argument("file")
    add("select-inputs", "minimal dedicated input configuration").add_argument("file")
    add("select-outputs", "minimal dedicated output configuration").add_argument("file")
    p = add("solve", "solve a design problem")
    p.add_argument("problem", choices=("p1d", "p1", "p2"))
    p.add_argument("file")
    p = add("verify", "check a structural property of a system file")
    p.add_argument("property", choices=tuple(_CHECKS))
    p.add_argument("file")
    p = add("gen", "random plant")
    p.add_argument("n", type=int)
    p.add_argument("density", type=float)
    p = add("export-dot", "Graphviz DOT of a system")
    p.add_argument("file")
    p.add_argument("--annotate", choices=("none", "matching", "p1", "p2"), default="none")
    p = add("batch", "run one command over several files concurrently")
    p.add_argument("--command", dest="batch_command", choices=("analyze", "select-inputs", "select-outputs"),
                   default="analyze")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("files", nargs="+")
    return parser


def _gen(args, out) -> int:
    if args.seed < 0 or args.seed >= 2**64:
        raise InputError(f"seed must be an unsigned 64-bit integer, got {args.seed}")
    try:
        g = io.gen_random(args.n, args.density, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    fmt = "json" if args.format == "auto" else args.format
    if g.n == 0 and fmt == "edgelist":
        raise InputError("n must be at least 1")
    out.write(io.serialize_system(SystemStructure(g), fmt).decode("ascii"))
    return EXIT_OK


def _batch(args, out) -> int:
    items = [(args.batch_command, f, args) for f in args.files]
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(_batch_item, items))
    doc = {"command": "batch", "results": [d for d, _ in results]}
    if args.json:
        _emit_json(doc, out)
    else:
        for d, _ in results:
            _emit_text(d, out)
            out.write("\n")
    return max(code for _, code in results)


def run_cli(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.limit is not None and args.limit < 0:
        stderr.write("strucsel: --limit must be non-negative\n")
        return EXIT_INPUT
    try:
        if args.command == "gen":
            return _gen(args, stdout)
        if args.command == "batch":
            return _batch(args, stdout)
        doc, code = _run_file_command(args.command, args.file, args)
    except InputError as exc:
        stderr.write(f"strucsel: {exc}\n")
        return EXIT_INPUT
    if args.json:
        _emit_json(doc, stdout)
    else:
        _emit_text(doc, stdout)
    return code


def main() -> None:
    raise SystemExit(run_cli())
