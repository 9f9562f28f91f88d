"""Command-line entry point: ``gstree <subcommand>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import format_search_tree, format_topology, parse_search_tree, parse_topology
from .generators import SEQ_KINDS, TREE_SHAPES, format_sequence, gen_seq, gen_tree, parse_sequence
from .interleave import interleave_bound
from .machine import IllegalOp, replay
from .runner import ALGORITHMS, BACKENDS, RunConfig, run
from .steiner import centroid_decomposition, reference_tree
from .tango import TangoTree
from .verify import SUITES, verify


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read_topology(path: str):
    return parse_topology(Path(path).read_text())


def cmd_gen_tree(a) -> int:
    _emit(format_topology(gen_tree(a.shape, a.n, a.seed)), a.out)
    return 0


def cmd_gen_seq(a) -> int:
    g = _read_topology(a.tree)
    _emit(format_sequence(gen_seq(a.kind, g, a.m, a.seed)), a.out)
    return 0


def cmd_run(a) -> int:
    cfg = RunConfig(
        tree_file=a.tree,
        shape=a.shape,
        n=a.n,
        tree_seed=a.tree_seed,
        seq_file=a.seq,
        kind=a.kind,
        m=a.m,
        seq_seed=a.seq_seed,
        algorithm=a.algo,
        backend=a.backend,
        reset=a.reset,
        report=a.report,
        trace=a.trace,
        audit=a.audit,
    )
    rep = run(cfg)
    if a.report is None:
        sys.stdout.write(rep.to_json())
    return 0 if rep.audit in (None, "ok") else 1


def _reference(g, how: str):
    if how == "centroid":
        return centroid_decomposition(g)
    if how == "steiner":
        # the reference tree tango uses
        return reference_tree(g)
    return parse_search_tree(Path(how).read_text())


def cmd_lowerbound(a) -> int:
    g = _read_topology(a.tree)
    p = _reference(g, a.reference)
    x = parse_sequence(Path(a.seq).read_text())
    res = interleave_bound(g, p, x)
    out = res.to_dict()
    out["n"] = g.n
    out["m"] = len(x)
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", a.out)
    return 0


def cmd_verify(a) -> int:
    results = verify(a.suite, quick=not a.full)
    for r in results:
        print(r.line())
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_replay(a) -> int:
    g = _read_topology(a.tree)
    if a.initial == "tango":
        t0 = TangoTree(g, record_trace=False).initial_tree
    elif a.initial == "reference":
        t0 = reference_tree(g)
    else:
        t0 = parse_search_tree(Path(a.initial).read_text())
    try:
        rep, final = replay(g, t0, Path(a.trace).read_text(), reset=a.reset)
    except IllegalOp as exc:
        print(f"illegal op at entry {exc.index}: {exc}", file=sys.stderr)
        return 2
    out = {"schema": 1, "total_cost": rep.total, "searches": len(rep.per_search), "per_search": rep.per_search}
    print(json.dumps(out, sort_keys=True))
    if a.final is not None:
        Path(a.final).write_text(format_search_tree(final))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gstree", description="Search trees on trees: tango, lower bounds, oracles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-tree", help="write an edge-list tree")
    p.add_argument("--shape", choices=TREE_SHAPES, default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_tree)

    p = sub.add_parser("gen-seq", help="write an access sequence for a tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--kind", choices=SEQ_KINDS, default="uniform")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_seq)

    p = sub.add_parser("run", help="run one algorithm and emit a JSON report")
    p.add_argument("--tree", help="edge-list file (else generated)")
    p.add_argument("--shape", choices=TREE_SHAPES, default="random")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--tree-seed", type=int, default=0)
    p.add_argument("--seq", help="sequence file (else generated)")
    p.add_argument("--kind", choices=SEQ_KINDS, default="uniform")
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--seq-seed", type=int, default=0)
    p.add_argument("--algo", choices=ALGORITHMS, default="tango")
    p.add_argument("--backend", choices=BACKENDS, default="fast")
    p.add_argument("--reset", choices=("free", "paid"), default="free")
    p.add_argument("--report")
    p.add_argument("--trace")
    p.add_argument("--audit", action="store_true", help="audit after every search (python backend)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("lowerbound", help="interleave bound of a sequence")
    p.add_argument("--tree", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--reference", default="steiner", help="steiner | centroid | FILE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", nargs="?", choices=SUITES + ("all",), default="all")
    p.add_argument("--full", action="store_true", help="full-size matrices instead of the quick ones")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-execute a trace and report its cost")
    p.add_argument("--tree", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--initial", default="tango", help="tango | reference | FILE")
    p.add_argument("--reset", choices=("free", "paid"), default="free")
    p.add_argument("--final", help="write the final search tree here")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.func(a)
    except (ValueError, OSError) as exc:
        print(f"gstree: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
