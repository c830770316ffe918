"""Command-line entry point: ``forestdecomp <command> ...``.

Every JSON artifact is wrapped as ``{"header": {...}, "result": {...}}``;
the header records the command, its parameters, the seed and the package
version, and contains nothing run-dependent, so identical invocations give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .chains import forest_chain_parameters, k_chain_forest
from .connectivity import global_min_cut, pack_spanning_trees
from .counterexample import assemble_counterexample, build_blowup, certify_obstruction, residue_profile
from .decomposition import decomposition_from_json, decomposition_to_json, verify
from .formats import ParseError, graph_to_json, load_forest, load_graph, to_text
from .generators import GeneratorError, gen_host
from .graph import GraphError, minus
from .peeling import peel
from .pipeline import BudgetExceeded, ExactCore, Infeasible, PipelineConfig, PipelineError, decompose_forest
from .sparse_trees import (
    PreconditionError,
    balanced_strong_orientation,
    halving_spanning_tree,
    satisfies_power_bound,
    split_core_rest,
)

EXIT_OK = 0
EXIT_ERROR = 1  # I/O, parse or internal errors
EXIT_USAGE = 2  # argparse's own code
EXIT_INVALID = 3  # verification rejected the input
EXIT_INFEASIBLE = 4  # proved impossible
EXIT_BUDGET = 5  # search gave up, outcome unknown
EXIT_PRECONDITION = 6  # inputs outside an operation's domain


class Outcome(Exception):
    def __init__(self, code: int, message: str, result=None):
        super().__init__(message)
        self.code = code
        self.result = result


def _header(args) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "out", "format")}
    return {"tool": "forestdecomp", "version": __version__, "command": args.command, "params": params, "seed": getattr(args, "seed", None)}


def _emit(args, result) -> None:
    text = json.dumps({"header": _header(args), "result": result}, indent=2, sort_keys=True) + "\n"
    _write(args, text)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ commands


def cmd_mincut(args):
    g = load_graph(args.host)
    cut = global_min_cut(g)
    return {"order": cut.order, "side_a": sorted(cut.side_a), "side_b": sorted(cut.side_b), "crossing": sorted(cut.crossing)}


def cmd_pack(args):
    g = load_graph(args.host)
    pack = pack_spanning_trees(g, args.k)
    if not pack.feasible:
        raise Outcome(
            EXIT_INFEASIBLE,
            f"no {args.k} edge-disjoint spanning trees",
            {"trees": None, "certificate": [sorted(c) for c in pack.certificate]},
        )
    return {"trees": pack.to_json()}


def cmd_orient(args):
    o = balanced_strong_orientation(load_graph(args.host))
    return {"arcs": [list(a) for a in o.arcs], "balanced": o.is_balanced(), "strongly_connected": o.is_strongly_connected()}


def cmd_sparse_tree(args):
    g = minus(load_graph(args.host))
    tree = halving_spanning_tree(g, args.p)
    return {"p": args.p, "tree": sorted(tree), "bound_holds": satisfies_power_bound(g, tree, args.p)}


def cmd_split(args):
    g = load_graph(args.host)
    s = split_core_rest(g, args.k0, args.delta0, strict=not args.lenient)
    return {"core": sorted(s.core), "rest": sorted(s.rest), "k0": s.k0, "delta0": s.delta0, "rest_min_degree": min(s.rest_degrees(g))}


def cmd_peel(args):
    return peel(load_graph(args.host), args.k).to_json()


def cmd_chain(args):
    ct = k_chain_forest(load_forest(args.forest), args.k)
    return {
        "tree": {"vertices": ct.tree.vertex_count, "edges": [list(e) for e in ct.tree.edges]},
        "parts": [sorted(p) for p in ct.parts],
        "kinds": list(ct.kinds),
        "groups": [list(g) for g in ct.groups],
    }


def cmd_forest_params(args):
    p = forest_chain_parameters(load_forest(args.forest), minimal=args.minimal)
    return p.summary() | {"counts_t1": list(p.counts1), "counts_t2": list(p.counts2)}


def cmd_decompose(args):
    g = load_graph(args.host)
    f = load_forest(args.forest)
    cfg = PipelineConfig(k=args.k, delta=args.delta, core=ExactCore(budget=args.budget, seed=args.seed))
    report: dict = {}
    try:
        d = decompose_forest(g, f, minimal=args.minimal, config=cfg, report=report)
    except BudgetExceeded as exc:
        raise Outcome(EXIT_BUDGET, str(exc), {"stage": exc.stage, "snapshot": exc.snapshot, "report": report})
    except Infeasible as exc:
        raise Outcome(EXIT_INFEASIBLE, str(exc), {"stage": exc.stage, "snapshot": exc.snapshot, "report": report})
    except PipelineError as exc:
        raise Outcome(EXIT_ERROR, str(exc), {"stage": exc.stage, "snapshot": exc.snapshot, "report": report})
    return {"decomposition": decomposition_to_json(d), "report": report}


def _find_parts(obj):
    if isinstance(obj, dict):
        if "parts" in obj:
            return obj
        for key in ("result", "decomposition"):
            if key in obj:
                found = _find_parts(obj[key])
                if found is not None:
                    return found
    return None


def cmd_verify(args):
    g = load_graph(args.host)
    try:
        obj = json.loads(Path(args.decomposition).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, args.decomposition) from None
    body = _find_parts(obj)
    if body is None:
        raise ParseError("no 'parts' list found", None, args.decomposition)
    try:
        d = decomposition_from_json(g, body)
    except (KeyError, TypeError, ValueError) as exc:
        raise Outcome(EXIT_INVALID, f"malformed decomposition: {exc}", {"valid": False, "message": str(exc)})
    verdict = verify(d)
    result = {"valid": verdict.ok, "message": verdict.message, "part": verdict.part, "parts": len(d.parts)}
    if not verdict:
        raise Outcome(EXIT_INVALID, verdict.message, result)
    return result


def cmd_counterexample(args):
    profile = residue_profile(args.k, args.f3)
    result = {"profile": profile.to_json()}
    if profile.missing is None:
        raise Outcome(EXIT_PRECONDITION, f"every residue is attainable at k={args.k}; no certificate", result)
    n = profile.n_k
    m = profile.missing
    b1 = build_blowup(args.f3, args.k, args.t, m)
    b2 = build_blowup(args.f3, args.k, args.t, (n - args.f3 - m) % n)
    cx = assemble_counterexample(b1.graph, b1.S, b2.graph, b2.S, args.f3, args.k)
    report = certify_obstruction(profile, cx, args.search_budget)
    result.update(
        graph=graph_to_json(cx.graph),
        s1=list(cx.s1),
        s2=list(cx.s2),
        matching=list(cx.matching),
        g1=b1.meta,
        g2=b2.meta,
        certificate=report.to_json(),
    )
    if not report.issued:
        raise Outcome(EXIT_PRECONDITION, "a premise failed; no certificate", result)
    return result


def cmd_gen(args):
    params = {}
    for key in ("n", "delta", "p", "bridges", "modulus", "count", "size", "f3", "k", "t", "residue"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    if args.sizes:
        params["sizes"] = [int(x) for x in args.sizes.split(",")]
    if args.part_moduli:
        params["part_moduli"] = [int(x) if x not in ("", "-") else None for x in args.part_moduli.split(",")]
    try:
        g, meta = gen_host(args.kind, args.seed, **params)
    except KeyError as exc:
        raise Outcome(EXIT_PRECONDITION, f"generator kind {args.kind!r} needs --{exc.args[0].replace('_', '-')}")
    if args.format == "text":
        head = json.dumps(_header(args), sort_keys=True)
        _write(args, to_text(g, head))
        return None
    return {"graph": graph_to_json(g), "meta": meta}


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestdecomp", description="Graph decomposition into trees and forests.")
    p.add_argument("--version", action="version", version=f"forestdecomp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, host=True):
        sp = sub.add_parser(name, help=help_text)
        if host:
            sp.add_argument("--host", required=True, help="graph file (text or JSON)")
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    add("mincut", cmd_mincut, "global minimum cut")
    add("pack", cmd_pack, "k edge-disjoint spanning trees").add_argument("--k", type=int, required=True)
    add("orient", cmd_orient, "balanced strongly connected orientation")
    add("sparse-tree", cmd_sparse_tree, "spanning tree with halved degrees").add_argument("--p", type=int, default=1)
    sp = add("split", cmd_split, "connected core plus high-degree rest")
    sp.add_argument("--k0", type=int, required=True)
    sp.add_argument("--delta0", type=int, required=True)
    sp.add_argument("--lenient", action="store_true", help="only enforce the output invariants")
    add("peel", cmd_peel, "peel into highly connected parts").add_argument("--k", type=int, required=True)
    sp = add("chain", cmd_chain, "k-chain of a forest", host=False)
    sp.add_argument("--forest", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp = add("forest-params", cmd_forest_params, "chain trees for a coprime forest", host=False)
    sp.add_argument("--forest", required=True)
    sp.add_argument("--minimal", action="store_true")
    sp = add("decompose", cmd_decompose, "decompose a graph into copies of a coprime forest")
    sp.add_argument("--forest", required=True)
    sp.add_argument("--minimal", action="store_true")
    sp.add_argument("--budget", type=int, default=200_000)
    sp.add_argument("--k", type=int, default=3, help="peeling connectivity")
    sp.add_argument("--delta", type=int, default=0, help="required minimum degree")
    sp.add_argument("--seed", type=int, default=0)
    sp = add("verify", cmd_verify, "check a decomposition against its host")
    sp.add_argument("--decomposition", required=True)
    sp = add("counterexample", cmd_counterexample, "binary-tree counterexample with certificate", host=False)
    sp.add_argument("--f3", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--search-budget", type=int, default=None, help="also run the exact search (toy sizes)")
    sp = add("gen", cmd_gen, "generate a host graph", host=False)
    sp.add_argument("--kind", required=True, choices=["random-min-degree", "clustered", "blowup", "chain-host"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["text", "json"], default="json")
    for name, typ in (("n", int), ("delta", int), ("p", float), ("bridges", int), ("modulus", int), ("count", int),
                      ("size", int), ("f3", int), ("k", int), ("t", int), ("residue", int)):
        sp.add_argument(f"--{name}", type=typ)
    sp.add_argument("--sizes", help="comma-separated cluster sizes")
    sp.add_argument("--part-moduli", help="comma-separated per-cluster moduli ('-' for none)")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        if result is not None:
            _emit(args, result)
        return EXIT_OK
    except Outcome as exc:
        if exc.result is not None:
            _emit(args, exc.result | {"error": str(exc)})
        print(f"forestdecomp {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"forestdecomp {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PreconditionError as exc:
        print(f"forestdecomp {args.command}: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (GraphError, GeneratorError, ValueError) as exc:
        print(f"forestdecomp {args.command}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"forestdecomp {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
