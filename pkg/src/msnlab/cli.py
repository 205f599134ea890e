"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 budget exceeded.
With --json every command prints one object on stdout that validates
against schema.json shipped next to this module.
"""

from __future__ import annotations

import argparse
import gc
import json
import os
import random
import sys
import time
from pathlib import Path

from . import bounds, construct, dplen, msn, search
from .errors import BudgetExceeded, PreconditionError
from .graphs import S, T, DiGraph, GraphError, format_edge_list, parse_edge_list, random_tree_edges, sigma
from .msn import format_network, parse_network
from .reduce import (
    ReductionCertificate, check_certificate, dplen_path_certificate, flowout_lower_certificate, sqrt_path_certificate,
    thm51_lower_certificates, upper_graph_sequence,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SCHEMA_PATH = Path(__file__).with_name("schema.json")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str) -> DiGraph:
    return parse_edge_list(_read(path))


def _network(path: str) -> msn.SwitchingNetwork:
    return parse_network(_read(path))


def parse_universe(text: str | None, net: msn.SwitchingNetwork | None = None) -> set[str] | None:
    """An int pads the label vertices plus s, t with fresh names u1, u2, ...; a comma list is taken as is."""
    if text is None:
        return None
    base = (net.label_vertices() if net is not None else set()) | {S, T}
    if text.strip().isdigit():
        size = int(text)
        if size < len(base):
            raise UsageError(f"universe size {size} is smaller than the {len(base)} vertices the labels use")
        out = set(base)
        k = 1
        while len(out) < size:
            if f"u{k}" not in out:
                out.add(f"u{k}")
            k += 1
        return out
    names = {x.strip() for x in text.split(",") if x.strip()}
    return names | {S, T}


def threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("MSNLAB_THREADS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise UsageError(f"MSNLAB_THREADS must be an integer, got {env!r}") from None


# ---------------------------------------------------------------- commands
# each returns (exit code, report dict, human text)

def cmd_bounds(args):
    g = _graph(args.graph)
    out: dict = {}
    lines = []
    if args.theorem == "T5.4":
        fs = bounds.flowout_c(g)
        lower = bounds.profile("T5.4", fs)
        out.update(stats=fs.to_json(), lower=lower.to_json())
        lines.append(f"c = {fs.c}")
        lines.append(f"lower: {lower.render()}")
    else:
        st = bounds.compute_stats(g)
        lower, upper = bounds.profile("T5.1", st)
        out.update(stats=st.to_json(), lower=lower.to_json(), upper=upper.to_json())
        lines += [f"n = {st.n}, ell = {st.ell}, K = {st.k}", f"lower: {lower.render()}", f"upper: {upper.render()}"]
    return EXIT_OK, out, "\n".join(lines)


def cmd_dplen(args):
    h = _graph(args.graph)
    if args.method == "brute":
        p, fam = dplen.brute_force_p(h, limit=args.limit)
    elif args.method == "flowout":
        table = dplen.flowout_b(h)
        p, fam = table.value, table.witness
    else:
        p, tabs = dplen.general_p_dp(h, root=args.root)
        fam = tabs.witness
    paths = [list(q) for q in fam.paths] if fam is not None else []
    text = f"p(H)={p}\n" + "\n".join("  " + " -> ".join(q) for q in paths)
    return EXIT_OK, {"p": p, "method": args.method, "witness": paths}, text


def cmd_accepts(args):
    net = _network(args.network)
    g = _graph(args.graph)
    ok = msn.accepts(net, g)
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"accepts": ok}, "accepted" if ok else "rejected"


def cmd_sound(args):
    net = _network(args.network)
    uni = parse_universe(args.universe, net)
    rep = msn.is_sound(net, uni, budget=args.budget, method=args.method)
    out = rep.to_json()
    if rep.verdict:
        return EXIT_OK, out, "sound"
    text = "unsound; accepted graph without an s-t path:\n" + format_edge_list(rep.witness_graph)
    return EXIT_NEGATIVE, out, text


def cmd_complete(args):
    net = _network(args.network)
    uni = parse_universe(args.universe, net)
    ok = msn.is_complete(net, uni, budget=args.budget)
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"complete": ok}, "complete" if ok else "not complete"


def cmd_sigma(args):
    g = _graph(args.graph)
    fixed = {S, T} | set(args.fixed.split(",") if args.fixed else ())
    members = sorted(sigma(g, fixed, budget=args.budget), key=lambda h: sorted(h.edges))
    out = {"count": len(members), "members": [h.to_json() for h in members]}
    text = f"{len(members)} members\n" + "\n---\n".join(format_edge_list(h) for h in members)
    return EXIT_OK, out, text


def cmd_min_msn(args):
    graphs = [_graph(p) for p in args.graphs]
    if args.sigma:
        family = set()
        for g in graphs:
            family |= sigma(g)
    else:
        family = set(graphs)
    res = search.min_sound_msn(family, max_universe=args.max_universe, max_size=args.max_size, budget=args.budget)
    out = {"m": res.m, "inputs": len(family), "explored": res.explored, "witness": res.witness.to_json()}
    return EXIT_OK, out, f"m={res.m}\n" + format_network(res.witness)


def cmd_reduce(args):
    g = _graph(args.graph)
    if args.kind == "upper":
        seq = upper_graph_sequence(g)
        return EXIT_OK, {"kind": "upper", "sequence": seq.to_json()}, format_edge_list(seq.final)
    if args.kind in ("sqrt", "dplen"):
        if not args.tree:
            raise UsageError(f"reduce --kind {args.kind} needs --tree")
        h = _graph(args.tree)
        maker = sqrt_path_certificate if args.kind == "sqrt" else dplen_path_certificate
        certs = [maker(g, h)]
    elif args.kind == "thm51":
        certs = thm51_lower_certificates(g, floating=args.floating)
    else:
        if args.i is None:
            raise UsageError("reduce --kind flowout needs --i")
        certs = [flowout_lower_certificate(g, args.i, floating=args.floating)]
    data = [json.loads(c.dumps()) for c in certs]
    if args.out:
        Path(args.out).write_text(json.dumps(data if len(data) > 1 else data[0], indent=1, sort_keys=True))
    text = "\n".join(
        f"certificate {i}: {len(c.moves)} moves, end graph {len(c.end.edges)} edges" for i, c in enumerate(certs)
    )
    return EXIT_OK, {"kind": args.kind, "certificates": data}, text


def cmd_check_cert(args):
    try:
        data = json.loads(_read(args.certificate))
    except json.JSONDecodeError as exc:
        raise UsageError(f"certificate is not JSON: {exc}") from None
    items = data if isinstance(data, list) else [data]
    results = []
    for item in items:
        try:
            cert = ReductionCertificate.from_json(item)
        except (KeyError, TypeError, GraphError) as exc:
            results.append({"valid": False, "reason": "format", "step": None, "detail": str(exc)})
            continue
        results.append(check_certificate(cert).to_json())
    ok = all(r["valid"] for r in results)
    text = "\n".join(
        f"certificate {i}: " + ("valid" if r["valid"] else f"invalid ({r['reason']} at step {r['step']}): {r['detail']}")
        for i, r in enumerate(results)
    )
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"valid": ok, "results": results}, text


def cmd_construct_a(args):
    net, reports = construct.accepting_draw(
        args.n, args.ell, C=args.C, seed=args.seed, retries=args.retries, check=not args.no_check,
        limit=args.limit, samples=args.samples, soundness=args.soundness, workers=threads(args),
    )
    if args.out and net is not None:
        Path(args.out).write_text(format_network(net.network()))
    out = {"accepted_all": net is not None, "reports": reports}
    text = "\n".join(
        f"seed {r['seed']}: swept {r['swept']} ({'exhaustive' if r['exhaustive'] else 'sampled'}), "
        f"rejected {r['rejected']}, size {r['size']}, sound {r['sound']}"
        for r in reports
    )
    return (EXIT_OK if net is not None else EXIT_NEGATIVE), out, text


def level_order_tree(n: int, seed: int) -> dplen.TreeIndex:
    """Random recursive tree renumbered in BFS order so array access follows the pass."""
    edges = random_edges(n, seed)
    idx = dplen.TreeIndex.from_edges(n, edges)
    order, _ = dplen._bfs_order(idx, 0)
    pos = [0] * n
    for i, u in enumerate(order):
        pos[u] = i
    return dplen.TreeIndex.from_edges(n, [(pos[a], pos[b]) for a, b in edges])


def random_edges(n: int, seed: int) -> list[tuple[int, int]]:
    return random_tree_edges(n, random.Random(seed))


def bench(sizes, seed: int = 0, repeat: int = 3) -> list[tuple[int, float]]:
    """Best-of-``repeat`` time of the DP pass on one random tree per size."""

    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise UsageError("sizes must be ascending")
    rows = []
    for n in sizes:
        idx = level_order_tree(n, seed)
        best = float("inf")
        for _ in range(repeat):
            gc.collect()
            gc.disable()
            try:
                t0 = time.perf_counter()
                dplen.p_of_index(idx)
                best = min(best, time.perf_counter() - t0)
            finally:
                gc.enable()
        rows.append((n, best))
    return rows


def cmd_bench(args):
    try:
        sizes = [int(x) for x in args.sizes.split(",")]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    rows = bench(sizes, args.seed, args.repeat)
    text = "\n".join(f"{n}\t{t:.6f}" for n, t in rows)
    return EXIT_OK, {"rows": [{"n": n, "elapsed": t} for n, t in rows]}, "n\telapsed\n" + text


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    def shared(parser, top: bool):
        # subcommands repeat the flags without defaults so they don't clobber the top-level ones
        extra = {} if top else {"default": argparse.SUPPRESS}
        parser.add_argument("--json", action="store_true", help="print one JSON object on stdout", **extra)
        parser.add_argument("--threads", type=int, help="worker count (default: MSNLAB_THREADS or 1)",
                            **({"default": None} if top else extra))

    p = argparse.ArgumentParser(prog="msnlab", description="Monotone switching network toolkit")
    shared(p, True)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        shared(sp, False)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("bounds", cmd_bounds, "structure statistics and bound profiles of an s-t tree")
    sp.add_argument("graph")
    sp.add_argument("--theorem", choices=["T5.1", "T5.4"], default="T5.1")

    sp = add("dplen", cmd_dplen, "maximum disconnected-path family of a directed tree")
    sp.add_argument("graph")
    sp.add_argument("--method", choices=["dp", "brute", "flowout"], default="dp")
    sp.add_argument("--root", default=None, help="root vertex for the DP pass")
    sp.add_argument("--limit", type=int, default=dplen.DEFAULT_BRUTE_LIMIT, help="vertex cap for --method brute")

    sp = add("accepts", cmd_accepts, "does the network accept the graph")
    sp.add_argument("network")
    sp.add_argument("graph")

    sp = add("sound", cmd_sound, "decide soundness of a network")
    sp.add_argument("network")
    sp.add_argument("--universe", default=None, help="vertex count or comma list")
    sp.add_argument("--method", choices=["walk", "cuts"], default="walk")
    sp.add_argument("--budget", type=int, default=msn.DEFAULT_SOUND_BUDGET)

    sp = add("complete", cmd_complete, "decide completeness of a network over a universe")
    sp.add_argument("network")
    sp.add_argument("--universe", required=True, help="vertex count or comma list")
    sp.add_argument("--budget", type=int, default=msn.DEFAULT_COMPLETE_BUDGET)

    sp = add("sigma", cmd_sigma, "list the relabelings of a graph")
    sp.add_argument("graph")
    sp.add_argument("--fixed", default="", help="extra vertices kept in place, comma separated")
    sp.add_argument("--budget", type=int, default=10**5)

    sp = add("min-msn", cmd_min_msn, "exact minimum sound network size for a set of graphs")
    sp.add_argument("graphs", nargs="+")
    sp.add_argument("--sigma", action="store_true", help="use every relabeling of the given graphs")
    sp.add_argument("--max-universe", type=int, default=4)
    sp.add_argument("--max-size", type=int, default=search.DEFAULT_MAX_SIZE)
    sp.add_argument("--budget", type=int, default=search.DEFAULT_NODE_BUDGET)

    sp = add("reduce", cmd_reduce, "emit reduction certificates or the upper-bound graph sequence")
    sp.add_argument("graph")
    sp.add_argument("--kind", choices=["sqrt", "dplen", "thm51", "flowout", "upper"], required=True)
    sp.add_argument("--tree", help="floating tree for --kind sqrt/dplen")
    sp.add_argument("--i", type=int, help="step index for --kind flowout")
    sp.add_argument("--floating", choices=["sqrt", "dplen"], default="sqrt")
    sp.add_argument("--out", help="write the certificate JSON here")

    sp = add("check-cert", cmd_check_cert, "replay and validate a certificate file")
    sp.add_argument("certificate")

    sp = add("construct-a", cmd_construct_a, "random path network accepting every relabeling of the layered graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--C", type=int, default=None, help="path count (default: ceil(n^2/p))")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--retries", type=int, default=5)
    sp.add_argument("--no-check", action="store_true", help="skip the size hypotheses on n and ell")
    sp.add_argument("--limit", type=int, default=construct.DEFAULT_SWEEP_LIMIT, help="exhaustive sweep cap")
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--soundness", choices=["structural", "cuts", "none"], default="structural")
    sp.add_argument("--out", help="write the accepting network here")

    sp = add("bench", cmd_bench, "time the tree DP on random trees")
    sp.add_argument("--sizes", default="10000,100000,1000000")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeat", type=int, default=3)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    report: dict = {"command": args.command}
    try:
        report["threads"] = threads(args)
        code, out, text = args.fn(args)
        report.update(out)
        report["status"] = "ok" if code == EXIT_OK else "negative"
    except UsageError as exc:
        code, text = EXIT_USAGE, f"error: {exc}"
        report.update(status="error", error=str(exc))
    except BudgetExceeded as exc:
        code, text = EXIT_BUDGET, f"budget exceeded: {exc}"
        report.update(status="budget", error=str(exc), lower=exc.lower, upper=exc.upper)
    except (GraphError, PreconditionError, ValueError) as exc:
        code, text = EXIT_USAGE, f"error: {exc}"
        report.update(status="error", error=str(exc))
    report["exit"] = code
    if args.json:
        print(json.dumps(report, sort_keys=True, default=str))
    else:
        print(text, file=sys.stderr if code in (EXIT_USAGE, EXIT_BUDGET) else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
