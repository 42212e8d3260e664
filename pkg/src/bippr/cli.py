"""Command-line interface: estimate PPR between node pairs, dump exact
vectors, benchmark estimators at matched accuracy, estimate diffusions, and
validate graph files.

Exit codes: 0 ok, 1 I/O error, 2 bad arguments or labels, 3 size guard exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import exact, mstp
from .estimator import BipprParams, PreparedSource, significance_delta
from .graph import EdgeListParseError, Graph, load_edge_list
from .mc import mc_estimate, mc_num_walks
from .walk import RandomStream

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class GuardError(Exception):
    pass


def _load_graph(path: str, weighted: bool) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_edge_list(fh, weighted=weighted)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("BIPPR_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"BIPPR_SEED must be an integer, got {env!r}") from None
    return 0


def _node(g: Graph, label: str) -> int:
    try:
        return g.node_id(label)
    except KeyError as exc:
        raise ValueError(exc.args[0]) from None


def _fmt(x: float) -> str:
    return repr(float(x))


def _derive_params(args, g: Graph, t: int) -> BipprParams:
    delta = significance_delta(g, t) if args.delta == "auto" else float(args.delta)
    return BipprParams.derive(alpha=args.alpha, delta=delta, eps=args.eps,
                              p_fail=args.pfail, d_t=g.degree(t),
                              r_max=args.rmax, w=args.walks)


def cmd_estimate(args) -> int:
    g = _load_graph(args.graph, args.weighted)
    s, t = _node(g, args.source), _node(g, args.target)
    g.require_walkable(s)
    g.require_walkable(t)
    seed = _resolve_seed(args)
    params = _derive_params(args, g, t)
    prepared = PreparedSource(g, params.alpha, s, params.r_max)
    est = prepared.estimate(t, params, RandomStream(seed))
    record = {
        "source": args.source,
        "target": args.target,
        "estimate": est.value,
        "push_term": est.push_term,
        "walk_term": est.walk_term,
        "params": {"alpha": params.alpha, "delta": params.delta,
                   "eps": params.eps, "p_fail": params.p_fail, "c": params.c,
                   "r_max": params.r_max, "w": params.w},
        "work": {"push_count": est.push_count, "degree_work": est.push_work,
                 "walk_steps": est.walk_steps},
        "seed": seed,
    }
    if args.trace_push:
        record["push"] = {
            "p": {g.labels[v]: val for v, val in sorted(prepared.push.p.items())},
            "r": {g.labels[v]: val for v, val in sorted(prepared.push.r.items())},
            "push_count": prepared.push.push_count,
            "degree_work": prepared.push.degree_work,
        }
    print(json.dumps(record))
    return EXIT_OK


def cmd_exact(args) -> int:
    g = _load_graph(args.graph, args.weighted)
    s = _node(g, args.source)
    g.require_walkable(s)
    if args.ell is not None:
        cap = args.cap if args.cap is not None else 10_000
        if g.n > cap:
            raise GuardError(f"graph has {g.n} nodes, over the cap of {cap}")
        vec = exact.exact_mstp(g, s, args.ell)[args.ell]
    else:
        cap = args.cap if args.cap is not None else 100_000
        if g.n > cap:
            raise GuardError(f"graph has {g.n} nodes, over the cap of {cap}")
        vec = exact.exact_ppr(g, args.alpha, s, tol=args.tol)
    order = sorted(range(g.n), key=lambda v: (-vec[v], g.labels[v]))
    print("node,value")
    for v in order:
        print(f"{g.labels[v]},{_fmt(vec[v])}")
    return EXIT_OK


def cmd_bench(args) -> int:
    g = _load_graph(args.graph, args.weighted)
    s, t = _node(g, args.source), _node(g, args.target)
    g.require_walkable(s)
    g.require_walkable(t)
    if args.trials < 1:
        raise ValueError("trials must be >= 1")
    estimators = ["bippr", "mc", "push"] if args.estimator == "all" else [args.estimator]
    seed = _resolve_seed(args)
    params = _derive_params(args, g, t)
    cap = args.cap if args.cap is not None else 100_000
    true_value = None
    if g.n <= cap:
        true_value = float(exact.exact_ppr(g, args.alpha, s, tol=1e-12)[t])
    bound = None if true_value is None else max(
        params.eps * true_value, 2.0 * np.e * params.delta)

    rows = []
    summaries = {}
    for name in estimators:
        prepared = None
        if name in ("bippr", "push"):
            prepared = PreparedSource(g, params.alpha, s, params.r_max)
        violations = 0
        total_work = 0.0
        est_sum = 0.0
        n_trials = 1 if name == "push" else args.trials
        for trial in range(n_trials):
            rng = RandomStream(seed, stream_id=trial)
            t0 = time.perf_counter()
            if name == "bippr":
                est = prepared.estimate(t, params, rng)
                work = est.push_work + est.walk_steps
                value = est.value
                degree_work, walk_steps = est.push_work, est.walk_steps
            elif name == "mc":
                walks = mc_num_walks(params.delta, params.eps, params.p_fail)
                est = mc_estimate(g, s, t, params.alpha, walks, rng)
                work = float(est.walk_steps)
                value = est.value
                degree_work, walk_steps = 0.0, est.walk_steps
            else:
                value = prepared.push.p.get(t, 0.0)
                work = prepared.push.degree_work
                degree_work, walk_steps = prepared.push.degree_work, 0
            elapsed = time.perf_counter() - t0
            rel = ""
            if true_value is not None and true_value > 0:
                rel = _fmt(abs(value - true_value) / true_value)
            if bound is not None and abs(value - true_value) > bound:
                violations += 1
            total_work += work
            est_sum += value
            rows.append([
                "trial", str(trial), name, args.source, args.target,
                "" if true_value is None else _fmt(true_value),
                _fmt(value), rel, _fmt(degree_work), str(walk_steps),
                _fmt(work), "", _fmt(elapsed) if args.wall_time else "",
            ])
        summaries[name] = {
            "violation_rate": violations / n_trials,
            "mean_work": total_work / n_trials,
            "mean_estimate": est_sum / n_trials,
        }

    print("row_type,trial,estimator,source,target,true_value,estimate,"
          "rel_error,degree_work,walk_steps,total_work,violation_rate,wall_time_s")
    for row in rows:
        print(",".join(row))
    bippr_work = summaries.get("bippr", {}).get("mean_work")
    for name in estimators:
        summ = summaries[name]
        ratio = ""
        if bippr_work and name != "bippr":
            ratio = _fmt(summ["mean_work"] / bippr_work)
        print(",".join([
            "summary", "", name, args.source, args.target,
            "" if true_value is None else _fmt(true_value),
            _fmt(summ["mean_estimate"]), ratio, "", "",
            _fmt(summ["mean_work"]), _fmt(summ["violation_rate"]), "",
        ]))
    return EXIT_OK


def cmd_diffusion(args) -> int:
    g = _load_graph(args.graph, args.weighted)
    s, t = _node(g, args.source), _node(g, args.target)
    seed = _resolve_seed(args)
    if args.family == "pagerank":
        ell_max = mstp.choose_ell_max("pagerank", args.trunc_tol, alpha=args.alpha)
        weights = mstp.pagerank_weights(args.alpha, ell_max)
    elif args.family == "heat-kernel":
        ell_max = mstp.choose_ell_max("heat-kernel", args.trunc_tol, gamma=args.gamma)
        weights = mstp.heat_kernel_weights(args.gamma, ell_max)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    est = mstp.estimate_diffusion(
        g, s, t, weights, r_max=args.rmax, w_per_level=args.walks_per_level,
        rng=RandomStream(seed), shared_walks=not args.independent_walks)
    record = {
        "family": args.family,
        "source": args.source,
        "target": args.target,
        "value": est.value,
        "trunc_bound": est.trunc_bound,
        "ell_max": weights.ell_max,
        "per_level": [
            {"ell": ell, "alpha_ell": float(weights.alphas[ell]),
             "estimate": est.per_level[ell]}
            for ell in range(weights.ell_max + 1)
        ],
        "params": {"r_max": args.rmax, "w_per_level": args.walks_per_level,
                   "trunc_tol": args.trunc_tol,
                   "gamma": args.gamma if args.family == "heat-kernel" else None,
                   "alpha": args.alpha if args.family == "pagerank" else None},
        "seed": seed,
    }
    print(json.dumps(record))
    return EXIT_OK


def cmd_validate(args) -> int:
    g = _load_graph(args.graph, args.weighted)
    g.check()
    print(json.dumps({
        "nodes": g.n,
        "edges": g.m,
        "total_weight": g.total_weight,
        "isolated_nodes": int((np.diff(g.indptr) == 0).sum()),
        "symmetric": True,
        "degree_sum_ok": True,
    }))
    return EXIT_OK


def _float_or_auto(value: str) -> str:
    if value != "auto":
        float(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bippr",
        description="Bidirectional PPR and graph-diffusion estimation on undirected graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, walks=False):
        p.add_argument("--graph", required=True, help="edge-list file path")
        p.add_argument("--weighted", action="store_true",
                       help="parse an optional third column as edge weight")
        p.add_argument("--seed", type=int, default=None,
                       help="random seed (falls back to BIPPR_SEED, then 0)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap; output is identical for any value")

    def estimator_flags(p):
        p.add_argument("--alpha", type=float, default=0.2)
        p.add_argument("--delta", type=_float_or_auto, default="auto",
                       help="minimum probability threshold, or 'auto' for d_t/m")
        p.add_argument("--eps", type=float, default=0.1)
        p.add_argument("--pfail", type=float, default=0.01)
        p.add_argument("--rmax", type=float, default=None,
                       help="override the balanced residual threshold")
        p.add_argument("--walks", type=int, default=None,
                       help="override the derived walk count")

    p = sub.add_parser("estimate", help="bidirectional point estimate of PPR")
    common(p)
    estimator_flags(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--trace-push", action="store_true",
                   help="include the sparse push state in the output record")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", help="dump an exact PPR or fixed-length vector")
    common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--ell", type=int, default=None,
                   help="dump the length-ell transition vector instead of PPR")
    p.add_argument("--cap", type=int, default=None,
                   help="node-count guard (default 1e5 for PPR, 1e4 for --ell)")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bench", help="per-trial benchmark CSV with work counters")
    common(p)
    estimator_flags(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--estimator", choices=["bippr", "mc", "push", "all"],
                   default="all")
    p.add_argument("--cap", type=int, default=None,
                   help="skip the exact oracle above this node count")
    p.add_argument("--wall-time", action="store_true",
                   help="record wall time per trial (breaks byte-determinism)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("diffusion", help="bidirectional graph-diffusion estimate")
    common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--family", required=True, choices=["pagerank", "heat-kernel"])
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--trunc-tol", type=float, default=1e-6)
    p.add_argument("--rmax", type=float, default=1e-3)
    p.add_argument("--walks-per-level", type=int, default=1000)
    p.add_argument("--independent-walks", action="store_true",
                   help="independent walk batches per level instead of shared")
    p.set_defaults(func=cmd_diffusion)

    p = sub.add_parser("validate", help="check graph invariants")
    common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (EdgeListParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
