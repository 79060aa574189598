"""``graphonlab`` command line. Every subcommand prints one JSON object on stdout.

Exit status: 0 on success, 1 when a verdict fails (experiment verdicts, or a
``test``/``certify`` result that contradicts ``--expect``), 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import io as gio
from .distances import (cut_distance_digraphons, cut_distance_fractional, cut_distance_graphs_labeled,
                        cut_norm, delta_cut_upper, distance_to_property, edit_distance_colored,
                        edit_distance_digraphons, edit_distance_graphs, edit_distance_kernels)
from .experiments import ExperimentConfig, run_experiment
from .graphs import SimpleGraph, shadow
from .kernels import digraphon_of_fractional, pullback_coloring
from .properties import PropertySpec
from .sampling import (RngSpec, generate, round_coloring, sample_from_digraphon,
                       sample_graph_from_graphon, sample_induced)
from .testers import (Z95, TesterSpec, acceptance_probability, certified_parameter,
                      estimate_parameter, nd_membership)


def _rng(args):
    return RngSpec(args.seed, args.stream).generator()


def _clean(o):
    """Non-finite floats become null so the output stays strict JSON."""
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    if isinstance(o, float) and not math.isfinite(o):
        return None
    return o


def _emit(obj) -> None:
    obj = _clean(json.loads(json.dumps(obj, default=_default)))
    json.dump(obj, sys.stdout, indent=2, sort_keys=True, allow_nan=False)
    sys.stdout.write("\n")


def _default(o):
    if isinstance(o, (np.integer, np.floating, np.bool_)):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    if isinstance(o, SimpleGraph):
        return {"n": o.n, "edges": [list(e) for e in o.edges]}
    raise TypeError(type(o).__name__)


def cmd_sample(args):
    g = _rng(args)
    if args.generator:
        obj, kind = generate(args.generator, g), "graph"
    elif args.graph:
        obj, kind = sample_induced(gio.load_graph(args.graph), args.n, g), "graph"
    elif args.graphon:
        obj, kind = sample_graph_from_graphon(gio.load_kernel(args.graphon), args.n, g,
                                              sort_positions=args.sort), "graph"
    else:
        obj, kind = sample_from_digraphon(gio.load_digraphon(args.digraphon), args.n, g), "colored"
    if args.out:
        gio.save(obj, args.out, kind)
    info = {"kind": kind, "n": obj.n, "seed": args.seed, "out": args.out}
    if kind == "graph":
        info["edges"] = obj.num_edges
    return info, True


def cmd_cutnorm(args):
    W = gio.load_kernel(args.kernel)
    mode = "heuristic" if args.heuristic else "exact"
    return cut_norm(W, mode=mode, starts=args.starts, rng=_rng(args)).to_json(), True


_LOADERS = {"graph": gio.load_graph, "colored": gio.load_colored, "fractional": gio.load_fractional,
            "digraphon": gio.load_digraphon, "kernel": gio.load_kernel}


def cmd_dist(args):
    a = _LOADERS[args.kind](args.a)
    if args.property:
        if args.kind != "graph":
            raise ValueError("--property needs --kind graph")
        metric = {"dcut": "delta"}.get(args.metric, args.metric)
        res = distance_to_property(a, PropertySpec.parse(args.property), metric=metric)
        return res.to_json(), True
    if args.b is None:
        raise ValueError("dist needs --b or --property")
    b = _LOADERS[args.kind](args.b)
    mode = args.mode or ("exact-perm" if args.metric == "delta" else "auto")
    if args.metric == "d1":
        fn = {"graph": edit_distance_graphs, "colored": edit_distance_colored,
              "digraphon": edit_distance_digraphons, "kernel": edit_distance_kernels}.get(args.kind)
        if fn is None:
            raise ValueError(f"d1 is not defined for {args.kind}")
        return {"metric": "d1", "value": fn(a, b), "exact": True}, True
    if args.metric == "delta":
        if args.kind != "graph":
            raise ValueError("delta is implemented for graphs")
        res = delta_cut_upper(a, b, mode=mode, rng=_rng(args))
        return {"metric": "delta", **res.to_json()}, True
    if args.kind == "graph":
        res = cut_distance_graphs_labeled(a, b, mode=mode, starts=args.starts, rng=_rng(args))
    elif args.kind == "fractional":
        res = cut_distance_fractional(a, b, mode=mode, starts=args.starts, rng=_rng(args))
    elif args.kind == "digraphon":
        res = cut_distance_digraphons(a, b, mode=mode, starts=args.starts, rng=_rng(args))
    else:
        r = cut_norm(a - b, mode="heuristic" if mode == "heuristic" else "exact",
                     starts=args.starts, rng=_rng(args))
        return {"metric": "dcut", **r.to_json()}, True
    return {"metric": "dcut", **res.to_json()}, True


def cmd_round(args):
    H = gio.load_fractional(args.fractional)
    L = round_coloring(H, _rng(args), coupling=args.coupling)
    if args.out:
        gio.save_colored(L, args.out)
    return {"n": L.n, "k": L.k, "seed": args.seed, "out": args.out}, True


def cmd_pullback(args):
    F = gio.load_graph(args.graph)
    Wd = gio.load_digraphon(args.digraphon)
    H, fb = pullback_coloring(F, Wd, args.m, eps=args.eps, return_fallback=True)
    if args.out:
        gio.save_fractional(H, args.out)
    info = {"n": F.n, "k": H.k, "m": args.m, "fallback_cells": fb, "out": args.out}
    ok = True
    if args.distance:
        d = cut_distance_digraphons(digraphon_of_fractional(H), Wd, mode="auto", rng=_rng(args))
        info["dcut_WH_W"] = d.value
        info["dcut_exact"] = d.exact
    if args.round:
        J = round_coloring(H, _rng(args), coupling=args.coupling)
        ok = shadow(J, args.m) == F
        info["shadow_identity"] = ok
        if args.round_out:
            gio.save_colored(J, args.round_out)
    return info, ok


def cmd_shadow(args):
    L = gio.load_colored(args.colored)
    G = shadow(L, args.m)
    if args.out:
        gio.save_graph(G, args.out)
    return {"n": G.n, "edges": G.num_edges, "m": args.m, "out": args.out}, True


def cmd_test(args):
    G = gio.load_graph(args.graph)
    spec = TesterSpec(PropertySpec.parse(args.property), args.r, args.trials)
    rep = acceptance_probability(G, spec, _rng(args))
    verdict = rep.verdict(spec)
    out = {"property": str(spec.test_property), "r": args.r, "estimate": rep.probability,
           "ci": [max(0.0, rep.probability - rep.halfwidth), min(1.0, rep.probability + rep.halfwidth)],
           "trials": rep.trials, "seed": args.seed, "verdict": verdict}
    return out, args.expect is None or args.expect == verdict


def cmd_estimate(args):
    G = gio.load_colored(args.colored) if args.colored else gio.load_graph(args.graph)
    rep = estimate_parameter(G, args.param, args.k, args.trials, _rng(args), epsilon=args.epsilon)
    vals = np.asarray(rep.values)
    half = Z95 * float(vals.std(ddof=1)) / math.sqrt(rep.trials) if rep.trials > 1 else math.inf
    return {"param": args.param, "k": args.k, "estimate": rep.point_estimate,
            "ci": [rep.point_estimate - half, rep.point_estimate + half], "trials": rep.trials,
            "seed": args.seed, "true_value": rep.true_value, "empirical_deviation": rep.empirical_deviation,
            "epsilon": rep.epsilon, "delta": rep.delta}, True


def cmd_certify(args):
    G = gio.load_graph(args.graph)
    if args.property:
        member = nd_membership(G, PropertySpec.parse(args.property), args.k, args.m)
        ok = args.expect is None or args.expect == ("member" if member else "nonmember")
        return {"property": args.property, "k": args.k, "m": args.m, "member": member}, ok
    res = certified_parameter(G, args.param, args.k, args.m, mode=args.mode, rng=_rng(args))
    if args.witness_out and res.witness is not None:
        gio.save_colored(res.witness, args.witness_out)
    return {"param": args.param, "k": args.k, "m": args.m, "value": res.value, "exact": res.exact,
            "witness_out": args.witness_out}, True


def cmd_exp(args):
    cfg = ExperimentConfig.load(args.config)
    report = run_experiment(cfg)
    out = args.out or cfg.out
    paths = report.write(out) if out else (None, None)
    return {"experiment": report.experiment, "verdicts": report.verdicts, "passed": report.passed,
            "summary": report.summary, "rows_csv": str(paths[0]) if paths[0] else None,
            "summary_json": str(paths[1]) if paths[1] else None}, report.passed


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphonlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--stream", type=int, default=0, help="RNG substream id")
        sp.set_defaults(func=func)
        return sp

    sp = add("sample", cmd_sample, "sample a graph or colored digraph")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--generator", help="family spec, e.g. er:100,0.5")
    src.add_argument("--graph", help="graph file; draws G(n, G)")
    src.add_argument("--graphon", help="step kernel file; draws a W-random graph")
    src.add_argument("--digraphon", help="k-digraphon file; draws G(n, W)")
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--sort", action="store_true", help="label nodes by sorted latent points")
    sp.add_argument("--out")

    sp = add("cutnorm", cmd_cutnorm, "cut norm of a step kernel")
    sp.add_argument("--kernel", required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    sp.add_argument("--starts", type=int, default=32)

    sp = add("dist", cmd_dist, "distance between two objects or to a property")
    sp.add_argument("--metric", choices=["d1", "dcut", "delta"], default="dcut")
    sp.add_argument("--kind", choices=sorted(_LOADERS), default="graph")
    sp.add_argument("--mode", choices=["auto", "exact", "heuristic", "exact-perm", "align-heuristic"])
    sp.add_argument("--a", required=True)
    sp.add_argument("--b")
    sp.add_argument("--property", help="distance from --a to this graph property")
    sp.add_argument("--starts", type=int, default=32)

    sp = add("round", cmd_round, "randomized rounding of a fractional coloring")
    sp.add_argument("--fractional", required=True)
    sp.add_argument("--coupling", choices=["independent", "joint"], default="independent")
    sp.add_argument("--out")

    sp = add("pullback", cmd_pullback, "pull a k-digraphon back onto a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--digraphon", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.add_argument("--out", help="write the fractional coloring H here")
    sp.add_argument("--distance", action="store_true", help="report d_cut(W_H, W)")
    sp.add_argument("--round", action="store_true", help="round H and check the shadow identity")
    sp.add_argument("--coupling", choices=["independent", "joint"], default="independent")
    sp.add_argument("--round-out")

    sp = add("shadow", cmd_shadow, "shadow graph of a colored digraph")
    sp.add_argument("--colored", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--out")

    sp = add("test", cmd_test, "acceptance frequency of a sample-based tester")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--property", required=True, help="e.g. maxcut:c=0.2")
    sp.add_argument("--r", type=int, default=12)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--expect", choices=["accept", "reject", "undecided"])

    sp = add("estimate", cmd_estimate, "estimate a parameter from random samples")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--colored")
    sp.add_argument("--param", required=True)
    sp.add_argument("--k", type=int, required=True, help="sample size")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--epsilon", type=float, default=0.1)

    sp = add("certify", cmd_certify, "certificate membership or certified parameter g'")
    sp.add_argument("--graph", required=True)
    what = sp.add_mutually_exclusive_group(required=True)
    what.add_argument("--property", help="colored property Q for membership")
    what.add_argument("--param", help="colored parameter g")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    sp.add_argument("--expect", choices=["member", "nonmember"])
    sp.add_argument("--witness-out")

    sp = add("exp", cmd_exp, "run a config-driven experiment")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", help="output directory (defaults to the config's out)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result, ok = args.func(args)
    except (ValueError, OSError, TypeError, KeyError) as exc:
        json.dump({"error": str(exc), "type": type(exc).__name__}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    _emit(result)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
