"""Command-line entry point.

JSON goes to stdout and diagnostics to stderr. Exit codes: 0 success or
passing verdict, 1 failing verdict, 2 input error, 3 indeterminate (budget
exhausted, empty campaign).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, is_dataclass, replace
from fractions import Fraction
from pathlib import Path

from . import __version__, thresholds
from .expander import (
    ExpanderParams,
    ExtendabilityQuery,
    is_c_expander,
    is_extendable,
    preset,
    verify_dense_properties,
    verify_h_properties,
    verify_sparse_properties,
)
from .generators import GenerationError, GenSpec
from .graph import GraphInputError, format_edge_list, read_edge_list
from .hamilton import Engine, IndeterminateError, Status
from .process import HittingReport, hitting_hamiltonicity, hitting_min_degree, new_process
from .seeding import mix
from .spectral import ConvergenceError, second_eigenvalue

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INDETERMINATE = 0, 1, 2, 3


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(_plain(obj), sort_keys=True) + "\n")


def _plain(x):
    if hasattr(x, "to_dict"):
        return _plain(x.to_dict())
    if is_dataclass(x):
        return _plain(asdict(x))
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if hasattr(x, "item"):  # numpy scalar
        return x.item()
    return x


def _load_json_arg(text: str | None) -> dict:
    if not text:
        return {}
    p = Path(text)
    raw = p.read_text() if p.exists() else text
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise GraphInputError(f"--params: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise GraphInputError("--params must be a JSON object")
    return data


def _engine(args) -> Engine:
    kw = {"kind": args.engine, "restarts": args.restarts, "seed": args.seed}
    if args.budget is not None:
        kw["budget"] = args.budget
    return Engine(**kw)


# --- subcommands --------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, n=args.n, d=args.d, a=args.a, b=args.b, c=args.c, seed=args.seed)
    g = spec.build()
    text = format_edge_list(g)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {g.n} vertices, {g.m} edges to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_spectral(args) -> int:
    g = read_edge_list(args.graph)
    prof = second_eigenvalue(g, args.tol, method=args.method, seed=args.seed)
    out = prof.to_dict()
    _emit(out)
    if args.min_ratio is not None:
        return EXIT_OK if prof.ratio >= args.min_ratio else EXIT_FAIL
    return EXIT_OK


def cmd_process(args) -> int:
    g = read_edge_list(args.graph)
    engine = _engine(args)
    code = EXIT_OK
    for i in range(args.trials):
        seed = args.seed if args.trials == 1 else mix(args.seed, i)
        proc = new_process(g, seed)
        rep = HittingReport(g.m)
        k = args.k
        need = 2 * k if args.mode == "khc" else (2 if args.mode == "hc" else k)
        tau = hitting_min_degree(proc, need)
        rep.tau_min_degree[need] = tau
        out = {"trial": i, "seed": seed}
        try:
            if args.mode == "hc":
                rep.tau_hc = hitting_hamiltonicity(proc, engine, 1, lower=tau) if tau is not None else None
                if rep.tau_hc is None:
                    code = max(code, EXIT_FAIL)
            elif args.mode == "khc":
                val = hitting_hamiltonicity(proc, engine, k, lower=tau) if tau is not None else None
                rep.tau_khc[k] = val
                if val is None:
                    code = max(code, EXIT_FAIL)
            elif tau is None:
                code = max(code, EXIT_FAIL)
        except IndeterminateError as exc:
            out["indeterminate"] = {"lo": exc.lo, "hi": exc.hi, "message": str(exc)}
            code = EXIT_INDETERMINATE
        out.update(rep.to_dict())
        _emit(out)
    return code


def cmd_hamilton(args) -> int:
    g = read_edge_list(args.graph)
    forced = None
    if args.forced:
        forced = read_edge_list(args.forced).edges
    engine = _engine(args)
    res = engine.solve(g, forced)
    _emit(res.to_dict())
    return {Status.FOUND: EXIT_OK, Status.NONE: EXIT_FAIL, Status.UNKNOWN: EXIT_INDETERMINATE}[res.status]


def _params(data: dict, default: str) -> ExpanderParams:
    data = dict(data)
    if not data:
        return preset(default)
    return ExpanderParams.from_dict(data)


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    data = _load_json_arg(args.params)
    suite = args.suite
    if suite == "expander":
        params = _params(data, "desk-sparse")
        v = is_c_expander(g, params, args.mode, seed=data.get("seed", args.seed))
        _emit(v)
        return EXIT_OK if v.ok else EXIT_FAIL
    if suite == "extendable":
        try:
            q = ExtendabilityQuery.of(
                g, data.get("h_vertices", ()), data.get("h_edges", ()), int(data.get("D", 3)), int(data.get("m", 1)),
                bool(data.get("allow_aux", False)),
            )
        except (TypeError, ValueError) as exc:
            raise GraphInputError(f"bad extendability query: {exc}") from None
        res = is_extendable(q)
        _emit({"extendable": res.ok, "witness": sorted(res.witness) if res.witness else None,
               "D": q.D, "m": q.m})
        return EXIT_OK if res.ok else EXIT_FAIL
    d = args.d if args.d is not None else g.regular_degree()
    if d is None:
        raise GraphInputError("--d is required for a non-regular graph")
    params = _params(data, {"sparse": "asymptotic-sparse", "dense": "asymptotic-dense", "h": "asymptotic-h"}[suite])
    if "seed" not in data:
        params = replace(params, seed=args.seed)
    if suite == "sparse":
        rep = verify_sparse_properties(g, d, params, args.mode)
    elif suite == "dense":
        rep = verify_dense_properties(g, d, params, args.mode)
    else:
        rep = verify_h_properties([g], d, params, mode=args.mode)
    _emit(rep)
    return EXIT_FAIL if rep.failures() else EXIT_OK


FORMULA_OPS = {
    "low_degree_probability": lambda a: thresholds.low_degree_probability(a.d, a.p),
    "expected_low_degree": lambda a: thresholds.expected_low_degree(a.n, a.d, a.p),
    "adjacent_pair_joint": lambda a: thresholds.adjacent_pair_joint(a.n, a.d, a.p),
    "adjacent_pair_joint_exact": lambda a: thresholds.adjacent_pair_joint_exact(a.d, Fraction(a.p_exact or str(a.p))),
    "tau2_window": lambda a: thresholds.tau2_window(a.n, a.d),
    "sharp_threshold": lambda a: thresholds.sharp_threshold(a.n, a.d, a.eps),
    "binomial_tail": lambda a: thresholds.binomial_tail(a.n, a.p, a.t),
    "mindeg_probability_report": lambda a: thresholds.mindeg_probability_report(a.n, a.d, a.p),
    "check_estimates": lambda a: thresholds.check_estimates(a.trials, a.seed),
}


def cmd_formula(args) -> int:
    needs = {
        "low_degree_probability": ("d", "p"),
        "expected_low_degree": ("n", "d", "p"),
        "adjacent_pair_joint": ("n", "d", "p"),
        "adjacent_pair_joint_exact": ("d",),
        "tau2_window": ("n", "d"),
        "sharp_threshold": ("n", "d", "eps"),
        "binomial_tail": ("n", "p", "t"),
        "mindeg_probability_report": ("n", "d", "p"),
        "check_estimates": ("trials", "seed"),
    }[args.op]
    missing = [f"--{k}" for k in needs if getattr(args, k) is None]
    if missing:
        raise GraphInputError(f"{args.op} needs {' '.join(missing)}")
    value = FORMULA_OPS[args.op](args)
    _emit(value)
    if args.op == "check_estimates":
        return EXIT_OK if value.ok else EXIT_FAIL
    return EXIT_OK


def cmd_experiment(args) -> int:
    from .experiments import ExperimentConfig, run, summarize, write_outputs

    cfg = ExperimentConfig.load(args.config)
    camp = run(cfg, workers=args.workers)
    summary = summarize(camp)
    summary["config"] = _plain(asdict(cfg))
    paths = write_outputs(camp, summary, args.out)
    print(f"wrote {paths['records']} and {paths['summary']}", file=sys.stderr)
    _emit(summary)
    if summary.get("empty"):
        return EXIT_INDETERMINATE
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def _add_engine(p) -> None:
    p.add_argument("--engine", choices=("auto", "exact", "posa"), default="auto", help="Hamiltonicity solver")
    p.add_argument("--restarts", type=int, default=50, help="Posa restart count")
    p.add_argument("--budget", type=int, default=None, help="exact-search node budget")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamhit", description="Hitting times for Hamiltonicity in random subgraphs.")
    ap.add_argument("--version", action="version", version=f"hamhit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph as an edge list")
    p.add_argument("--family", required=True, choices=GenSpec.FAMILIES)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--d", type=int, default=0, help="degree (regular family)")
    p.add_argument("--a", type=int, default=0, help="left part size (complete-bipartite)")
    p.add_argument("--b", type=int, default=0, help="right part size (complete-bipartite)")
    p.add_argument("--c", type=float, default=0.05, help="overlay density constant (counterexample)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write here instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("spectral", help="second adjacency eigenvalue of a regular graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--method", choices=("lanczos", "power"), default="lanczos")
    p.add_argument("--seed", type=int, default=0, help="start vector seed")
    p.add_argument("--min-ratio", type=float, default=None, help="exit 1 unless d/lambda reaches this")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("process", help="hitting times along a random edge order")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, default=2, help="degree (mindeg) or cycle count (khc)")
    p.add_argument("--mode", choices=("mindeg", "hc", "khc"), default="hc")
    p.add_argument("--trials", type=int, default=1)
    _add_engine(p)
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("hamilton", help="search for a Hamilton cycle")
    p.add_argument("--graph", required=True)
    p.add_argument("--forced", help="edge list of edges the cycle must use")
    p.add_argument("--seed", type=int, default=0)
    _add_engine(p)
    p.set_defaults(func=cmd_hamilton)

    p = sub.add_parser("verify", help="expander and structural property checks")
    p.add_argument("--graph", required=True)
    p.add_argument("--suite", required=True, choices=("sparse", "dense", "h", "expander", "extendable"))
    p.add_argument("--params", help="JSON object or file: parameters or preset name")
    p.add_argument("--d", type=int, default=None, help="base degree (defaults to the regular degree)")
    p.add_argument("--mode", choices=("auto", "exact", "sampled"), default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("formula", help="closed-form quantities and estimate checks")
    p.add_argument("--op", required=True, choices=sorted(FORMULA_OPS))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--p-exact", help="rational p such as 1/2 (adjacent_pair_joint_exact)")
    p.add_argument("--eps", type=float)
    p.add_argument("--t", type=int, help="tail cut (binomial_tail)")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("experiment", help="run a Monte Carlo campaign from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=None, help="override the config worker count")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (GraphInputError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GenerationError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
