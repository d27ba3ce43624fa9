"""Command-line front-end: model selection, K estimation, and simulations.

Exit codes: 0 success, 2 configuration/usage error, 3 data error.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .errors import FormatError, InvalidInputError, InvalidParameterError, NetcvError
from .harness import (
    MethodConfig,
    Scenario,
    frequency_csv,
    frequency_json,
    load_graph,
    monte_carlo,
)
from .selection import (
    CandidateModel,
    CvConfig,
    PenaltyConfig,
    adaptive_k,
    class_selection,
    run_selection,
)

__all__ = ["main", "dispatch"]

_PAIR_ALIASES = {
    "affiliation-sbm": "affiliation-vs-sbm",
    "am-sbm": "affiliation-vs-sbm",
    "sbm-dcbm": "sbm-vs-dcbm",
    "sbm-graphon": "sbm-vs-graphon",
    "dcbm-graphon": "dcbm-vs-graphon",
}

_DEFAULT_SCENARIO_PAIR = {
    "am-3": "affiliation-vs-sbm",
    "sbm-3": "sbm-vs-dcbm",
    "sbm-5": "sbm-vs-dcbm",
    "sbm-imbalanced-3": "sbm-vs-dcbm",
    "sbm-imbalanced-5": "sbm-vs-dcbm",
    "dcbm-3": "sbm-vs-dcbm",
    "dcbm-5": "sbm-vs-dcbm",
    "dcbm-e2": "dcbm-vs-graphon",
    "graphon-ns": "dcbm-vs-graphon",
}


def _normalize_pair(value):
    pair = _PAIR_ALIASES.get(value, value)
    if pair not in ("affiliation-vs-sbm", "sbm-vs-dcbm", "sbm-vs-graphon",
                    "dcbm-vs-graphon", "within-sbm"):
        raise InvalidParameterError(f"unknown comparison pair {value!r}")
    return pair


def _parse_candidate(token):
    token = token.strip()
    if token in ("graphon", "graphon-ns"):
        return CandidateModel("graphon-ns")
    try:
        fam, k = token.rsplit("-", 1)
        family = {"am": "affiliation", "affiliation": "affiliation",
                  "sbm": "sbm", "dcbm": "dcbm"}[fam]
        return CandidateModel(family, int(k))
    except (ValueError, KeyError):
        raise InvalidParameterError(f"cannot parse candidate {token!r}")


def _add_common(sub):
    sub.add_argument("--folds", type=int, default=10)
    sub.add_argument("--w", type=float, default=0.9)
    sub.add_argument("--reps", type=int, default=5)
    sub.add_argument("--variant", choices=["single", "vote", "average"],
                     default="single")
    sub.add_argument("--lambda", dest="lam", type=float, default=None)
    sub.add_argument("--lambda-rule", choices=["auto", "block", "graphon",
                                               "graphon-supp"], default="auto")
    sub.add_argument("--kmax", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--output", default=None)
    sub.add_argument("--output-format", choices=["json", "csv"], default="json")


def _add_input(sub):
    sub.add_argument("--input", required=True)
    sub.add_argument("--format", choices=["edgelist", "gml"], default="edgelist")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netcv",
        description="Penalized cross-validated selection among nested network models.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_sel = subs.add_parser("select", help="select a model for an observed graph")
    _add_input(p_sel)
    group = p_sel.add_mutually_exclusive_group(required=True)
    group.add_argument("--pair", help="pairwise comparison, e.g. sbm-dcbm")
    group.add_argument("--candidates", help="comma list, e.g. sbm-3,dcbm-3,graphon")
    p_sel.add_argument("--fixed-k", type=int, default=None,
                       help="skip the K-estimation step of a pairwise comparison")
    _add_common(p_sel)

    p_k = subs.add_parser("estimate-k", help="estimate the community count")
    _add_input(p_k)
    p_k.add_argument("--family", choices=["sbm"], default="sbm")
    _add_common(p_k)

    p_sim = subs.add_parser("simulate", help="Monte-Carlo frequency table")
    p_sim.add_argument("--scenario", required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--pair", default=None,
                       help="comparison to run; defaults by scenario")
    _add_common(p_sim)
    return parser


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("NETCV_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InvalidParameterError(f"NETCV_SEED is not an integer: {env!r}")
    return 0


def _make_cv(args, seed):
    if args.variant == "single":
        return CvConfig(scheme="vfold", v=args.folds, w=args.w, seed=seed)
    scheme = "vote" if args.variant == "vote" else "average"
    return CvConfig(scheme=scheme, v=args.folds, w=args.w, reps=args.reps, seed=seed)


def _make_pen(args):
    return PenaltyConfig(lam=args.lam, rule=args.lambda_rule)


def _config_echo(args, seed):
    # output path and thread count cannot affect results, so they are left
    # out to keep repeated runs byte-identical
    skip = {"command", "func", "seed", "output", "threads"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["seed"] = seed
    return cfg


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _selection_report(args, seed, result, pair=None):
    report = {
        "command": args.command,
        "config": _config_echo(args, seed),
        "chosen": result.chosen.label(),
        "loss_table": result.table,
        "k_hat": result.k_hat,
        "trace": result.trace,
    }
    if pair is not None:
        report["config"]["pair"] = pair
    if args.output_format == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "mean_penalized_loss", "chosen"])
    for model in sorted(result.table):
        writer.writerow([model, repr(result.table[model]),
                         int(model == result.chosen.label())])
    return buf.getvalue()


def _cmd_select(args):
    seed = _resolve_seed(args)
    graph, _ = load_graph(args.input, args.format)
    cv = _make_cv(args, seed)
    pen = _make_pen(args)
    if args.pair is not None:
        pair = _normalize_pair(args.pair)
        if pair == "within-sbm":
            raise InvalidParameterError("use estimate-k for the within-SBM search")
        result = class_selection(graph, pair, cv, pen,
                                 known_theta=np.ones(graph.n)
                                 if pair == "dcbm-vs-graphon" else None,
                                 k_max=args.kmax, fixed_k=args.fixed_k)
    else:
        pair = None
        cands = [_parse_candidate(t) for t in args.candidates.split(",") if t.strip()]
        result = run_selection(graph, cands, cv, pen)
    _emit(_selection_report(args, seed, result, pair=pair), args.output)
    return 0


def _cmd_estimate_k(args):
    seed = _resolve_seed(args)
    graph, _ = load_graph(args.input, args.format)
    cv = _make_cv(args, seed)
    pen = _make_pen(args)
    k_hat, trace = adaptive_k(graph, cv, pen, k_max=args.kmax)
    report = {
        "command": args.command,
        "config": _config_echo(args, seed),
        "k_hat": k_hat,
        "trace": trace,
    }
    if args.output_format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "mean_penalized_loss"])
        for k, loss in trace:
            writer.writerow([k, repr(loss)])
        text = buf.getvalue()
    _emit(text, args.output)
    return 0


def _cmd_simulate(args):
    seed = _resolve_seed(args)
    scenario = Scenario(args.scenario, args.n)
    pair = _normalize_pair(args.pair) if args.pair else \
        _DEFAULT_SCENARIO_PAIR[scenario.name]
    # --reps counts Monte-Carlo trials here; vote/average keep their default
    # internal replication count
    if args.variant == "single":
        cv = CvConfig(scheme="vfold", v=args.folds, w=args.w)
    else:
        scheme = "vote" if args.variant == "vote" else "average"
        cv = CvConfig(scheme=scheme, v=args.folds, w=args.w)
    method = MethodConfig(pair=pair, cv=cv, pen=_make_pen(args), k_max=args.kmax)
    table = monte_carlo(scenario, method, args.reps, seed, threads=args.threads)
    if args.output_format == "csv":
        text = frequency_csv(table, scenario, method.name)
    else:
        payload = json.loads(frequency_json(table, scenario, method.name))
        payload["config"] = _config_echo(args, seed)
        payload["config"]["pair"] = pair
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    _emit(text, args.output)
    return 0


_COMMANDS = {
    "select": _cmd_select,
    "estimate-k": _cmd_estimate_k,
    "simulate": _cmd_simulate,
}


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except InvalidParameterError as exc:
        print(f"netcv: configuration error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, InvalidInputError, OSError) as exc:
        print(f"netcv: data error: {exc}", file=sys.stderr)
        return 3
    except NetcvError as exc:
        print(f"netcv: error: {exc}", file=sys.stderr)
        return 3


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
