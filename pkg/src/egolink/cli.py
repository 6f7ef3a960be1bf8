"""Command-line interface.

Subcommands: ``generate`` (synthetic probability matrix + sampled graph),
``sample`` (draw an ego sample from an edge list), ``predict`` (fit one
method on a sample), ``evaluate`` (metrics from score and truth files),
``experiment`` (full grid from a YAML spec), ``summarize`` (aggregate a
results CSV). Exit codes: 0 success, 2 spec/argument error, 3 ingestion
error.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from .baselines import MaskedMatrix, cur_estimate, mc_nuclear_estimate, ns_estimate, usvt_estimate
from .errors import EgolinkError, IngestionError, InvalidArgumentError
from .fileio import (
    load_edge_list,
    load_ego_sample,
    load_matrix_csv,
    save_edge_list,
    save_ego_sample,
    save_matrix_csv,
)
from .generators import FAMILIES, ModelSpec, generate_probability, sample_adjacency
from .harness import (
    METHODS,
    load_experiment_spec,
    run_experiment,
    read_results_csv,
    summarize,
    write_results_csv,
    write_summary_csv,
)
from .metrics import evaluate
from .network import AdjacencyMatrix, ProbabilityMatrix, ScoreMatrix, numerical_rank, sample_ego
from .subspace import SeConfig, se_estimate, select_rank

SPEC_ERROR = 2
INGESTION_ERROR = 3


def _default_workers() -> int:
    raw = os.environ.get("EGOLINK_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_generate(args) -> int:
    spec = ModelSpec(args.family, args.nodes, args.degree, seed=args.seed)
    rng = np.random.default_rng(spec.seed)
    p = generate_probability(spec, rng)
    a = sample_adjacency(p, rng)
    save_matrix_csv(p.entries, f"{args.out}_p.csv")
    save_edge_list(a, f"{args.out}_edges.txt")
    print(f"wrote {args.out}_p.csv and {args.out}_edges.txt "
          f"(N={a.n_nodes}, edges={a.n_edges}, avg degree={a.average_degree:.2f})")
    return 0


def _cmd_sample(args) -> int:
    a, _ = load_edge_list(args.edges)
    if args.n is not None:
        n = args.n
    else:
        n = int(round(args.rho * a.n_nodes))
    rng = np.random.default_rng(args.seed)
    ego = sample_ego(a, n, rng)
    save_ego_sample(ego, args.out)
    print(f"wrote {args.out} (N={a.n_nodes}, sampled {n} rows)")
    return 0


def _cmd_predict(args) -> int:
    ego = load_ego_sample(args.sample)
    if args.method == "se":
        cfg = SeConfig(rank=None if args.rank == "auto" else int(args.rank))
        rank = cfg.rank
        if rank is None:
            rank = select_rank(ego, cfg, np.random.default_rng(args.seed))
            print(f"selected rank {rank}")
        scores = se_estimate(ego, cfg.with_rank(rank))
    elif args.method == "cur":
        scores = cur_estimate(ego)
    elif args.method == "usvt":
        scores = usvt_estimate(MaskedMatrix.from_ego_sample(ego))
    elif args.method == "mc":
        scores = mc_nuclear_estimate(MaskedMatrix.from_ego_sample(ego))
    else:
        scores = ns_estimate(ego)
    save_matrix_csv(scores.entries, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    scores = ScoreMatrix(load_matrix_csv(args.scores))
    ego = load_ego_sample(args.sample)
    if args.truth.endswith(".csv"):
        truth_entries = load_matrix_csv(args.truth)
        if not np.isin(truth_entries, (0.0, 1.0)).all():
            raise InvalidArgumentError(
                "truth CSV must be a binary adjacency; pass probabilities via --probability"
            )
        a = AdjacencyMatrix(truth_entries)
    else:
        a, _ = load_edge_list(args.truth)
    p = ProbabilityMatrix(load_matrix_csv(args.probability)) if args.probability else None
    result = evaluate(scores, a, ego.indices, p)
    print(f"pairs={result.n_pairs} positives={result.n_positive}")
    print(f"auc={'' if result.auc is None else repr(result.auc)}")
    print(f"kendall_tau={'' if result.kendall_tau is None else repr(result.kendall_tau)}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("auc,kendall_tau,n_pairs,n_positive\n")
            auc = "" if result.auc is None else repr(result.auc)
            tau = "" if result.kendall_tau is None else repr(result.kendall_tau)
            fh.write(f"{auc},{tau},{result.n_pairs},{result.n_positive}\n")
    return 0


def _cmd_experiment(args) -> int:
    spec = load_experiment_spec(args.spec)
    if args.seed is not None:
        spec = dataclasses.replace(spec, base_seed=args.seed)
    rows = run_experiment(spec, workers=args.workers)
    timings_fh = open(args.timings, "w") if args.timings else None
    try:
        with open(args.out, "w") as fh:
            write_results_csv(rows, fh, timings_fh)
    finally:
        if timings_fh is not None:
            timings_fh.close()
    print(f"wrote {args.out}")
    return 0


def _cmd_summarize(args) -> int:
    rows = read_results_csv(args.results)
    with open(args.out, "w") as fh:
        write_summary_csv(summarize(rows), fh)
    print(f"wrote {args.out}")
    return 0


def _cmd_describe(args) -> int:
    a, _ = load_edge_list(args.edges)
    print(f"N={a.n_nodes} edges={a.n_edges} "
          f"avg_degree={a.average_degree:.4g} numerical_rank={numerical_rank(a):.4g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="egolink")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic probability matrix and sampled graph")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--degree", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output prefix")
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("sample", help="draw an ego sample from an edge-list file")
    s.add_argument("--edges", required=True)
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--rho", type=float, help="sampling rate in (0,1)")
    grp.add_argument("--n", type=int, help="number of sampled nodes")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_sample)

    p = sub.add_parser("predict", help="fit one method on a saved ego sample")
    p.add_argument("--sample", required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--rank", default="auto", help="rank for se: integer or 'auto'")
    p.add_argument("--seed", type=int, default=0, help="seed for rank selection")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    e = sub.add_parser("evaluate", help="metrics from score and truth files")
    e.add_argument("--scores", required=True, help="score matrix CSV")
    e.add_argument("--truth", required=True, help="true adjacency (edge list or binary CSV)")
    e.add_argument("--sample", required=True, help="ego sample file defining unobserved pairs")
    e.add_argument("--probability", help="true probability matrix CSV (enables Kendall tau)")
    e.add_argument("--out")
    e.set_defaults(func=_cmd_evaluate)

    x = sub.add_parser("experiment", help="run a full grid from a YAML spec")
    x.add_argument("--spec", required=True)
    x.add_argument("--out", required=True)
    x.add_argument("--seed", type=int, help="override the spec's base seed")
    x.add_argument("--workers", type=int, default=_default_workers())
    x.add_argument("--timings", help="also write per-fit wall times to this CSV")
    x.add_argument("--format", choices=("csv",), default="csv")
    x.set_defaults(func=_cmd_experiment)

    m = sub.add_parser("summarize", help="aggregate a results CSV into plot-ready curves")
    m.add_argument("--results", required=True)
    m.add_argument("--out", required=True)
    m.set_defaults(func=_cmd_summarize)

    d = sub.add_parser("describe", help="basic statistics of an edge-list file")
    d.add_argument("--edges", required=True)
    d.set_defaults(func=_cmd_describe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INGESTION_ERROR
    except (InvalidArgumentError, EgolinkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SPEC_ERROR


if __name__ == "__main__":
    sys.exit(main())
