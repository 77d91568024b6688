"""Command-line front end.

Subcommands: ``detect`` (extract communities from an edge list),
``generate`` (benchmark graphs with ground truth), ``eval`` (score a
prediction against a truth file), ``sweep-alpha`` (stability of the
detection across significance levels), and ``oracle`` (Monte-Carlo check
of the binomial boundary-count approximation).

Exit codes: 0 on success, 1 on domain or I/O errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
import time
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import bench, metrics
from .detect import (
    DEFAULT_ALPHA,
    DEFAULT_MAX_ITER,
    SEED_MAX_DEGREE,
    DetectionResult,
    essc,
    read_communities,
    summarize,
    write_communities,
)
from .errors import EsscError
from .graph import MultiGraph, parse_edge_list, write_edge_list


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbits(63)
        print(f"rng-seed: {seed}")
    return seed


def _write_report(path: str | None, report: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(report, indent=2) + "\n")


def _load_graph(path: str, simplify: bool) -> MultiGraph:
    g = parse_edge_list(Path(path).read_text())
    return g.simplified() if simplify else g


def _result_report(g: MultiGraph, result: DetectionResult) -> dict:
    stats = summarize(g, result)
    return {
        "n": g.n,
        "edge_count": g.edge_count,
        "alpha": result.alpha,
        "summary": asdict(stats),
        "community_sizes": [len(c) for c in result.communities],
        "seed_log": [asdict(rec) for rec in result.seed_log],
    }


def _cmd_detect(args) -> int:
    started = time.perf_counter()
    g = _load_graph(args.input, args.simplify)
    strategy = args.seed_strategy.replace("-", "_")
    result = essc(g, alpha=args.alpha, seed_strategy=strategy, max_iter=args.max_iter)
    Path(args.output).write_text(
        write_communities(result.communities, result.background, g.labels)
    )
    report = {
        "command": "detect",
        "parameters": {
            "input": args.input,
            "alpha": args.alpha,
            "seed_strategy": strategy,
            "max_iter": args.max_iter,
            "simplify": args.simplify,
            "threads": args.threads,
            "output": args.output,
        },
        "duration_seconds": time.perf_counter() - started,
        **_result_report(g, result),
    }
    _write_report(args.summary, report)
    stats = report["summary"]
    print(
        f"communities: {stats['community_count']}  "
        f"background: {len(result.background)}/{g.n}"
    )
    return 0


_GENERATE_KINDS = {
    "er": "er",
    "config": "config",
    "sbm-single": "sbm_single",
    "lfr": "lfr",
    "lfr-bg": "lfr_bg",
}


def _spec_from_args(args) -> bench.BenchmarkSpec:
    kind = _GENERATE_KINDS[args.kind]
    fields = {}
    for name in ("dbar", "tau1", "tau2", "mu", "rho", "pi", "kappa", "theta"):
        fields[name] = getattr(args, name, None)
    if kind == "sbm_single" and fields["theta"] is None:
        fields["theta"] = bench.single_embedded_theta(
            args.n, fields["pi"], fields["kappa"], fields.pop("dbar")
        )
        fields["dbar"] = None
    if kind == "lfr" and fields["rho"] is None:
        fields["rho"] = 0.0
    return bench.BenchmarkSpec(
        kind=kind,
        n=args.n,
        s1=getattr(args, "smin", None),
        s2=getattr(args, "smax", None),
        rng_seed=args.rng_seed,
        **fields,
    )


def _cmd_generate(args) -> int:
    started = time.perf_counter()
    args.rng_seed = _resolve_seed(args.rng_seed)
    spec = _spec_from_args(args)
    g, truth = bench.generate(spec)
    Path(args.out).write_text(write_edge_list(g))
    if args.truth:
        Path(args.truth).write_text(
            write_communities(truth.communities, truth.background, g.labels)
        )
    report = {
        "command": f"generate {args.kind}",
        "parameters": {
            k: v for k, v in vars(args).items() if k not in ("func", "kind")
        },
        "duration_seconds": time.perf_counter() - started,
        "n": g.n,
        "edge_count": g.edge_count,
        "mean_degree": float(g.degrees.mean()) if g.n else 0.0,
        "planted_communities": len(truth.communities),
    }
    _write_report(args.report, report)
    print(
        f"wrote {args.out}: n={g.n} edges={g.edge_count} "
        f"communities={len(truth.communities)}"
    )
    return 0


def _load_cover(path: str) -> tuple[list[list[str]], list[str]]:
    return read_communities(Path(path).read_text())


def _tokens_to_cover(
    raw: tuple[list[list[str]], list[str]], key: dict[str, int]
) -> tuple[list[frozenset[int]], frozenset[int]]:
    comms = [frozenset(key[t] for t in line) for line in raw[0]]
    bg = frozenset(key[t] for t in raw[1])
    return comms, bg


def _evaluate(metric: str, pred_path: str, truth_path: str) -> float:
    raw_pred = _load_cover(pred_path)
    raw_truth = _load_cover(truth_path)
    tokens = set()
    for raw in (raw_pred, raw_truth):
        for line in raw[0]:
            tokens.update(line)
        tokens.update(raw[1])
    # match vertices by label; sort numerically when every label is an integer
    try:
        ordered = sorted(tokens, key=int)
    except ValueError:
        ordered = sorted(tokens)
    key = {t: i for i, t in enumerate(ordered)}
    pred = _tokens_to_cover(raw_pred, key)
    truth = _tokens_to_cover(raw_truth, key)

    if metric == "gnmi":
        return metrics.gnmi_cover(pred, truth)
    if metric == "nmi":
        parts = []
        for comms, bg in (pred, truth):
            blocks = list(comms)
            if bg:
                blocks.append(bg)
            parts.append(blocks)
        return metrics.nmi_partition(parts[0], parts[1])
    if metric == "bg-jaccard":
        return metrics.jaccard(pred[1], truth[1])
    # mean-best-match: average best Jaccard against each true community
    truth_comms = [c for c in truth[0] if c]
    if not truth_comms:
        raise ValueError("truth file contains no non-empty communities")
    return float(
        np.mean([metrics.best_match_score(pred[0], c) for c in truth_comms])
    )


def _cmd_eval(args) -> int:
    started = time.perf_counter()
    score = _evaluate(args.metric, args.pred, args.truth)
    report = {
        "command": "eval",
        "parameters": {"pred": args.pred, "truth": args.truth, "metric": args.metric},
        "duration_seconds": time.perf_counter() - started,
        "score": score,
    }
    _write_report(args.report, report)
    print(score)
    return 0


def sweep_alpha(
    g: MultiGraph,
    alphas: Sequence[float],
    reference_alpha: float,
    seed_strategy: str = SEED_MAX_DEGREE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> list[dict]:
    """Run detection at each level and report stability against a reference.

    Each row carries the summary statistics at that alpha plus the
    Jaccard overlap of its background with the reference run's
    background.
    """
    if not alphas:
        raise ValueError("alphas must be non-empty")
    if reference_alpha not in alphas:
        raise ValueError("reference_alpha must be one of the swept alphas")
    runs = [
        (a, essc(g, alpha=a, seed_strategy=seed_strategy, max_iter=max_iter))
        for a in alphas
    ]
    ref_background = next(res.background for a, res in runs if a == reference_alpha)
    rows = []
    for a, res in runs:
        stats = summarize(g, res)
        row = {"alpha": a, **asdict(stats)}
        row["background_jaccard"] = metrics.jaccard(res.background, ref_background)
        rows.append(row)
    return rows


def _cmd_sweep(args) -> int:
    started = time.perf_counter()
    g = _load_graph(args.input, args.simplify)
    alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    strategy = args.seed_strategy.replace("-", "_")
    rows = sweep_alpha(g, alphas, args.reference_alpha, strategy, args.max_iter)
    report = {
        "command": "sweep-alpha",
        "parameters": {
            "input": args.input,
            "alphas": alphas,
            "reference_alpha": args.reference_alpha,
            "seed_strategy": strategy,
            "max_iter": args.max_iter,
            "simplify": args.simplify,
        },
        "duration_seconds": time.perf_counter() - started,
        "rows": rows,
    }
    _write_report(args.output, report)
    for row in rows:
        print(
            f"alpha={row['alpha']:.4g} communities={row['community_count']} "
            f"background={row['background_proportion']:.4f} "
            f"background_jaccard={row['background_jaccard']:.4f}"
        )
    return 0


def _cmd_oracle(args) -> int:
    started = time.perf_counter()
    args.rng_seed = _resolve_seed(args.rng_seed)
    rng = np.random.default_rng(args.rng_seed)
    degrees = bench.sample_powerlaw_degrees(args.n, args.tau1, args.dbar, rng)
    if args.target_degree is not None:
        target = args.target_degree
    else:
        target = float(np.median(degrees))
    u = int(np.argmin(np.abs(degrees - target)))
    others = np.array([v for v in range(args.n) if v != u])
    size = int(round(args.set_fraction * args.n))
    size = max(1, min(size, len(others)))
    members = rng.choice(others, size=size, replace=False)
    empirical = metrics.empirical_boundary_distribution(
        degrees, u, members.tolist(), args.samples, rng
    )
    p_block = float(degrees[members].sum() / degrees.sum())
    tv = metrics.tv_distance(empirical, metrics.binomial_pmf(int(degrees[u]), p_block))
    report = {
        "command": "oracle",
        "parameters": {k: v for k, v in vars(args).items() if k != "func"},
        "duration_seconds": time.perf_counter() - started,
        "vertex_degree": int(degrees[u]),
        "set_size": size,
        "block_probability": p_block,
        "tv_distance": tv,
    }
    _write_report(args.report, report)
    print(tv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="essc",
        description="Extract statistically significant communities and "
        "benchmark the extraction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="extract communities from an edge list")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA,
                   help="false discovery rate level (default 0.05)")
    p.add_argument("--output", required=True, help="community file to write")
    p.add_argument("--summary", help="JSON run report to write")
    p.add_argument("--seed-strategy", default="max-degree",
                   choices=["max-degree", "all-neighborhoods"])
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--simplify", action="store_true",
                   help="collapse multi-edges and drop self-loops first")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap; results do not depend on it "
                   "(this build computes sequentially)")
    p.set_defaults(func=_cmd_detect)

    gen = sub.add_parser("generate", help="write a benchmark graph and its truth")
    gsub = gen.add_subparsers(dest="kind", required=True)

    def common(gp, truth_required=True):
        gp.add_argument("--n", type=int, required=True)
        gp.add_argument("--rng-seed", type=int, default=None)
        gp.add_argument("--out", required=True, help="edge-list file to write")
        gp.add_argument("--truth", required=truth_required,
                        help="ground-truth community file to write")
        gp.add_argument("--report", help="JSON run report to write")
        gp.set_defaults(func=_cmd_generate)

    gp = gsub.add_parser("er")
    gp.add_argument("--dbar", type=float, required=True)
    common(gp, truth_required=False)

    gp = gsub.add_parser("config")
    gp.add_argument("--dbar", type=float, required=True)
    gp.add_argument("--tau1", type=float, required=True)
    common(gp, truth_required=False)

    gp = gsub.add_parser("sbm-single")
    gp.add_argument("--pi", type=float, required=True)
    gp.add_argument("--kappa", type=float, required=True)
    group = gp.add_mutually_exclusive_group(required=True)
    group.add_argument("--theta", type=float)
    group.add_argument("--dbar", type=float,
                       help="choose theta to hit this expected mean degree")
    common(gp)

    for kind in ("lfr", "lfr-bg"):
        gp = gsub.add_parser(kind)
        gp.add_argument("--dbar", type=float, required=True)
        gp.add_argument("--tau1", type=float, required=True)
        gp.add_argument("--tau2", type=float, required=True)
        gp.add_argument("--mu", type=float, required=True)
        gp.add_argument("--smin", type=int, required=True)
        gp.add_argument("--smax", type=int, required=True)
        if kind == "lfr":
            gp.add_argument("--rho", type=float, default=0.0)
        else:
            gp.add_argument("--pi", type=float, required=True)
        common(gp)

    p = sub.add_parser("eval", help="score a prediction against ground truth")
    p.add_argument("--pred", required=True, help="predicted community file")
    p.add_argument("--truth", required=True, help="ground-truth community file")
    p.add_argument("--metric", required=True,
                   choices=["gnmi", "nmi", "bg-jaccard", "mean-best-match"])
    p.add_argument("--report", help="JSON run report to write")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep-alpha", help="detection stability across levels")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--alphas",
                   default="0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.10",
                   help="comma-separated levels")
    p.add_argument("--reference-alpha", type=float, default=0.05)
    p.add_argument("--seed-strategy", default="max-degree",
                   choices=["max-degree", "all-neighborhoods"])
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--output", help="JSON report to write")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="Monte-Carlo check of the binomial "
                       "approximation to the boundary-count law")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau1", type=float, required=True)
    p.add_argument("--dbar", type=float, required=True)
    p.add_argument("--set-fraction", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--target-degree", type=float, default=None,
                   help="pick the test vertex closest to this degree "
                   "(default: the median degree)")
    p.add_argument("--report", help="JSON run report to write")
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EsscError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
