"""Command-line entry point: ``abgc {cluster,eval,gen}`` (plus a hidden ``oracle``)."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import oracle
from .datagen import planted_partition_abg, running_example_fixture
from .graph import GraphError, read_attributes, read_labels, write_attributes, write_edges, write_labels
from .metrics import metrics_report
from .pipeline import PipelineConfig, run_pipeline


def _dim(value: str) -> Optional[int]:
    if value.lower() == "off":
        return None
    try:
        d = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dim expects an integer or 'off', got {value!r}") from None
    if d < 1:
        raise argparse.ArgumentTypeError("--dim must be >= 1")
    return d


def _format_metrics(m: dict, **extra) -> str:
    lines = [f"{key}={m[key]:.6f}" for key in ("acc", "nmi", "ari")]
    lines += [f"{key}={val}" for key, val in extra.items()]
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="abgc", description="k-clustering of attributed bipartite graphs"
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, metavar="{cluster,eval,gen}")

    c = sub.add_parser("cluster", help="cluster the target side of a graph")
    c.add_argument("--edges", required=True, type=Path)
    c.add_argument("--attrs-u", required=True, type=Path)
    c.add_argument("--attrs-v", type=Path)
    c.add_argument("--labels", type=Path, help="ground-truth labels for evaluation")
    c.add_argument("--k", required=True, type=int)
    c.add_argument("--alpha", type=float, default=0.6)
    c.add_argument("--gamma", type=int, default=5)
    c.add_argument("--dim", type=_dim, default=64, help="reduced attribute dimension or 'off'")
    c.add_argument("--tf", type=int, default=5)
    c.add_argument("--tg", type=int, default=20)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--target-side", choices=("u", "v", "U", "V"), default="u")
    c.add_argument("--out", type=Path, help="label output file (default: stdout)")
    c.add_argument("--metrics-out", type=Path)

    e = sub.add_parser("eval", help="score predicted labels against ground truth")
    e.add_argument("pred", type=Path)
    e.add_argument("truth", type=Path)

    g = sub.add_parser("gen", help="write a planted-partition graph")
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--n-u", type=int, default=600)
    g.add_argument("--n-v", type=int, default=600)
    g.add_argument("--p-in", type=float, default=0.3)
    g.add_argument("--p-out", type=float, default=0.01)
    g.add_argument("--attr-dim", type=int, default=32)
    g.add_argument("--sigma", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--prefix", type=Path, required=True,
                   help="writes <prefix>.edges, <prefix>.attrs and <prefix>.labels")

    o = sub.add_parser("oracle")
    # debugging aid: keep it out of the help listing
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    o.add_argument("what", choices=("fixture", "msa", "partition"))
    o.add_argument("--features", type=Path, help="attribute-format file of unit feature rows")
    o.add_argument("--k", type=int, default=3)
    return p


def _cmd_cluster(args) -> int:
    cfg = PipelineConfig(
        k=args.k, alpha=args.alpha, gamma=args.gamma, reduced_dim=args.dim,
        t_f=args.tf, t_g=args.tg, seed=args.seed, target_side=args.target_side.upper(),
        edges=args.edges, attrs_u=args.attrs_u, attrs_v=args.attrs_v,
        labels=args.labels, out=args.out, metrics_out=args.metrics_out,
    )
    result = run_pipeline(cfg)
    if args.out is None:
        sys.stdout.write("".join(f"{int(x)}\n" for x in result.labels))
    if result.metrics is not None and args.metrics_out is None:
        sys.stderr.write(_format_metrics(result.metrics))
    return 0


def _cmd_eval(args) -> int:
    pred = read_labels(args.pred)
    truth = read_labels(args.truth)
    m = metrics_report(truth, pred)
    k = len(np.unique(np.concatenate([truth, pred])))
    sys.stdout.write(_format_metrics(m, k=k, n=truth.size))
    return 0


def _cmd_gen(args) -> int:
    g, labels = planted_partition_abg(
        args.k, args.n_u, args.n_v, args.p_in, args.p_out, args.attr_dim, args.sigma, args.seed
    )
    prefix = str(args.prefix)
    write_edges(prefix + ".edges", g)
    write_attributes(prefix + ".attrs", g.attrs_u)
    write_labels(prefix + ".labels", labels)
    return 0


def _cmd_oracle(args) -> int:
    if args.what == "fixture" or args.features is None:
        z, s_pub, part = running_example_fixture()
    else:
        z = read_attributes(args.features)
        s_pub, part = None, None
    s = oracle.exact_msa_matrix(z)
    if args.what in ("fixture", "msa"):
        np.savetxt(sys.stdout, s, fmt="%.6f")
        if s_pub is not None:
            sys.stdout.write(f"max_abs_dev_vs_published={np.abs(s - s_pub).max():.6f}\n")
    if args.what in ("fixture", "partition"):
        target = s_pub if (args.what == "fixture" and s_pub is not None) else s
        best = oracle.brute_force_best_partition(target, args.k)
        sys.stdout.write("partition=" + " ".join(str(int(x)) for x in best) + "\n")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    handlers = {"cluster": _cmd_cluster, "eval": _cmd_eval, "gen": _cmd_gen, "oracle": _cmd_oracle}
    try:
        return handlers[args.command](args)
    except (GraphError, ValueError, OSError) as exc:
        sys.stderr.write(f"abgc: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
