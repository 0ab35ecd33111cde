"""Command-line entry point: ``hyperline <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 input parse error, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bench import bench_grid, estimate_naive_seconds, strong_scaling, weak_scaling
from .errors import ConfigError, ParseError, ResourceLimitError
from .generate import generate_synthetic
from .hypergraph import simplify
from .idmap import IdMap
from .io import load_hypergraph, read_edge_list, write_matrix_market, write_tsv_pairs
from .linegraph import LineGraph
from .pipeline import METRICS, PipelineConfig, _compute_metrics, run_pipeline

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_RESOURCE = 0, 2, 3, 4
log = logging.getLogger("hyperline")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _metric_list(text: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in names if x not in METRICS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown metrics {bad}; choose from {','.join(METRICS)}")
    return names


def _add_input(p):
    p.add_argument("--input", required=True, help="hypergraph file")
    p.add_argument("--format", choices=("mm", "tsv"), default="tsv")


def _add_build_flags(p, *, algo: bool, s_list: bool):
    _add_input(p)
    if algo:
        p.add_argument("--algo", default="hashmap",
                       choices=("naive", "intersect", "intersection", "hashmap", "ensemble", "spgemm"))
    p.add_argument("--s", type=int, default=None)
    if s_list:
        p.add_argument("--s-list", type=_int_list, default=None, help="e.g. 1,2,3")
    p.add_argument("--partition", choices=("blocked", "cyclic"), default="blocked")
    p.add_argument("--chunk", type=int, default=64)
    p.add_argument("--relabel", choices=("none", "asc", "desc"), default="asc")
    p.add_argument("--triangle", choices=("upper", "lower"), default="upper")
    p.add_argument("--tls", choices=("per-iteration", "preallocated"), default="per-iteration")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--squeeze", action="store_true")
    p.add_argument("--toplex", action="store_true", help="simplify to toplexes before construction")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--metrics", type=_metric_list, default=())
    p.add_argument("--dist-source", type=int, default=None, help="original ID of the distance source")
    p.add_argument("--normalized", action="store_true", help="normalized betweenness")
    p.add_argument("--spgemm-cap", type=int, default=8 * 2**30, help="bytes")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--timing-json", default=None)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperline", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct s-line graph(s)")
    _add_build_flags(p, algo=True, s_list=True)
    p = sub.add_parser("ensemble", help="construct L_s for several s in one counting pass")
    _add_build_flags(p, algo=False, s_list=True)
    p = sub.add_parser("sclique", help="construct the s-clique graph (s-line graph of the dual)")
    _add_build_flags(p, algo=False, s_list=False)

    p = sub.add_parser("toplex", help="drop hyperedges contained in another hyperedge")
    _add_input(p)
    p.add_argument("--out", required=True, help="output hypergraph file")
    p.add_argument("--out-format", choices=("mm", "tsv"), default="tsv")

    p = sub.add_parser("metrics", help="s-metrics of a line graph edge list")
    p.add_argument("--input", required=True, help="edge list written by build")
    p.add_argument("--metrics", type=_metric_list, default=METRICS)
    p.add_argument("--dist-source", type=int, default=None)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="JSON output (stdout when omitted)")

    p = sub.add_parser("gen", help="write a seeded synthetic hypergraph")
    p.add_argument("--m", type=int, required=True, help="number of hyperedges")
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--exponent", type=float, default=2.1)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--blocks", type=int, default=0, help="planted overlapping windows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("mm", "tsv"), default="tsv")

    p = sub.add_parser("bench", help="timing grid and scaling experiments")
    p.add_argument("--input", default=None, help="hypergraph file; synthetic when omitted")
    p.add_argument("--format", choices=("mm", "tsv"), default="tsv")
    p.add_argument("--m", type=int, default=50_000)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--exponent", type=float, default=2.1)
    p.add_argument("--max-size", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=int, default=8)
    p.add_argument("--mode", choices=("grid", "strong", "weak"), default="grid")
    p.add_argument("--grid", default="1CN,2BA", help="configuration codes, e.g. 1CN,2BA,2CN")
    p.add_argument("--baseline", default=None, help="code used as speedup reference")
    p.add_argument("--threads", type=_int_list, default=[1, 2, 4])
    p.add_argument("--chunk", type=int, default=64)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--naive-sample", type=int, default=0,
                   help="also estimate the all-pairs time from this many source edges")
    p.add_argument("--csv", default=None)
    p.add_argument("--json", default=None)
    return parser


def _config(args, algorithm: str) -> PipelineConfig:
    s_list = getattr(args, "s_list", None)
    return PipelineConfig(
        input=args.input, format=args.format, s=args.s, s_list=s_list, algorithm=algorithm,
        partition=args.partition, chunk=args.chunk, relabel=args.relabel, triangle=args.triangle,
        prune=not args.no_prune, squeeze=args.squeeze, toplex=args.toplex, workers=args.threads,
        tls=args.tls, metrics=tuple(args.metrics), out_dir=args.out, timing_json=args.timing_json,
        seed=args.seed, spgemm_cap=args.spgemm_cap, normalized_bc=args.normalized,
        dist_source=args.dist_source)


def _report(result) -> None:
    for s, g in result.linegraphs.items():
        print(f"s={s}\tnodes={g.num_nodes}\tedges={g.num_edges}")
    t = result.timing
    print(f"time\tpreprocessing={t.preprocessing:.4f}\ts_overlap={t.s_overlap:.4f}\t"
          f"squeeze={t.squeeze:.4f}\tmetrics={t.metrics:.4f}\ttotal={t.total:.4f}")


def _cmd_build(args) -> int:
    algo = {"ensemble": "ensemble", "sclique": "sclique"}.get(args.command, getattr(args, "algo", None))
    if args.command == "build" and algo != "ensemble" and args.s_list:
        if args.s is not None:
            raise ConfigError("give either --s or --s-list, not both")
        if len(args.s_list) != 1:
            raise ConfigError("several s values need --algo ensemble or the ensemble subcommand")
        args.s, args.s_list = args.s_list[0], None
    _report(run_pipeline(_config(args, algo)))
    return EXIT_OK


def _cmd_toplex(args) -> int:
    h = load_hypergraph(args.input, args.format)
    simple, kept = simplify(h)
    (write_matrix_market if args.out_format == "mm" else write_tsv_pairs)(simple, args.out)
    print(f"toplexes={simple.num_edges} of {h.num_edges}")
    return EXIT_OK


def _header_int(meta: dict, key: str):
    value = meta.get(key)
    return int(value) if value not in (None, "None") else None


def _cmd_metrics(args) -> int:
    edges, meta = read_edge_list(args.input)
    ids = np.unique(edges.reshape(-1))
    num_nodes = _header_int(meta, "nodes")
    if num_nodes is not None and num_nodes > ids.size and (ids.size == 0 or ids[-1] < num_nodes):
        # squeezed output: nodes are exactly 0..nodes-1, isolated ones included
        ids = np.arange(num_nodes, dtype=np.int64)
    id_map = IdMap.from_ids(ids)
    compact = np.searchsorted(id_map.forward, edges)
    s = _header_int(meta, "s")
    g = LineGraph(s, compact.reshape(-1, 2), np.arange(len(id_map), dtype=np.int64), id_map)
    cfg = PipelineConfig(input=args.input, metrics=tuple(args.metrics), workers=args.threads,
                         normalized_bc=args.normalized, dist_source=args.dist_source)
    labels = np.arange(int(ids[-1]) + 1 if ids.size else 0)
    doc = {name: {str(s): value} for name, value in _compute_metrics(cfg, g, labels).items()}
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_gen(args) -> int:
    try:
        h = generate_synthetic(args.m, args.n, args.exponent, args.max_size, args.seed,
                               blocks=args.blocks, min_size=args.min_size)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    (write_matrix_market if args.format == "mm" else write_tsv_pairs)(h, args.out)
    print(f"edges={h.num_edges}\tvertices={h.num_vertices}\tincidences={h.nnz}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    def make(scale: int = 1):
        if args.input:
            return load_hypergraph(args.input, args.format)
        try:
            return generate_synthetic(args.m * scale, args.n * scale, args.exponent, args.max_size, args.seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    grid = [x for x in args.grid.split(",") if x.strip()]
    if args.mode == "grid":
        report = bench_grid(make(), grid, args.s, threads=args.threads, baseline=args.baseline,
                            repeats=args.repeats, chunk=args.chunk)
    elif args.mode == "strong":
        report = strong_scaling(make(), grid[0], args.s, threads=args.threads,
                                repeats=args.repeats, chunk=args.chunk)
    else:
        if args.input:
            raise ConfigError("weak scaling needs synthetic input (omit --input)")
        report = weak_scaling(make, grid[0], args.s, threads=args.threads,
                              repeats=args.repeats, chunk=args.chunk)
    if args.csv:
        report.write_csv(args.csv)
    if args.json:
        report.write_json(args.json)
    print("config\tthreads\tscale\tmedian_s\tspeedup\tviolation")
    for r in report.rows:
        print(f"{r['config']}\t{r['threads']}\t{r['input_scale']}\t{r['median_s']:.4f}\t"
              f"{r['speedup']:.2f}\t{r['violation']}")
    if args.naive_sample:
        est = estimate_naive_seconds(make(), args.s, sample=args.naive_sample, seed=args.seed)
        print(f"naive_estimate_s\t{est:.2f}")
    return EXIT_OK


_COMMANDS = {
    "build": _cmd_build, "ensemble": _cmd_build, "sclique": _cmd_build,
    "toplex": _cmd_toplex, "metrics": _cmd_metrics, "gen": _cmd_gen, "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
