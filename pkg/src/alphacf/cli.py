"""Command-line front end.

Exit codes: 0 success, 1 runtime failure (convergence, budget), 2 usage or
parse error. Every option default can be overridden by an environment
variable ``ALPHACF_<OPTION>`` (e.g. ``ALPHACF_SEED=3``).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numba

from . import analysis, io
from .centrality import TABLE_MEASURES, compute_measure, parse_measure, pair_contributions
from .errors import AlphaCFError, ParameterError, ParseError
from .graph import GENERATORS, GraphStats, compute_stats, format_edge_list, generate, read_graph
from .solver import METHODS, SolverConfig

log = logging.getLogger("alphacf")
ENV_PREFIX = "ALPHACF_"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None
    alpha: float | None
    pairs: int
    epsilon: float
    seed: int
    method: str
    truncated: bool
    exact: bool
    threads: int | None
    out: str | None

    def __post_init__(self):
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.pairs < 1:
            raise ParameterError("--pairs must be >= 1")
        if not self.epsilon > 0:
            raise ParameterError("--epsilon must be positive")
        if self.seed < 0:
            raise ParameterError("--seed must be non-negative")

    def solver(self):
        return SolverConfig(method=self.method, epsilon=self.epsilon, seed=self.seed)

    def metadata(self):
        return {k: v for k, v in asdict(self).items() if v is not None and k != "out"}


def _env(name, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    if cast is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _common(p):
    p.add_argument("--alpha", type=float, default=_env("alpha", None, float),
                   help="alpha in (0,1); default 0.8 with --truncated, else 0.98")
    p.add_argument("--pairs", type=int, default=_env("pairs", 1000, int),
                   help="sampled source-destination pairs (default 1000)")
    p.add_argument("--epsilon", type=float, default=_env("epsilon", 1e-8, float))
    p.add_argument("--seed", type=int, default=_env("seed", 0, int))
    p.add_argument("--method", choices=METHODS, default=_env("method", "power"))
    p.add_argument("--truncated", action="store_true", default=_env("truncated", False, bool))
    p.add_argument("--exact", action="store_true", default=_env("exact", False, bool),
                   help="sum over all ordered pairs instead of sampling")
    p.add_argument("--threads", type=int, default=_env("threads", None, int))
    p.add_argument("--out", default=_env("out", None))
    p.add_argument("--no-timestamp", action="store_true",
                   default=_env("no_timestamp", False, bool),
                   help="omit the generation-time comment line")


def build_parser():
    ap = argparse.ArgumentParser(prog="alphacf", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="graph statistics as a one-row CSV")
    p.add_argument("input", help="edge-list/GML path or generator spec like ws:n=1000,k=12,p=0.15")
    _common(p)

    p = sub.add_parser("generate", help="write a random graph as an edge list")
    p.add_argument("model", help=f"generator spec, models: {', '.join(GENERATORS)}")
    _common(p)

    p = sub.add_parser("centrality", help="node and edge score CSVs for one measure")
    p.add_argument("input")
    p.add_argument("--measure", default="alpha_cf")
    _common(p)

    p = sub.add_parser("correlate", help="Kendall tau matrix between measures")
    p.add_argument("input")
    p.add_argument("--measures", default=",".join(TABLE_MEASURES))
    _common(p)

    p = sub.add_parser("ccdf", help="complementary distribution of scores")
    p.add_argument("input")
    p.add_argument("--measure", default="alpha_cf")
    p.add_argument("--of", choices=("edges", "nodes"), default="edges")
    p.add_argument("--edge", default=None,
                   help="u,v: distribution of per-pair scores of this edge instead")
    _common(p)

    p = sub.add_parser("vulnerability", help="top-node removal traces")
    p.add_argument("input")
    p.add_argument("--measures", default="degree,betweenness,cf,alpha_cf:0.98")
    p.add_argument("--step", type=int, default=None,
                   help="nodes removed per step (default 1 for n <= 200, else 1%% of n)")
    p.add_argument("--recompute", action="store_true",
                   help="recompute the ranking on the residual graph after every removal")
    _common(p)
    return ap


def _load(spec, seed):
    path = Path(spec)
    if not path.exists() and spec.partition(":")[0] in GENERATORS:
        return generate(spec, seed), None
    if not path.exists():
        raise ParseError(f"no such file: {spec}")
    g, labels, _ = read_graph(path)
    return g, labels


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _measure_kwargs(cfg):
    return dict(alpha=cfg.alpha, exact=cfg.exact, n_pairs=cfg.pairs, seed=cfg.seed,
                cfg=cfg.solver())


def _measure_spec(name, cfg):
    base, arg = parse_measure(name)
    if cfg.truncated and base == "alpha_cf":
        return "alpha_cf_tr" + (f":{arg:g}" if arg is not None else "")
    return name


def _slug(name):
    return name.replace(":", "_")


def cmd_stats(cfg, args):
    g, _ = _load(cfg.input, cfg.seed)
    st = compute_stats(g)
    _emit(io.format_csv(GraphStats.CSV_FIELDS, [st.as_row()], cfg.metadata(), args.ts), cfg.out)


def cmd_generate(cfg, args):
    g = generate(args.model, cfg.seed)
    header = [f"model: {args.model}", f"seed: {cfg.seed}"]
    _emit(format_edge_list(g, header), cfg.out)


def cmd_centrality(cfg, args):
    g, labels = _load(cfg.input, cfg.seed)
    spec = _measure_spec(args.measure, cfg)
    edges, nodes = compute_measure(g, spec, **_measure_kwargs(cfg))
    meta = {**cfg.metadata(), **nodes.measure.metadata()}
    outdir = Path(cfg.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    io.write_csv(outdir / f"{_slug(spec)}_nodes.csv", ["node", "score"],
                 io.node_rows(nodes, labels), meta, args.ts)
    if edges is not None:
        io.write_csv(outdir / f"{_slug(spec)}_edges.csv", io.edge_columns(edges),
                     io.edge_rows(edges, labels), meta, args.ts)


def cmd_correlate(cfg, args):
    g, _ = _load(cfg.input, cfg.seed)
    names = [m for m in args.measures.split(",") if m]
    table = analysis.correlation_table(g, names, **_measure_kwargs(cfg))
    text = io.format_csv(["measure", *table.names], io.correlation_rows(table),
                         cfg.metadata(), args.ts)
    _emit(text, cfg.out)


def cmd_ccdf(cfg, args):
    g, labels = _load(cfg.input, cfg.seed)
    spec = _measure_spec(args.measure, cfg)
    if args.edge:
        name, arg = parse_measure(spec)
        if not name.startswith("alpha_cf"):
            raise ParameterError("--edge needs an alpha_cf measure")
        ids = [labels.to_id(x) if labels else int(x) for x in args.edge.split(",")]
        alpha = arg or cfg.alpha or (0.8 if name == "alpha_cf_tr" else 0.98)
        values = pair_contributions(g, alpha, ids[0], ids[1], truncated=name == "alpha_cf_tr")
    else:
        edges, nodes = compute_measure(g, spec, **_measure_kwargs(cfg))
        if args.of == "edges":
            if edges is None:
                raise ParameterError(f"measure {spec} has no edge scores")
            values = edges.values
        else:
            values = nodes.values
    dist = analysis.ccdf(values)
    _emit(io.format_csv(["x", "count_greater"], io.ccdf_rows(dist), cfg.metadata(), args.ts),
          cfg.out)


def cmd_vulnerability(cfg, args):
    g, _ = _load(cfg.input, cfg.seed)
    names = [m for m in args.measures.split(",") if m]
    for m in names:
        parse_measure(m)
    steps = None
    if args.step:
        steps = list(range(0, g.n + 1, args.step)) + [g.n]
    outdir = Path(cfg.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    kwargs = _measure_kwargs(cfg)
    for m in names:
        spec = _measure_spec(m, cfg)
        _, ranking = compute_measure(g, spec, **kwargs)
        recompute = None
        if args.recompute:
            def recompute(sub, spec=spec):
                return compute_measure(sub, spec, **kwargs)[1]
        trace = analysis.vulnerability_sweep(g, ranking, steps, strategy=spec, recompute=recompute)
        meta = {**cfg.metadata(), "strategy": spec,
                "ranking": "recomputed" if args.recompute else "static"}
        io.write_csv(outdir / f"vulnerability_{_slug(spec)}.csv",
                     ["fraction", "inv_avg_dist", "lcc_size"], io.trace_rows(trace), meta, args.ts)


COMMANDS = {
    "stats": cmd_stats,
    "generate": cmd_generate,
    "centrality": cmd_centrality,
    "correlate": cmd_correlate,
    "ccdf": cmd_ccdf,
    "vulnerability": cmd_vulnerability,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.ts = not args.no_timestamp
    try:
        cfg = RunConfig(
            command=args.command, input=getattr(args, "input", None), alpha=args.alpha,
            pairs=args.pairs, epsilon=args.epsilon, seed=args.seed, method=args.method,
            truncated=args.truncated, exact=args.exact, threads=args.threads, out=args.out)
        if cfg.threads:
            numba.set_num_threads(min(cfg.threads, numba.config.NUMBA_NUM_THREADS))
        COMMANDS[args.command](cfg, args)
    except (ParseError, ParameterError, KeyError) as exc:
        print(f"alphacf: error: {exc}", file=sys.stderr)
        return 2
    except (AlphaCFError, OSError) as exc:
        print(f"alphacf: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
