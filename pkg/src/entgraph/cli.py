"""Command line interface: one subcommand per pipeline stage plus the
end-to-end orchestrator.  Exit codes: 0 success, 1 stage failure, 2 bad
configuration or arguments."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .evaluate import EvalConfig, EvalError, Strategy, run_eval
from .figer import MappingError
from .graph import GraphError
from .ingest import IngestError
from .pipeline import (
    ConfigError,
    PipelineConfig,
    StageError,
    run_pipeline,
    stage_build,
    stage_extract,
    stage_globalize,
    stage_ingest,
    stage_retype,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entgraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="filter and validate a corpus into sentences.jsonl")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--max-len", type=int, default=500)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--raw", action="store_true", help="treat inputs as raw articles, not annotations")
    p.add_argument("--stats", type=Path, default=None)

    p = sub.add_parser("extract", help="extract relation triples from annotated sentences")
    p.add_argument("--in", dest="infile", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--mode", choices=["full", "dsnf"], default="full")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lexicon", type=Path, default=None)
    p.add_argument("--representative", action="store_true",
                   help="emit one representative triple (or placeholder) per sentence")

    p = sub.add_parser("retype", help="attach type pairs to extracted triples")
    p.add_argument("--triples", required=True, type=Path)
    p.add_argument("--annotations", required=True, type=Path)
    p.add_argument("--mapping", type=Path, default=None)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("build", help="build local entailment subgraphs from typed triples")
    p.add_argument("--typed", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--min-pred", type=int, default=2)
    p.add_argument("--min-arg", type=int, default=2)
    p.add_argument("--edge-floor", type=float, default=0.01)
    p.add_argument("--features", choices=["ppmi", "count"], default="ppmi")

    p = sub.add_parser("globalize", help="apply soft global constraints to a graph directory")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--lambda-trans", type=float, default=1.0)
    p.add_argument("--lambda-para", type=float, default=0.5)
    p.add_argument("--lambda-cross", type=float, default=0.5)
    p.add_argument("--lambda-reg", type=float, default=1.0)

    p = sub.add_parser("eval", help="score premise/hypothesis datasets against graphs")
    p.add_argument("--graph-zh", required=True, type=Path)
    p.add_argument("--graph-en", type=Path, default=None)
    p.add_argument("--dev", required=True, type=Path)
    p.add_argument("--test", required=True, type=Path)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--sweep-gamma", action="store_true")
    p.add_argument("--lemma", choices=["zh", "en", "none"], default="zh")
    p.add_argument("--lemma-dev", type=Path, default=None,
                   help="parallel dataset that defines the dev lemma baseline")
    p.add_argument("--lemma-test", type=Path, default=None)
    p.add_argument("--backtrans-dev", type=Path, default=None)
    p.add_argument("--backtrans-test", type=Path, default=None)
    p.add_argument("--score", choices=["global", "local"], default="global")
    p.add_argument("--rescale-auc", action="store_true")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--dump-scores", action="store_true")

    p = sub.add_parser("pipeline", help="run every stage from a key=value config file")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config entry")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            stats = stage_ingest(args.corpus, args.out, args.max_len, args.min_len,
                                 raw=args.raw, stats_path=args.stats)
            print(json.dumps(stats, sort_keys=True))
        elif args.command == "extract":
            stats = stage_extract(args.infile, args.out, args.mode, args.seed,
                                  args.lexicon, representative=args.representative)
            print(json.dumps(stats, sort_keys=True))
        elif args.command == "retype":
            stats = stage_retype(args.triples, args.annotations, args.out, args.mapping)
            print(json.dumps(stats, sort_keys=True))
        elif args.command == "build":
            report = stage_build(args.typed, args.out, args.min_pred, args.min_arg,
                                 args.edge_floor, args.features)
            print(json.dumps(report, sort_keys=True))
        elif args.command == "globalize":
            report = stage_globalize(args.graph, args.epochs, args.lambda_trans,
                                     args.lambda_para, args.lambda_cross, args.lambda_reg)
            print(json.dumps(report, sort_keys=True))
        elif args.command == "eval":
            report = run_eval(EvalConfig(
                graph_zh=args.graph_zh,
                graph_en=args.graph_en,
                dev=args.dev,
                test=args.test,
                strategy=Strategy(args.strategy) if args.strategy else None,
                gamma=args.gamma,
                sweep_gamma=args.sweep_gamma,
                lemma=args.lemma,
                lemma_dataset_dev=args.lemma_dev,
                lemma_dataset_test=args.lemma_test,
                backtrans_dev=args.backtrans_dev,
                backtrans_test=args.backtrans_test,
                score=args.score,
                rescale_auc=args.rescale_auc,
                out_dir=args.out,
                dump_scores=args.dump_scores,
            ))
            for row in report.rows():
                print(row)
        elif args.command == "pipeline":
            overrides = {}
            for item in args.set:
                if "=" not in item:
                    raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
                key, _, value = item.partition("=")
                overrides[key.strip()] = value.strip()
            config = PipelineConfig.from_file(args.config, overrides)
            result = run_pipeline(config)
            print(json.dumps({"ran": result.ran, "skipped": result.skipped}, sort_keys=True))
    except (ConfigError, MappingError, EvalError, IngestError, GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
