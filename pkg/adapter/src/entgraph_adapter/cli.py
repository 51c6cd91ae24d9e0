"""Adapter command line: annotate raw sentences, convert triple datasets."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .annotate import AdapterConfig, annotate_corpus, read_sentences, write_jsonl
from .levy_holt import ConversionError, convert_levy_holt, read_triple_pairs, write_dataset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entgraph-adapter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="attach parses and typed mentions to raw sentences")
    p.add_argument("--in", dest="infile", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--cache", required=True, type=Path)
    p.add_argument("--errors", type=Path, default=None)

    p = sub.add_parser("convert", help="translate and re-parse a premise/hypothesis dataset")
    p.add_argument("--in", dest="infile", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--cache", required=True, type=Path)
    p.add_argument("--direction", choices=["en-zh", "backtranslate"], default="en-zh")
    p.add_argument("--workdir", type=Path, default=None)
    p.add_argument("--translations", type=Path, default=None,
                   help="offline dictionary TSV used when no translator endpoint is set")
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "annotate":
            config = AdapterConfig.from_env(args.cache)
            records = read_sentences(args.infile)
            annotated, errors = annotate_corpus(records, config)
            write_jsonl(annotated, args.out)
            if args.errors:
                write_jsonl(errors, args.errors)
            print(json.dumps({"annotated": len(annotated), "errors": len(errors)}))
        elif args.command == "convert":
            config = AdapterConfig.from_env(
                args.cache, translations_tsv=args.translations, seed=args.seed
            )
            pairs = read_triple_pairs(args.infile)
            workdir = args.workdir or args.out.parent / (args.out.stem + "_work")
            rows, summary = convert_levy_holt(pairs, args.direction, config, workdir)
            write_dataset(rows, args.out)
            print(summary.line())
            print(json.dumps({
                "entries": summary.entries,
                "parsed": summary.parsed,
                "placeholders": summary.placeholders,
                "side_placeholders": summary.side_placeholders,
            }))
    except (ConversionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
