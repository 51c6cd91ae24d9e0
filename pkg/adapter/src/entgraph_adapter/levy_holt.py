"""Convert premise/hypothesis triple datasets for the entailment harness.

Each relation triple is concatenated into a pseudo-sentence, machine
translated, re-parsed, and reduced to its most representative relation by
the main pipeline (invoked as a subprocess through its public CLI).  Sides
that fail anywhere along the way become placeholder rows that can never
match a graph node.
"""
from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .annotate import AdapterConfig, write_jsonl

PLACEHOLDER = "PLACEHOLDER"


class ConversionError(Exception):
    pass


@dataclass(frozen=True)
class TriplePair:
    premise: tuple[str, str, str]
    hypothesis: tuple[str, str, str]
    label: str


@dataclass
class ConversionSummary:
    entries: int = 0
    parsed: int = 0
    placeholders: int = 0
    side_placeholders: int = 0

    def line(self) -> str:
        return (
            f"converted {self.parsed}/{self.entries} entries "
            f"({self.placeholders} placeholder entries, "
            f"{self.side_placeholders} placeholder sides)"
        )


def read_triple_pairs(path: str | Path) -> list[TriplePair]:
    """7-column TSV: premise subj/pred/obj, hypothesis subj/pred/obj, label."""
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 7:
                raise ConversionError(f"{path}:{lineno}: expected 7 columns")
            pairs.append(TriplePair(tuple(cols[0:3]), tuple(cols[3:6]), cols[6]))
    return pairs


def _pseudo_sentence(triple: tuple[str, str, str]) -> str:
    return " ".join(triple)


def _run_entgraph(config: AdapterConfig, args: list[str]) -> None:
    command = list(config.entgraph_cmd) + args
    proc = subprocess.run(command, capture_output=True, text=True)
    if proc.returncode != 0:
        raise ConversionError(
            f"{' '.join(command)} failed with code {proc.returncode}: {proc.stderr.strip()}"
        )


def _placeholder_side() -> dict:
    return {"subj": PLACEHOLDER, "pred": PLACEHOLDER, "obj": PLACEHOLDER, "pairs": PLACEHOLDER}


def convert_levy_holt(
    pairs: list[TriplePair],
    direction: str,
    config: AdapterConfig,
    workdir: Optional[str | Path] = None,
) -> tuple[list[list[str]], ConversionSummary]:
    """Translate, re-parse and re-type a triple dataset.

    direction "en-zh" runs the full translate/parse/select/type path through
    the main pipeline CLI (workdir required for its intermediate files);
    "backtranslate" round-trips each field through the translator (en-zh-en)
    and keeps the relation structure, for the back-translation ensemble.
    """
    if direction == "en-zh":
        if workdir is None:
            raise ConversionError("en-zh conversion needs a working directory")
        return _convert_translate_parse(pairs, config, Path(workdir))
    if direction == "backtranslate":
        return _convert_backtranslate(pairs, config)
    raise ConversionError(f"unknown direction {direction!r}")


def _convert_translate_parse(
    pairs: list[TriplePair], config: AdapterConfig, workdir: Path
) -> tuple[list[list[str]], ConversionSummary]:
    parser, typer, translator = config.tools()
    workdir.mkdir(parents=True, exist_ok=True)
    sentences: list[dict] = []
    # sides drop out at any failed step and come back as placeholders
    for i, pair in enumerate(pairs):
        for sent_index, triple in ((0, pair.premise), (1, pair.hypothesis)):
            translated = translator.translate(_pseudo_sentence(triple), "en-zh")
            if translated is None:
                continue
            parse = parser.parse(translated)
            if parse is None or not parse.get("tokens"):
                continue
            sentences.append({
                "article_id": f"e{i}",
                "sent_index": sent_index,
                "text": translated,
                "tokens": parse["tokens"],
                "mentions": typer.type_mentions(translated) or [],
            })
    sentences_path = workdir / "sentences.jsonl"
    rep_path = workdir / "representative.jsonl"
    typed_path = workdir / "typed.jsonl"
    write_jsonl(sentences, sentences_path)

    typed: dict[tuple[str, int], dict] = {}
    if sentences:
        _run_entgraph(config, [
            "extract", "--in", str(sentences_path), "--out", str(rep_path),
            "--representative", "--seed", str(config.seed),
        ])
        _run_entgraph(config, [
            "retype", "--triples", str(rep_path), "--annotations", str(sentences_path),
            "--out", str(typed_path),
        ])
        with typed_path.open("r", encoding="utf-8") as fh:
            for line in fh:
                record = json.loads(line)
                typed[(record["article_id"], record["sent_index"])] = record

    rows: list[list[str]] = []
    summary = ConversionSummary(entries=len(pairs))
    for i, pair in enumerate(pairs):
        sides = []
        for sent_index in (0, 1):
            record = typed.get((f"e{i}", sent_index))
            if record is None:
                sides.append(_placeholder_side())
                summary.side_placeholders += 1
            else:
                pair_tokens = sorted(f"{s}#{o}" for s, o in record["type_pairs"])
                sides.append({
                    "subj": record["subj"], "pred": record["pred"], "obj": record["obj"],
                    "pairs": ",".join(pair_tokens),
                })
        if any(side["pred"] == PLACEHOLDER for side in sides):
            summary.placeholders += 1
        else:
            summary.parsed += 1
        prem, hyp = sides
        rows.append([
            prem["subj"], prem["pred"], prem["obj"],
            hyp["subj"], hyp["pred"], hyp["obj"],
            pair.label, prem["pairs"], hyp["pairs"],
        ])
    return rows, summary


def _convert_backtranslate(
    pairs: list[TriplePair], config: AdapterConfig
) -> tuple[list[list[str]], ConversionSummary]:
    _, _, translator = config.tools()

    def round_trip(field: str) -> Optional[str]:
        over = translator.translate(field, "en-zh")
        if over is None:
            return None
        return translator.translate(over, "zh-en")

    rows: list[list[str]] = []
    summary = ConversionSummary(entries=len(pairs))
    for pair in pairs:
        sides = []
        for triple in (pair.premise, pair.hypothesis):
            fields = [round_trip(f) for f in triple]
            if any(f is None for f in fields):
                sides.append(_placeholder_side())
                summary.side_placeholders += 1
            else:
                sides.append({
                    "subj": fields[0], "pred": fields[1], "obj": fields[2],
                    "pairs": "thing#thing",
                })
        if any(side["pred"] == PLACEHOLDER for side in sides):
            summary.placeholders += 1
        else:
            summary.parsed += 1
        prem, hyp = sides
        rows.append([
            prem["subj"], prem["pred"], prem["obj"],
            hyp["subj"], hyp["pred"], hyp["obj"],
            pair.label, prem["pairs"], hyp["pairs"],
        ])
    return rows, summary


def write_dataset(rows: list[list[str]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(row) + "\n")
