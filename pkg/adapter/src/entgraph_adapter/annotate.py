"""Produce the canonical annotated-sentence JSONL from raw sentences."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .backends import CachedParser, CachedTyper, CachedTranslator, HttpTool, TsvTranslator
from .cache import ToolCache


@dataclass
class AdapterConfig:
    cache_dir: Path
    parser_endpoint: Optional[str] = None
    typer_endpoint: Optional[str] = None
    translator_endpoint: Optional[str] = None
    translations_tsv: Optional[Path] = None
    batch_size: int = 32
    entgraph_cmd: tuple[str, ...] = ("entgraph",)
    seed: int = 0

    @classmethod
    def from_env(cls, cache_dir: Path, **overrides) -> "AdapterConfig":
        values = dict(
            parser_endpoint=os.environ.get("ENTGRAPH_PARSER_URL"),
            typer_endpoint=os.environ.get("ENTGRAPH_TYPER_URL"),
            translator_endpoint=os.environ.get("ENTGRAPH_TRANSLATOR_URL"),
        )
        cmd = os.environ.get("ENTGRAPH_CMD")
        if cmd:
            values["entgraph_cmd"] = tuple(cmd.split())
        values.update(overrides)
        return cls(cache_dir=Path(cache_dir), **values)

    def tools(self) -> tuple[CachedParser, CachedTyper, CachedTranslator]:
        cache = ToolCache(self.cache_dir)
        parser_backend = (
            HttpTool("parser", "http-1", self.parser_endpoint) if self.parser_endpoint else None
        )
        typer_backend = (
            HttpTool("typer", "http-1", self.typer_endpoint) if self.typer_endpoint else None
        )
        if self.translator_endpoint:
            translator_backend = HttpTool("translator", "http-1", self.translator_endpoint)
        elif self.translations_tsv:
            translator_backend = TsvTranslator(self.translations_tsv)
        else:
            translator_backend = None
        return (
            CachedParser(cache, parser_backend),
            CachedTyper(cache, typer_backend),
            CachedTranslator(cache, translator_backend),
        )


def annotate_corpus(
    records: Iterable[dict],
    config: AdapterConfig,
) -> tuple[list[dict], list[dict]]:
    """Attach tokens and typed mentions to {"article_id","sent_index","text"} records.

    Tool failures become per-sentence error records and the run continues;
    a typer abstention yields an empty mention list, which is still valid
    pipeline input.
    """
    parser, typer, _ = config.tools()
    annotated: list[dict] = []
    errors: list[dict] = []
    for record in records:
        text = record["text"]
        parse = parser.parse(text)
        if parse is None or not parse.get("tokens"):
            errors.append({
                "article_id": record["article_id"],
                "sent_index": record["sent_index"],
                "error": f"parser produced no tree for {text!r}",
            })
            continue
        mentions = typer.type_mentions(text)
        annotated.append({
            "article_id": record["article_id"],
            "sent_index": record["sent_index"],
            "text": text,
            "tokens": parse["tokens"],
            "mentions": mentions or [],
        })
    return annotated, errors


def read_sentences(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def write_jsonl(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
