"""Stage functions and the end-to-end pipeline orchestrator.

Stages run in dependency order (ingest, extract, retype, build, globalize,
eval); a stage is skipped when its output is newer than all of its inputs.
A manifest (tool version, seed, thresholds, input names) is written beside
every artifact so runs can be audited and reproduced.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import __version__
from .evaluate import EvalConfig, EvalError, Strategy, run_eval
from .figer import TypeMapping, load_mapping, remap_sentence_mentions, types_for_span
from .graph import TripleStore, build_local_graph, census, filter_triples, global_learn, load_graph, serialize_graph
from .ingest import (
    AnnotatedSentence,
    IngestError,
    LineError,
    ingest_annotated_corpus,
    ingest_raw_corpus,
    load_annotations,
    sentence_to_json,
)
from .ore import ExtractorConfig, NegationLexicon, dsnf_config, extract_relations, select_representative


class ConfigError(Exception):
    """Configuration rejected before any stage ran."""


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


# ---------------------------------------------------------------------------
# stage implementations (also used directly by the CLI subcommands)


def _write_jsonl(path: Path, records) -> int:
    count = 0
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            count += 1
    return count


def stage_ingest(
    corpus_dir: Path,
    out: Path,
    max_len: int = 500,
    min_len: int = 5,
    raw: bool = False,
    stats_path: Optional[Path] = None,
) -> dict:
    files = sorted(Path(corpus_dir).glob("*.jsonl"))
    if not files:
        raise IngestError(f"no .jsonl files under {corpus_dir}")
    if raw:
        sentences, stats = ingest_raw_corpus(files, max_len=max_len, min_len=min_len)
        _write_jsonl(out, (
            {"article_id": s.article_id, "sent_index": s.index, "text": s.text}
            for s in sentences
        ))
    else:
        errors: list[LineError] = []
        sentences, stats = ingest_annotated_corpus(files, max_len=max_len, min_len=min_len, errors=errors)
        _write_jsonl(out, (sentence_to_json(s) for s in sentences))
    payload = stats.as_dict()
    if stats_path is not None:
        Path(stats_path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", "utf-8")
    return payload


def triple_to_json(sent: AnnotatedSentence, triple) -> dict:
    subj, pred, obj = triple.render(sent)
    return {
        "article_id": sent.sentence.article_id,
        "sent_index": sent.sentence.index,
        "subj": subj,
        "pred": pred,
        "obj": obj,
        "construction": triple.construction.value,
        "amended": triple.amended,
        "negated": triple.negated,
        "subj_span": list(triple.subject),
        "obj_span": list(triple.object),
    }


def stage_extract(
    annotations: Path,
    out: Path,
    mode: str = "full",
    seed: int = 0,
    lexicon_path: Optional[Path] = None,
    representative: bool = False,
) -> dict:
    lexicon = NegationLexicon.from_file(lexicon_path) if lexicon_path else NegationLexicon()
    if mode == "full":
        config = ExtractorConfig(lexicon=lexicon)
    elif mode == "dsnf":
        config = dsnf_config(lexicon=lexicon)
    else:
        raise ConfigError(f"unknown extraction mode {mode!r}")
    rng = random.Random(seed)
    counts = {"sentences": 0, "triples": 0, "placeholders": 0}

    def records():
        for sent in load_annotations(annotations):
            counts["sentences"] += 1
            triples = extract_relations(sent, config)
            if representative:
                pick = select_representative(triples, sent, rng)
                if pick is None:
                    counts["placeholders"] += 1
                    yield {
                        "article_id": sent.sentence.article_id,
                        "sent_index": sent.sentence.index,
                        "placeholder": True,
                    }
                else:
                    counts["triples"] += 1
                    yield triple_to_json(sent, pick)
            else:
                for t in triples:
                    counts["triples"] += 1
                    yield triple_to_json(sent, t)

    _write_jsonl(out, records())
    return counts


def stage_retype(
    triples: Path,
    annotations: Path,
    out: Path,
    mapping_path: Optional[Path] = None,
) -> dict:
    mapping: Optional[TypeMapping] = load_mapping(mapping_path) if mapping_path else None
    sentences: dict[tuple[str, int], AnnotatedSentence] = {}
    for sent in load_annotations(annotations):
        if mapping is not None:
            sent = remap_sentence_mentions(sent, mapping)
        sentences[(sent.sentence.article_id, sent.sentence.index)] = sent
    counts = {"triples": 0, "skipped": 0}

    def records():
        with open(triples, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                if record.get("placeholder"):
                    continue
                sent = sentences.get((record["article_id"], record["sent_index"]))
                if sent is None:
                    counts["skipped"] += 1
                    continue
                subj_span = tuple(record["subj_span"])
                obj_span = tuple(record["obj_span"])
                subj_types = sorted(types_for_span(subj_span, sent.mentions))
                obj_types = sorted(types_for_span(obj_span, sent.mentions))
                record["type_pairs"] = [[s, o] for s in subj_types for o in obj_types]
                counts["triples"] += 1
                yield record

    _write_jsonl(out, records())
    return counts


def stage_build(
    typed: Path,
    out_dir: Path,
    min_pred: int = 2,
    min_arg: int = 2,
    edge_floor: float = 0.01,
    weighting: str = "ppmi",
) -> dict:
    store = TripleStore()
    with open(typed, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            pairs = [tuple(p) for p in record["type_pairs"]]
            store.add(record["pred"], record["subj"], record["obj"], pairs)
    kept = filter_triples(store, min_pred=min_pred, min_arg=min_arg)
    graph = build_local_graph(
        kept,
        edge_floor=edge_floor,
        weighting=weighting,
        metadata={
            "source": Path(typed).name,
            "min_pred": min_pred,
            "min_arg": min_arg,
            "edge_floor": edge_floor,
            "weighting": weighting,
            "epochs": 0,
        },
    )
    serialize_graph(graph, out_dir)
    report = census(graph)
    (Path(out_dir) / "census.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", "utf-8"
    )
    return report


def stage_globalize(
    graph_dir: Path,
    epochs: int = 3,
    lambda_trans: float = 1.0,
    lambda_para: float = 0.5,
    lambda_cross: float = 0.5,
    lambda_reg: float = 1.0,
) -> dict:
    graph = load_graph(graph_dir)
    graph.metadata["epochs"] = 0
    graph = global_learn(
        graph,
        epochs=epochs,
        lambda_trans=lambda_trans,
        lambda_para=lambda_para,
        lambda_cross=lambda_cross,
        lambda_reg=lambda_reg,
    )
    graph.metadata.update(
        {"lambda_trans": lambda_trans, "lambda_para": lambda_para,
         "lambda_cross": lambda_cross, "lambda_reg": lambda_reg}
    )
    serialize_graph(graph, graph_dir)
    return census(graph)


# ---------------------------------------------------------------------------
# pipeline configuration


@dataclass
class PipelineConfig:
    corpus_dir: Path
    workdir: Path
    mode: str = "full"
    seed: int = 0
    max_len: int = 500
    min_len: int = 5
    mapping: Optional[Path] = None
    lexicon: Optional[Path] = None
    min_pred: int = 2
    min_arg: int = 2
    edge_floor: float = 0.01
    weighting: str = "ppmi"
    epochs: int = 3
    lambda_trans: float = 1.0
    lambda_para: float = 0.5
    lambda_cross: float = 0.5
    lambda_reg: float = 1.0
    dev: Optional[Path] = None
    test: Optional[Path] = None
    graph_en: Optional[Path] = None
    strategy: Optional[str] = None
    gamma: Optional[float] = None
    sweep_gamma: bool = False
    lemma: str = "zh"
    eval_score: str = "global"
    rescale_auc: bool = False

    _PATHS = ("corpus_dir", "workdir", "mapping", "lexicon", "dev", "test", "graph_en")
    _BOOLS = ("sweep_gamma", "rescale_auc")

    @classmethod
    def from_file(cls, path: str | Path, overrides: Optional[dict] = None) -> "PipelineConfig":
        values: dict = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
        values.update(overrides or {})
        return cls.from_dict(values)

    @classmethod
    def from_dict(cls, values: dict) -> "PipelineConfig":
        known = {f.name: f.type for f in fields(cls) if not f.name.startswith("_")}
        kwargs: dict = {}
        for key, value in values.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if value is None:
                continue
            if key in cls._PATHS:
                kwargs[key] = Path(value)
            elif key in cls._BOOLS:
                kwargs[key] = str(value).lower() in ("1", "true", "yes")
            elif key in ("seed", "max_len", "min_len", "min_pred", "min_arg", "epochs"):
                kwargs[key] = int(value)
            elif key in ("edge_floor", "gamma", "lambda_trans", "lambda_para", "lambda_cross", "lambda_reg"):
                kwargs[key] = float(value)
            else:
                kwargs[key] = str(value)
        missing = {"corpus_dir", "workdir"} - set(kwargs)
        if missing:
            raise ConfigError(f"missing required config keys: {sorted(missing)}")
        config = cls(**kwargs)
        config.validate()
        return config

    def validate(self) -> None:
        if not Path(self.corpus_dir).is_dir():
            raise ConfigError(f"corpus_dir {self.corpus_dir} does not exist")
        if self.mode not in ("full", "dsnf"):
            raise ConfigError(f"mode must be full or dsnf, got {self.mode!r}")
        if self.min_pred < 1 or self.min_arg < 1:
            raise ConfigError("min_pred and min_arg must be at least 1")
        if self.edge_floor < 0:
            raise ConfigError("edge_floor must be non-negative")
        if self.epochs < 0:
            raise ConfigError("epochs must be non-negative")
        if self.weighting not in ("ppmi", "count"):
            raise ConfigError(f"weighting must be ppmi or count, got {self.weighting!r}")
        if self.min_len < 1 or self.max_len < self.min_len:
            raise ConfigError("sentence length window is empty")
        if self.gamma is not None and not (0.0 <= self.gamma <= 1.0):
            raise ConfigError("gamma must lie in [0, 1]")
        if self.lemma not in ("zh", "en", "none"):
            raise ConfigError(f"lemma must be zh, en or none, got {self.lemma!r}")
        for name in ("mapping", "lexicon", "dev", "test", "graph_en"):
            value = getattr(self, name)
            if value is not None and not Path(value).exists():
                raise ConfigError(f"{name} path {value} does not exist")
        if self.strategy is not None:
            try:
                Strategy(self.strategy)
            except ValueError as exc:
                raise ConfigError(f"unknown strategy {self.strategy!r}") from exc


# ---------------------------------------------------------------------------
# orchestration


def _mtime(path: Path) -> float:
    path = Path(path)
    probe = path / "meta.json" if path.is_dir() else path
    return probe.stat().st_mtime


def _fresh(output: Path, inputs: list[Path]) -> bool:
    output = Path(output)
    probe = output / "meta.json" if output.is_dir() else output
    if not probe.exists():
        return False
    stamp = probe.stat().st_mtime
    return all(stamp >= _mtime(i) for i in inputs if Path(i).exists())


def _manifest(artifact: Path, stage: str, config: PipelineConfig, inputs: list[Path], extra: dict) -> None:
    def relative(path: Path) -> str:
        # paths are recorded relative to the workdir so identical runs in
        # different directories produce identical manifests
        try:
            return os.path.relpath(path, config.workdir)
        except ValueError:
            return str(path)

    payload = {
        "stage": stage,
        "tool_version": __version__,
        "seed": config.seed,
        "thresholds": {
            "min_pred": config.min_pred,
            "min_arg": config.min_arg,
            "edge_floor": config.edge_floor,
            "max_len": config.max_len,
            "min_len": config.min_len,
        },
        "inputs": [relative(i) for i in inputs],
        "stats": extra,
    }
    Path(str(artifact) + ".manifest.json").write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n", "utf-8"
    )


@dataclass
class PipelineResult:
    ran: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run all stages in dependency order, skipping fresh ones."""
    config.validate()
    work = Path(config.workdir)
    work.mkdir(parents=True, exist_ok=True)
    sentences = work / "sentences.jsonl"
    triples = work / "triples.jsonl"
    typed = work / "typed.jsonl"
    graph_dir = work / "graph"
    eval_dir = work / "eval"
    result = PipelineResult()
    corpus_files = sorted(Path(config.corpus_dir).glob("*.jsonl"))

    def run(stage: str, output: Path, inputs: list[Path], thunk):
        if _fresh(output, inputs):
            result.skipped.append(stage)
            return
        try:
            extra = thunk()
        except (ConfigError,) as exc:
            raise
        except Exception as exc:
            raise StageError(stage, exc) from exc
        _manifest(output, stage, config, inputs, extra)
        result.ran.append(stage)
        result.artifacts[stage] = str(output)

    run("ingest", sentences, corpus_files,
        lambda: stage_ingest(config.corpus_dir, sentences, config.max_len, config.min_len))
    run("extract", triples, [sentences],
        lambda: stage_extract(sentences, triples, config.mode, config.seed, config.lexicon))
    run("retype", typed, [triples, sentences],
        lambda: stage_retype(triples, sentences, typed, config.mapping))
    run("build", graph_dir, [typed],
        lambda: stage_build(typed, graph_dir, config.min_pred, config.min_arg,
                            config.edge_floor, config.weighting))

    def globalize_fresh() -> bool:
        meta = graph_dir / "meta.json"
        if not meta.exists():
            return False
        persisted = json.loads(meta.read_text("utf-8")).get("metadata", {})
        return persisted.get("epochs") == config.epochs and meta.stat().st_mtime >= _mtime(typed)

    if globalize_fresh():
        result.skipped.append("globalize")
    else:
        try:
            extra = stage_globalize(
                graph_dir, config.epochs, config.lambda_trans,
                config.lambda_para, config.lambda_cross, config.lambda_reg,
            )
        except Exception as exc:
            raise StageError("globalize", exc) from exc
        _manifest(graph_dir, "globalize", config, [typed], extra)
        result.ran.append("globalize")
        result.artifacts["globalize"] = str(graph_dir)

    if config.dev and config.test:
        report_path = eval_dir / "report.tsv"
        inputs = [graph_dir, Path(config.dev), Path(config.test)]
        if _fresh(report_path, inputs):
            result.skipped.append("eval")
        else:
            try:
                run_eval(EvalConfig(
                    graph_zh=graph_dir,
                    dev=Path(config.dev),
                    test=Path(config.test),
                    graph_en=Path(config.graph_en) if config.graph_en else None,
                    strategy=Strategy(config.strategy) if config.strategy else None,
                    gamma=config.gamma,
                    sweep_gamma=config.sweep_gamma,
                    lemma=config.lemma,
                    score=config.eval_score,
                    rescale_auc=config.rescale_auc,
                    out_dir=eval_dir,
                    dump_scores=True,
                ))
            except (EvalError, OSError) as exc:
                raise StageError("eval", exc) from exc
            _manifest(report_path, "eval", config, inputs, {})
            result.ran.append("eval")
            result.artifacts["eval"] = str(eval_dir)
    return result
