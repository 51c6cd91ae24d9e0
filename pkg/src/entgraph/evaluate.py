"""Premise/hypothesis scoring against entailment graphs, cross-graph
ensembles, and precision-recall reporting with a lemma-baseline boundary."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .graph import EntailmentGraph, TypePair, load_graph

PLACEHOLDER = "PLACEHOLDER"

GAMMA_GRID = tuple(round(i / 10, 1) for i in range(11))

Normalizer = Callable[[str], str]


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class EvalSide:
    subj: str
    pred: str
    obj: str
    type_pairs: frozenset[TypePair]
    placeholder: bool = False


@dataclass(frozen=True)
class EvalEntry:
    premise: EvalSide
    hypothesis: EvalSide
    label: bool


class Strategy(str, enum.Enum):
    EN_ZH = "en_zh"
    ZH_EN = "zh_en"
    MAX = "max"
    AVG = "avg"


@dataclass(frozen=True)
class EnsembleSpec:
    strategy: Strategy
    gamma: float

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma {self.gamma} outside [0, 1]")


@dataclass
class PRCurve:
    points: list[tuple[float, float]]  # (recall, precision), descending threshold
    left_boundary: float = 0.0
    error: Optional[str] = None


# ---------------------------------------------------------------------------
# dataset loading

_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def _parse_pairs(text: str) -> frozenset[TypePair]:
    text = text.strip()
    if not text or text == PLACEHOLDER:
        return frozenset({("thing", "thing")})
    pairs = set()
    for chunk in text.split(","):
        bits = chunk.strip().split("#")
        if len(bits) != 2 or not bits[0] or not bits[1]:
            raise EvalError(f"bad type pair {chunk!r}")
        pairs.add((bits[0], bits[1]))
    return frozenset(pairs)


def _parse_side(subj: str, pred: str, obj: str, pairs: str) -> EvalSide:
    if PLACEHOLDER in (subj, pred, obj):
        return EvalSide("", "", "", frozenset({("thing", "thing")}), placeholder=True)
    return EvalSide(subj, pred, obj, _parse_pairs(pairs))


def load_dataset(path: str | Path) -> list[EvalEntry]:
    """Read the 9-column premise/hypothesis TSV in file order."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 9:
                raise EvalError(f"{path}:{lineno}: expected 9 columns, got {len(cols)}")
            label_token = cols[6].strip().lower()
            if label_token in _TRUE:
                label = True
            elif label_token in _FALSE:
                label = False
            else:
                raise EvalError(f"{path}:{lineno}: bad label {cols[6]!r}")
            entries.append(
                EvalEntry(
                    premise=_parse_side(cols[0], cols[1], cols[2], cols[7]),
                    hypothesis=_parse_side(cols[3], cols[4], cols[5], cols[8]),
                    label=label,
                )
            )
    return entries


# ---------------------------------------------------------------------------
# graph lookup

def match_type_pairs(p: frozenset[TypePair], h: frozenset[TypePair]) -> frozenset[TypePair]:
    """Intersection of the two sides' pairs, or the union when disjoint."""
    if not p or not h:
        raise ValueError("type-pair sets must be non-empty")
    inter = p & h
    return inter if inter else p | h


def query_graph(
    graph: EntailmentGraph,
    premise_pred: str,
    hyp_pred: str,
    valid_pairs: Iterable[TypePair],
    score: str = "global",
) -> float:
    """Max edge score over the valid subgraphs, backing off to the mean over
    every subgraph containing both predicates (missing edge counts as 0),
    then to 0."""
    def value(edge) -> float:
        return edge.global_ if score == "global" else edge.local

    found = []
    for pair in sorted(set(valid_pairs)):
        edge = graph.edge(pair, premise_pred, hyp_pred)
        if edge is not None:
            found.append(value(edge))
    if found:
        return max(found)
    shared = []
    for pair in sorted(graph.subgraphs):
        sub = graph.subgraphs[pair]
        if premise_pred in sub.nodes and hyp_pred in sub.nodes:
            edge = sub.edges.get((premise_pred, hyp_pred))
            shared.append(value(edge) if edge is not None else 0.0)
    if shared:
        return sum(shared) / len(shared)
    return 0.0


def score_entry(entry: EvalEntry, graph: EntailmentGraph, score: str = "global") -> float:
    if entry.premise.placeholder or entry.hypothesis.placeholder:
        return 0.0
    valid = match_type_pairs(entry.premise.type_pairs, entry.hypothesis.type_pairs)
    return query_graph(graph, entry.premise.pred, entry.hypothesis.pred, valid, score=score)


# ---------------------------------------------------------------------------
# lemma baseline

_STRUCTURAL_MARKERS = {"X", "PRO"}


def zh_normalizer(text: str) -> str:
    """Drop structural markers from a composite predicate; keep negation."""
    parts = [p for p in text.strip().split("·") if p not in _STRUCTURAL_MARKERS]
    return "·".join(parts)


def en_normalizer(text: str) -> str:
    return text.strip().casefold()


def lemma_match(premise: EvalSide, hypothesis: EvalSide, normalizer: Normalizer = zh_normalizer) -> bool:
    """Exact lemmatized match of predicate and arguments, order preserved."""
    if premise.placeholder or hypothesis.placeholder:
        return False
    return (
        normalizer(premise.pred) == normalizer(hypothesis.pred)
        and normalizer(premise.subj) == normalizer(hypothesis.subj)
        and normalizer(premise.obj) == normalizer(hypothesis.obj)
    )


# ---------------------------------------------------------------------------
# ensembles

def _theta(x: float) -> float:
    return 1.0 if x == 0.0 else 0.0


def ensemble(pred_en: float, pred_zh: float, spec: EnsembleSpec) -> float:
    g = spec.gamma
    if spec.strategy is Strategy.EN_ZH:
        return pred_en + g * _theta(pred_en) * pred_zh
    if spec.strategy is Strategy.ZH_EN:
        return g * pred_zh + _theta(pred_zh) * pred_en
    if spec.strategy is Strategy.MAX:
        return max(pred_en, g * pred_zh)
    if spec.strategy is Strategy.AVG:
        return (pred_en + g * pred_zh) / 2.0
    raise ValueError(f"unknown strategy {spec.strategy!r}")


# ---------------------------------------------------------------------------
# curves and areas

def pr_curve(
    scores: Sequence[float],
    labels: Sequence[bool],
    lemma_flags: Optional[Sequence[bool]] = None,
) -> PRCurve:
    """Precision/recall at every distinct threshold, descending.

    Lemma-matched entries are ranked above every finite threshold, so they
    fix the leftmost point; entries with equal scores enter together.
    """
    if lemma_flags is None:
        lemma_flags = [False] * len(scores)
    if not (len(scores) == len(labels) == len(lemma_flags)):
        raise EvalError("scores, labels and lemma flags must have equal length")
    if not scores:
        return PRCurve(points=[], left_boundary=0.0, error="empty input")
    effective = [math.inf if f else s for s, f in zip(scores, lemma_flags)]
    positives = sum(1 for x in labels if x)
    thresholds: list[float] = []
    if any(lemma_flags):
        thresholds.append(math.inf)
    thresholds.extend(sorted({s for s in effective if not math.isinf(s)}, reverse=True))
    points = []
    left_boundary = 0.0
    for theta in thresholds:
        tp = fp = 0
        for eff, label in zip(effective, labels):
            if eff >= theta:
                if label:
                    tp += 1
                else:
                    fp += 1
        precision = tp / (tp + fp) if (tp + fp) else 1.0
        recall = tp / positives if positives else 0.0
        points.append((recall, precision))
        if math.isinf(theta):
            left_boundary = recall
    return PRCurve(points=points, left_boundary=left_boundary)


def _segment_area(r1: float, p1: float, r2: float, p2: float, rescale: bool) -> float:
    """Area under the segment restricted to precision > 0.5."""
    dr = r2 - r1
    if dr <= 0:
        return 0.0

    def f(p: float) -> float:
        return (p - 0.5) * 2.0 if rescale else p

    if p1 > 0.5 and p2 > 0.5:
        return dr * (f(p1) + f(p2)) / 2.0
    if p1 <= 0.5 and p2 <= 0.5:
        return 0.0
    t = (0.5 - p1) / (p2 - p1)
    if p1 > 0.5:  # falls through 0.5 at t
        return dr * t * (f(p1) + f(0.5)) / 2.0
    return dr * (1.0 - t) * (f(0.5) + f(p2)) / 2.0


def auc_half_precision(curve: PRCurve, rescale: bool = False) -> float:
    """Trapezoidal area (as a percentage) under the curve where precision
    exceeds one half, starting from the lemma-baseline recall boundary."""
    if not curve.points:
        raise EvalError("cannot integrate an empty curve")
    area = 0.0
    for (r1, p1), (r2, p2) in zip(curve.points, curve.points[1:]):
        area += _segment_area(r1, p1, r2, p2, rescale)
    return 100.0 * area


# ---------------------------------------------------------------------------
# gamma tuning

def tune_gamma_from_scores(
    score_pairs: Sequence[tuple[float, float]],
    labels: Sequence[bool],
    lemma_flags: Optional[Sequence[bool]],
    strategy: Strategy,
    rescale: bool = False,
) -> tuple[float, float]:
    """Exhaustive grid search; ties favour the smaller gamma."""
    best_gamma, best_auc = GAMMA_GRID[0], -1.0
    for gamma in GAMMA_GRID:
        spec = EnsembleSpec(strategy, gamma)
        scores = [ensemble(en, zh, spec) for en, zh in score_pairs]
        auc = auc_half_precision(pr_curve(scores, labels, lemma_flags), rescale=rescale)
        if auc > best_auc:
            best_gamma, best_auc = gamma, auc
    return best_gamma, best_auc


def tune_gamma(
    dev_entries: Sequence[EvalEntry],
    graphs: tuple[EntailmentGraph, EntailmentGraph],
    strategy: Strategy,
    lemma_flags: Optional[Sequence[bool]] = None,
    score: str = "global",
) -> float:
    graph_en, graph_zh = graphs
    pairs = [
        (score_entry(e, graph_en, score), score_entry(e, graph_zh, score))
        for e in dev_entries
    ]
    labels = [e.label for e in dev_entries]
    gamma, _ = tune_gamma_from_scores(pairs, labels, lemma_flags, strategy)
    return gamma


# ---------------------------------------------------------------------------
# full runs

@dataclass
class EvalConfig:
    graph_zh: Path
    dev: Path
    test: Path
    graph_en: Optional[Path] = None
    strategy: Optional[Strategy] = None
    gamma: Optional[float] = None
    sweep_gamma: bool = False
    lemma: str = "zh"  # zh | en | none
    lemma_dataset_dev: Optional[Path] = None
    lemma_dataset_test: Optional[Path] = None
    backtrans_dev: Optional[Path] = None
    backtrans_test: Optional[Path] = None
    score: str = "global"
    rescale_auc: bool = False
    out_dir: Optional[Path] = None
    dump_scores: bool = False


@dataclass
class SettingResult:
    name: str
    gamma: Optional[float]
    dev_auc: float
    test_auc: float
    dev_curve: PRCurve
    test_curve: PRCurve


@dataclass
class EvalReport:
    settings: list[SettingResult] = field(default_factory=list)

    def rows(self) -> list[str]:
        out = []
        for s in self.settings:
            gamma = "" if s.gamma is None else repr(s.gamma)
            out.append(f"{s.name}\t{s.dev_auc!r}\t{s.test_auc!r}\t{gamma}")
        return out


def _normalizer_for(name: str) -> Optional[Normalizer]:
    if name == "zh":
        return zh_normalizer
    if name == "en":
        return en_normalizer
    if name == "none":
        return None
    raise EvalError(f"unknown lemma normalizer {name!r}")


def _lemma_flags(entries, normalizer: Optional[Normalizer]) -> list[bool]:
    if normalizer is None:
        return [False] * len(entries)
    return [lemma_match(e.premise, e.hypothesis, normalizer) for e in entries]


def run_eval(config: EvalConfig) -> EvalReport:
    """Score dev/test under the configured settings and emit report rows plus
    curve files.  Supports a single graph, an ensemble of two graphs, and the
    back-translation ensemble of one graph over two parallel datasets."""
    for path in (config.graph_zh, config.dev, config.test):
        if path is None or not Path(path).exists():
            raise EvalError(f"missing required input: {path}")
    graph_zh = load_graph(config.graph_zh)
    dev = load_dataset(config.dev)
    test = load_dataset(config.test)
    normalizer = _normalizer_for(config.lemma)
    dev_flags = _lemma_flags(
        load_dataset(config.lemma_dataset_dev) if config.lemma_dataset_dev else dev, normalizer
    )
    test_flags = _lemma_flags(
        load_dataset(config.lemma_dataset_test) if config.lemma_dataset_test else test, normalizer
    )
    if len(dev_flags) != len(dev) or len(test_flags) != len(test):
        raise EvalError("lemma dataset is not row-aligned with the scored dataset")

    report = EvalReport()
    dump: list[tuple[str, str, list[float], list[bool], list[bool]]] = []

    def add(name, gamma, dev_scores, test_scores):
        dev_curve = pr_curve(dev_scores, [e.label for e in dev], dev_flags)
        test_curve = pr_curve(test_scores, [e.label for e in test], test_flags)
        report.settings.append(
            SettingResult(
                name=name,
                gamma=gamma,
                dev_auc=auc_half_precision(dev_curve, rescale=config.rescale_auc),
                test_auc=auc_half_precision(test_curve, rescale=config.rescale_auc),
                dev_curve=dev_curve,
                test_curve=test_curve,
            )
        )
        dump.append((name, "dev", dev_scores, [e.label for e in dev], dev_flags))
        dump.append((name, "test", test_scores, [e.label for e in test], test_flags))

    zh_dev = [score_entry(e, graph_zh, config.score) for e in dev]
    zh_test = [score_entry(e, graph_zh, config.score) for e in test]

    strategies = [config.strategy] if config.strategy else list(Strategy)

    if config.backtrans_dev or config.backtrans_test:
        if not (config.backtrans_dev and config.backtrans_test):
            raise EvalError("back-translation needs both dev and test datasets")
        bt_dev = load_dataset(config.backtrans_dev)
        bt_test = load_dataset(config.backtrans_test)
        if len(bt_dev) != len(dev) or len(bt_test) != len(test):
            raise EvalError("back-translated datasets must be row-aligned")
        bt_dev_scores = [score_entry(e, graph_zh, config.score) for e in bt_dev]
        bt_test_scores = [score_entry(e, graph_zh, config.score) for e in bt_test]
        for strategy in strategies:
            gamma = config.gamma
            if config.sweep_gamma or gamma is None:
                gamma, _ = tune_gamma_from_scores(
                    list(zip(zh_dev, bt_dev_scores)), [e.label for e in dev], dev_flags,
                    strategy, rescale=config.rescale_auc,
                )
            spec = EnsembleSpec(strategy, gamma)
            add(
                f"backtrans_{strategy.value}", gamma,
                [ensemble(a, b, spec) for a, b in zip(zh_dev, bt_dev_scores)],
                [ensemble(a, b, spec) for a, b in zip(zh_test, bt_test_scores)],
            )
    elif config.graph_en:
        graph_en = load_graph(config.graph_en)
        en_dev = [score_entry(e, graph_en, config.score) for e in dev]
        en_test = [score_entry(e, graph_en, config.score) for e in test]
        for strategy in strategies:
            gamma = config.gamma
            if config.sweep_gamma or gamma is None:
                gamma, _ = tune_gamma_from_scores(
                    list(zip(en_dev, zh_dev)), [e.label for e in dev], dev_flags,
                    strategy, rescale=config.rescale_auc,
                )
            spec = EnsembleSpec(strategy, gamma)
            add(
                f"ensemble_{strategy.value}", gamma,
                [ensemble(a, b, spec) for a, b in zip(en_dev, zh_dev)],
                [ensemble(a, b, spec) for a, b in zip(en_test, zh_test)],
            )
    else:
        add("single", None, zh_dev, zh_test)

    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        header = "setting\tdev_auc\ttest_auc\tgamma"
        (out / "report.tsv").write_text("\n".join([header] + report.rows()) + "\n", "utf-8")
        for s in report.settings:
            for split, curve in (("dev", s.dev_curve), ("test", s.test_curve)):
                lines = [f"{r!r}\t{p!r}" for r, p in curve.points]
                (out / f"{s.name}_{split}_curve.tsv").write_text("\n".join(lines) + "\n", "utf-8")
        if config.dump_scores:
            for name, split, scores, labels, flags in dump:
                lines = ["index\tscore\tlabel\tlemma"]
                for i, (sc, lb, fl) in enumerate(zip(scores, labels, flags)):
                    lines.append(f"{i}\t{sc!r}\t{int(lb)}\t{int(fl)}")
                (out / f"{name}_{split}_scores.tsv").write_text("\n".join(lines) + "\n", "utf-8")
    return report
