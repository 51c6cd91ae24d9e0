"""Typed entailment graphs: co-occurrence counting, distributional-inclusion
scores, and softly-constrained global score learning.

Predicates are grouped into one subgraph per (subject-type, object-type)
pair.  Within a subgraph, each predicate gets a sparse feature vector over
the argument pairs it was seen with (positive PMI weights); directed edge
scores are the geometric mean of the symmetric Lin similarity and the
directional Weeds precision.  Global learning then nudges the local scores
toward transitive closure, consistent paraphrase patterns, and agreement
across subgraphs, with a regularizer pulling back toward the local scores.
"""
from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .figer import TypedTriple

TypePair = tuple[str, str]
ArgPair = tuple[str, str]

INVERSE_SUFFIX = "@inv"
FORMAT_VERSION = 1


class GraphError(Exception):
    pass


def _swap(pair):
    return (pair[1], pair[0])


class TripleStore:
    """Occurrence counts of (typed predicate, argument pair) observations."""

    def __init__(self):
        self.counts: Counter[tuple[TypePair, str, ArgPair]] = Counter()

    def add(self, pred: str, subj: str, obj: str, type_pairs: Iterable[TypePair], times: int = 1) -> None:
        for pair in type_pairs:
            self.counts[(pair, pred, (subj, obj))] += times

    @classmethod
    def from_typed_triples(cls, triples: Iterable[TypedTriple]) -> "TripleStore":
        store = cls()
        for t in triples:
            store.add(t.pred, t.subj_text, t.obj_text, sorted(t.type_pairs))
        return store

    def pred_counts(self) -> Counter:
        out: Counter = Counter()
        for (pair, pred, _), c in self.counts.items():
            out[(pair, pred)] += c
        return out

    def arg_counts(self) -> Counter:
        out: Counter = Counter()
        for (_, _, arg), c in self.counts.items():
            out["#".join(arg)] += c
        return out

    def __len__(self) -> int:
        return len(self.counts)


def filter_triples(store: TripleStore, min_pred: int = 2, min_arg: int = 2) -> TripleStore:
    """Keep entries whose predicate and argument-pair totals meet the floors.

    Totals are computed once on the unfiltered store; dropping entries does
    not cascade into further drops.
    """
    preds = store.pred_counts()
    args = store.arg_counts()
    kept = TripleStore()
    for (pair, pred, arg), c in store.counts.items():
        if preds[(pair, pred)] >= min_pred and args["#".join(arg)] >= min_arg:
            kept.counts[(pair, pred, arg)] = c
    return kept


@dataclass
class FeatureVector:
    features: dict[ArgPair, float]

    def total(self) -> float:
        return sum(self.features.values())

    def __bool__(self) -> bool:
        return bool(self.features)


def build_features(store: TripleStore, weighting: str = "ppmi") -> dict[TypePair, dict[str, FeatureVector]]:
    """Feature vectors per predicate, grouped by type pair.

    Weights are positive PMI by default; `weighting="count"` keeps raw
    co-occurrence counts instead.  Every observation also feeds the mirrored
    subgraph: the predicate is indexed under the reversed type pair with its
    arguments swapped (node name suffixed), so inverse relations can be
    scored against each other.
    """
    if weighting not in ("ppmi", "count"):
        raise GraphError(f"unknown feature weighting {weighting!r}")
    tables: dict[TypePair, Counter] = defaultdict(Counter)
    for (pair, pred, arg), c in store.counts.items():
        tables[pair][(pred, arg)] += c
        tables[_swap(pair)][(pred + INVERSE_SUFFIX, (arg[1], arg[0]))] += c

    out: dict[TypePair, dict[str, FeatureVector]] = {}
    for pair, table in tables.items():
        total = sum(table.values())
        pred_tot: Counter = Counter()
        arg_tot: Counter = Counter()
        for (pred, arg), c in table.items():
            pred_tot[pred] += c
            arg_tot[arg] += c
        vectors: dict[str, FeatureVector] = {}
        for (pred, arg), c in table.items():
            if weighting == "count":
                weight = float(c)
            else:
                weight = max(0.0, math.log((c * total) / (pred_tot[pred] * arg_tot[arg])))
            vectors.setdefault(pred, FeatureVector({})).features[arg] = weight
        out[pair] = vectors
    return out


def binc(u: FeatureVector, v: FeatureVector) -> float:
    """sqrt(Lin(u,v) * WeedsPrec(u->v)) over positive-weight features.

    Lin sums w_u(f)+w_v(f) over the shared features, normalized by both
    vectors' totals; WeedsPrec is the share of u's weight mass that falls on
    features v also has.
    """
    if not u.features:
        raise ValueError("premise feature vector is empty")
    if not v.features:
        return 0.0
    sum_u = u.total()
    sum_v = v.total()
    if sum_u <= 0.0 or sum_u + sum_v <= 0.0:
        return 0.0
    shared = u.features.keys() & v.features.keys()
    if not shared:
        return 0.0
    lin = sum(u.features[f] + v.features[f] for f in shared) / (sum_u + sum_v)
    weeds = sum(u.features[f] for f in shared) / sum_u
    return math.sqrt(lin * weeds)


@dataclass
class EdgeScores:
    local: float
    global_: float


@dataclass
class Subgraph:
    type_pair: TypePair
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], EdgeScores] = field(default_factory=dict)


@dataclass
class EntailmentGraph:
    subgraphs: dict[TypePair, Subgraph] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def edge(self, pair: TypePair, u: str, v: str) -> Optional[EdgeScores]:
        sub = self.subgraphs.get(pair)
        return sub.edges.get((u, v)) if sub else None


def build_local_graph(
    store: TripleStore,
    edge_floor: float = 0.01,
    metadata: Optional[dict] = None,
    weighting: str = "ppmi",
) -> EntailmentGraph:
    """Score all ordered predicate pairs that share a feature, per type pair.

    Edges scoring below the floor are omitted; global scores start equal to
    the local ones.
    """
    graph = EntailmentGraph(metadata=dict(metadata or {}))
    for pair, vectors in sorted(build_features(store, weighting=weighting).items()):
        sub = Subgraph(type_pair=pair, nodes=set(vectors))
        by_feature: dict[ArgPair, list[str]] = defaultdict(list)
        for pred, vec in vectors.items():
            for f, w in vec.features.items():
                if w > 0.0:
                    by_feature[f].append(pred)
        candidates: set[tuple[str, str]] = set()
        for preds in by_feature.values():
            for u in preds:
                for v in preds:
                    if u != v:
                        candidates.add((u, v))
        for u, v in sorted(candidates):
            score = binc(vectors[u], vectors[v])
            if score >= edge_floor:
                sub.edges[(u, v)] = EdgeScores(local=score, global_=score)
        graph.subgraphs[pair] = sub
    return graph


def global_learn(
    graph: EntailmentGraph,
    epochs: int = 3,
    lambda_trans: float = 1.0,
    lambda_para: float = 0.5,
    lambda_cross: float = 0.5,
    lambda_reg: float = 1.0,
    paraphrase_floor: float = 0.5,
    edge_floor: float = 0.01,
) -> EntailmentGraph:
    """Iteratively move edge scores toward soft global constraints.

    Each epoch recomputes every candidate edge (existing edges plus two-hop
    pairs) as a lambda-weighted average of: the strongest two-hop path (a
    raise-only transitivity target), the mean score paraphrase partners give
    the same target, the mean score of the same predicate pair in other
    subgraphs, and the local score.  Scores stay in [0, 1]; with zero epochs
    the graph is returned untouched.
    """
    if epochs <= 0:
        return graph
    for epoch in range(epochs):
        old: dict[TypePair, dict[tuple[str, str], float]] = {
            pair: {e: s.global_ for e, s in sub.edges.items()}
            for pair, sub in graph.subgraphs.items()
        }
        # cross-subgraph view, synchronized between epochs
        cross: dict[tuple[str, str], list[float]] = defaultdict(list)
        for pair, edges in old.items():
            for e, s in edges.items():
                cross[e].append(s)

        for pair in sorted(graph.subgraphs):
            sub = graph.subgraphs[pair]
            g_old = old[pair]
            out: dict[str, dict[str, float]] = defaultdict(dict)
            for (u, v), s in g_old.items():
                out[u][v] = s
            candidates: set[tuple[str, str]] = set(g_old)
            for u in out:
                for v in out[u]:
                    for w in out.get(v, ()):
                        if w != u:
                            candidates.add((u, w))
            partners: dict[str, list[str]] = defaultdict(list)
            for (u, v), s in g_old.items():
                if min(s, g_old.get((v, u), 0.0)) >= paraphrase_floor:
                    partners[u].append(v)

            new_edges: dict[tuple[str, str], EdgeScores] = {}
            for u, w in sorted(candidates):
                current = g_old.get((u, w), 0.0)
                existing = sub.edges.get((u, w))
                local = existing.local if existing else 0.0
                two_hop = 0.0
                for v, s_uv in out.get(u, {}).items():
                    if v == w:
                        continue
                    s_vw = out.get(v, {}).get(w)
                    if s_vw is not None:
                        two_hop = max(two_hop, min(s_uv, s_vw))
                num = lambda_trans * max(current, two_hop) + lambda_reg * local
                den = lambda_trans + lambda_reg
                mates = partners.get(u)
                if mates:
                    para = sum(g_old.get((p, w), 0.0) for p in mates) / len(mates)
                    num += lambda_para * para
                    den += lambda_para
                shared = cross.get((u, w), [])
                if len(shared) >= 2:
                    num += lambda_cross * (sum(shared) / len(shared))
                    den += lambda_cross
                value = num / den
                if not math.isfinite(value):
                    raise GraphError(
                        f"non-finite score for {u!r}->{w!r} in {pair} at epoch {epoch}"
                    )
                value = min(1.0, max(0.0, value))
                new_edges[(u, w)] = EdgeScores(local=local, global_=value)
            sub.edges = new_edges
    # drop edges that ended up below the floor on both scores
    for sub in graph.subgraphs.values():
        sub.edges = {
            e: s for e, s in sub.edges.items()
            if s.local >= edge_floor or s.global_ >= edge_floor
        }
    graph.metadata["epochs"] = graph.metadata.get("epochs", 0) + epochs
    return graph


# ---------------------------------------------------------------------------
# serialization


def _check_name(name: str) -> str:
    if not name or any(ch.isspace() for ch in name):
        raise GraphError(f"node name {name!r} is empty or contains whitespace")
    return name


def serialize_graph(graph: EntailmentGraph, dirpath: str | Path) -> None:
    """One text file per type pair plus a meta.json; float repr round-trips."""
    dirpath = Path(dirpath)
    dirpath.mkdir(parents=True, exist_ok=True)
    meta = {"format_version": FORMAT_VERSION, "metadata": graph.metadata}
    (dirpath / "meta.json").write_text(
        json.dumps(meta, ensure_ascii=False, sort_keys=True, indent=2) + "\n", "utf-8"
    )
    for (t1, t2), sub in sorted(graph.subgraphs.items()):
        lines = [f"typepair {t1} {t2}"]
        outgoing: dict[str, list[tuple[str, EdgeScores]]] = defaultdict(list)
        for (u, v), s in sub.edges.items():
            outgoing[u].append((v, s))
        for node in sorted(sub.nodes):
            lines.append(f"pred: {_check_name(node)}")
            for v, s in sorted(outgoing.get(node, [])):
                lines.append(f"{_check_name(v)} {s.local!r} {s.global_!r}")
        (dirpath / f"{t1}#{t2}.sg").write_text("\n".join(lines) + "\n", "utf-8")


def _parse_score(text: str, path: Path, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise GraphError(f"{path}:{lineno}: bad score {text!r}") from exc
    if not (0.0 <= value <= 1.0):
        raise GraphError(f"{path}:{lineno}: score {value} outside [0, 1]")
    return value


def load_graph(dirpath: str | Path) -> EntailmentGraph:
    dirpath = Path(dirpath)
    meta_path = dirpath / "meta.json"
    metadata: dict = {}
    if meta_path.exists():
        meta = json.loads(meta_path.read_text("utf-8"))
        if meta.get("format_version") != FORMAT_VERSION:
            raise GraphError(f"{meta_path}: unsupported format version {meta.get('format_version')!r}")
        metadata = meta.get("metadata", {})
    graph = EntailmentGraph(metadata=metadata)
    for path in sorted(dirpath.glob("*.sg")):
        with path.open("r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            parts = header.split()
            if len(parts) != 3 or parts[0] != "typepair":
                raise GraphError(f"{path}: bad header {header!r}")
            pair = (parts[1], parts[2])
            if path.name != f"{pair[0]}#{pair[1]}.sg":
                raise GraphError(f"{path}: header {pair} does not match file name")
            sub = Subgraph(type_pair=pair)
            declared: set[str] = set()
            current: Optional[str] = None
            for lineno, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("pred: "):
                    current = line[len("pred: "):]
                    if current in declared:
                        raise GraphError(f"{path}:{lineno}: duplicate node {current!r}")
                    declared.add(current)
                    sub.nodes.add(current)
                    continue
                if current is None:
                    raise GraphError(f"{path}:{lineno}: edge before any pred block")
                cols = line.rsplit(" ", 2)
                if len(cols) != 3:
                    raise GraphError(f"{path}:{lineno}: expected '<pred> <local> <global>'")
                target = cols[0]
                sub.nodes.add(target)
                sub.edges[(current, target)] = EdgeScores(
                    local=_parse_score(cols[1], path, lineno),
                    global_=_parse_score(cols[2], path, lineno),
                )
            if pair in graph.subgraphs:
                raise GraphError(f"{path}: duplicate type pair {pair}")
            graph.subgraphs[pair] = sub
    return graph


def census(graph: EntailmentGraph) -> dict:
    """Subgraph-size report: how many type pairs exceed each size bucket."""
    sizes = [len(sub.nodes) for sub in graph.subgraphs.values()]
    return {
        "type_pairs_with_subgraph": len(sizes),
        "subgraphs_over_100": sum(1 for s in sizes if s > 100),
        "subgraphs_over_1000": sum(1 for s in sizes if s > 1000),
        "subgraphs_over_10000": sum(1 for s in sizes if s > 10000),
        "predicates_total": sum(sizes),
        "edges_total": sum(len(sub.edges) for sub in graph.subgraphs.values()),
    }
