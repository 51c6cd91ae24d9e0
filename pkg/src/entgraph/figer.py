"""Entity-type machinery: the two-layer FIGER ontology, the ultra-fine label
mapping, and type-pair assignment for extracted triples."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .ingest import AnnotatedSentence, EntityMention
from .ore import RelationTriple

FALLBACK_TYPE = "thing"  # bucket for arguments no mention label covers

MAX_TYPES_PER_LABEL = 3


class MappingError(Exception):
    pass


def _load_ontology() -> tuple[frozenset[str], frozenset[str]]:
    text = resources.files("entgraph.data").joinpath("figer_types.txt").read_text("utf-8")
    paths = frozenset(line.strip() for line in text.splitlines() if line.strip())
    layer1 = frozenset(p.split("/")[0] for p in paths)
    return paths, layer1


FIGER_PATHS, FIGER_LAYER1 = _load_ontology()


@dataclass(frozen=True)
class FigerType:
    path: tuple[str, ...]

    def __post_init__(self):
        if not (1 <= len(self.path) <= 2):
            raise ValueError(f"FIGER paths have 1 or 2 segments, got {self.path}")
        if "/".join(self.path) not in FIGER_PATHS:
            raise ValueError(f"unknown FIGER type {'/'.join(self.path)!r}")

    @classmethod
    def parse(cls, text: str) -> "FigerType":
        return cls(tuple(seg for seg in text.strip().lstrip("/").split("/") if seg))

    @property
    def layer1(self) -> str:
        return self.path[0]

    def __str__(self) -> str:
        return "/".join(self.path)


def truncate_first_layer(t: FigerType | str) -> str:
    """First-layer segment of a FIGER type (idempotent on layer-1 strings)."""
    if isinstance(t, FigerType):
        return t.layer1
    return str(t).lstrip("/").split("/", 1)[0]


@dataclass(frozen=True)
class TypeMapping:
    entries: dict[str, tuple[FigerType, ...]]

    def get(self, ultra_fine: str) -> Optional[tuple[FigerType, ...]]:
        return self.entries.get(ultra_fine)

    def __len__(self) -> int:
        return len(self.entries)


def load_mapping(path: str | Path) -> TypeMapping:
    """Parse an `ultra_fine \\t figer_path[,figer_path...]` TSV.

    A label may map to at most three FIGER types; unknown paths, duplicate
    keys and malformed lines are rejected with their line number.
    """
    entries: dict[str, tuple[FigerType, ...]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) > 2:
                raise MappingError(f"{path}:{lineno}: expected at most 2 tab-separated columns")
            key = cols[0].strip()
            rhs = cols[1].strip() if len(cols) == 2 else ""  # bare label maps to nothing
            if not key:
                raise MappingError(f"{path}:{lineno}: empty label")
            if key in entries:
                raise MappingError(f"{path}:{lineno}: duplicate label {key!r}")
            types = []
            if rhs:
                for part in rhs.split(","):
                    try:
                        types.append(FigerType.parse(part))
                    except ValueError as exc:
                        raise MappingError(f"{path}:{lineno}: {exc}") from exc
            if len(types) > MAX_TYPES_PER_LABEL:
                raise MappingError(
                    f"{path}:{lineno}: {key!r} maps to {len(types)} FIGER types (max {MAX_TYPES_PER_LABEL})"
                )
            entries[key] = tuple(types)
    return TypeMapping(entries)


@dataclass
class RemapStats:
    unmapped: Counter = None  # ultra-fine labels absent from the mapping
    histogram: Counter = None  # mentions by resulting FIGER-type count

    def __post_init__(self):
        self.unmapped = self.unmapped or Counter()
        self.histogram = self.histogram or Counter()


def remap_dataset(
    mentions: Iterable[tuple[object, list[str]]],
    mapping: TypeMapping,
    stats: Optional[RemapStats] = None,
) -> Iterator[tuple[object, list[FigerType]]]:
    """Re-annotate (span, ultra-fine labels) pairs with mapped FIGER types.

    The result per mention is the deduplicated union over its labels;
    mentions that map to nothing are emitted with an empty list and counted,
    never dropped.
    """
    for span, labels in mentions:
        seen: dict[str, FigerType] = {}
        for label in labels:
            mapped = mapping.get(label)
            if mapped is None:
                if stats is not None:
                    stats.unmapped[label] += 1
                continue
            for t in mapped:
                seen.setdefault(str(t), t)
        result = list(seen.values())
        if stats is not None:
            stats.histogram[len(result)] += 1
        yield span, result


@dataclass(frozen=True)
class TypedTriple:
    triple: RelationTriple
    subj_text: str
    pred: str
    obj_text: str
    subj_types: frozenset[str]
    obj_types: frozenset[str]

    @property
    def type_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((s, o) for s in self.subj_types for o in self.obj_types)


def _best_mention(span: tuple[int, int], mentions: Iterable[EntityMention]) -> Optional[EntityMention]:
    """Maximal token overlap; ties go to the longer, then earlier, mention."""
    best, best_key = None, None
    lo, hi = span
    for m in mentions:
        overlap = min(hi, m.end) - max(lo, m.start) + 1
        if overlap <= 0:
            continue
        key = (overlap, m.end - m.start, -m.start)
        if best_key is None or key > best_key:
            best, best_key = m, key
    return best


def _layer1_types(mention: Optional[EntityMention]) -> frozenset[str]:
    if mention is None:
        return frozenset({FALLBACK_TYPE})
    layers = set()
    for label in mention.labels:
        head = truncate_first_layer(label)
        if head in FIGER_LAYER1:
            layers.add(head)
    return frozenset(layers) if layers else frozenset({FALLBACK_TYPE})


def types_for_span(span: tuple[int, int], mentions: Iterable[EntityMention]) -> frozenset[str]:
    """First-layer types of the best-aligned mention, or the fallback bucket."""
    return _layer1_types(_best_mention(span, mentions))


def assign_type_pairs(triple: RelationTriple, sent: AnnotatedSentence) -> TypedTriple:
    """Type a triple with the first-layer labels of its argument mentions.

    Every subject-type x object-type combination is kept; an argument no
    mention covers falls back to the untyped bucket.
    """
    subj_types = types_for_span(triple.subject, sent.mentions)
    obj_types = types_for_span(triple.object, sent.mentions)
    subj, pred, obj = triple.render(sent)
    return TypedTriple(
        triple=triple,
        subj_text=subj,
        pred=pred,
        obj_text=obj,
        subj_types=subj_types,
        obj_types=obj_types,
    )


def remap_sentence_mentions(sent: AnnotatedSentence, mapping: TypeMapping) -> AnnotatedSentence:
    """Replace ultra-fine mention labels with their mapped FIGER paths."""
    remapped = []
    for m in sent.mentions:
        labels: list[str] = []
        for label in m.labels:
            for t in mapping.get(label) or ():
                if str(t) not in labels:
                    labels.append(str(t))
        if labels:  # mentions mapping to nothing cannot type anything
            remapped.append(EntityMention(m.start, m.end, tuple(labels)))
    return AnnotatedSentence(sent.sentence, sent.tokens, tuple(remapped))
