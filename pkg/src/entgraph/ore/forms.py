"""Relation triple data types: composite predicates, spans, construction tags."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from ..ingest import AnnotatedSentence


class Marker(enum.Enum):
    """Synthetic predicate elements that are not tokens of the sentence.

    X stands for the argument slot folded into the predicate, DE for a
    synthetic possessive particle, PRO for an inferable covert object, NEG
    for odd-count negation, IS for the synthetic copula of re-oriented
    nominal compounds.  Rendering is literal; a real 的 token enters the
    predicate as a TokenRef instead and renders as its surface form.
    """

    X = "X"
    DE = "DE"
    PRO = "PRO"
    NEG = "NEG"
    IS = "is"


Part = Union[int, Marker]  # int = 1-based token index (TokenRef)


@dataclass(frozen=True)
class PredicateForm:
    parts: tuple[Part, ...]

    def lemma_string(self, sent: AnnotatedSentence) -> str:
        out = []
        for p in self.parts:
            out.append(p.value if isinstance(p, Marker) else sent.token(p).form)
        return "·".join(out)

    def token_refs(self) -> tuple[int, ...]:
        return tuple(p for p in self.parts if isinstance(p, int))

    def has_marker(self, marker: Marker) -> bool:
        return any(p is marker for p in self.parts)


class Construction(str, enum.Enum):
    DSNF1 = "DSNF1"
    DSNF2 = "DSNF2"
    DSNF3 = "DSNF3"
    DSNF4 = "DSNF4"
    DSNF5 = "DSNF5"
    DSNF6 = "DSNF6"
    DSNF7 = "DSNF7"
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    C = "C"
    D = "D"
    E = "E"


@dataclass(frozen=True)
class RelationTriple:
    subject: tuple[int, int]        # inclusive 1-based token range
    predicate: PredicateForm
    object: tuple[int, int]
    construction: Construction
    amended: bool
    negated: bool
    pred_head: int                  # anchor token of the predicate (sort key)

    def covers(self, index: int) -> bool:
        return index in self.predicate.token_refs()

    def render(self, sent: AnnotatedSentence) -> tuple[str, str, str]:
        subj = "".join(sent.token(i).form for i in range(self.subject[0], self.subject[1] + 1))
        obj = "".join(sent.token(i).form for i in range(self.object[0], self.object[1] + 1))
        return subj, self.predicate.lemma_string(sent), obj


DEFAULT_NEGATION_WORDS = ("不", "没", "没有", "无", "未", "非", "别", "勿")


@dataclass(frozen=True)
class NegationLexicon:
    keywords: frozenset[str] = field(default_factory=lambda: frozenset(DEFAULT_NEGATION_WORDS))

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("negation lexicon must not be empty")

    def __contains__(self, form: str) -> bool:
        return form in self.keywords

    @classmethod
    def with_extra(cls, extra: tuple[str, ...] = ()) -> "NegationLexicon":
        return cls(frozenset(DEFAULT_NEGATION_WORDS) | frozenset(extra))

    @classmethod
    def from_file(cls, path) -> "NegationLexicon":
        words = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                word = line.strip()
                if word and not word.startswith("#"):
                    words.append(word)
        return cls(frozenset(words))
