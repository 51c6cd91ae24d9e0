"""Corpus ingestion: sentence splitting, annotation loading, dependency-tree checks."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

# Both widths of the clause-final punctuation marks, plus newline.
SENTENCE_BOUNDARIES = frozenset("。！？；.!?;\n")


class IngestError(Exception):
    """Fatal ingestion problem (unreadable file, duplicate article ids)."""


@dataclass(frozen=True)
class RawArticle:
    id: str
    source: str
    text: str


@dataclass(frozen=True)
class Sentence:
    article_id: str
    index: int
    text: str


@dataclass(frozen=True)
class Token:
    index: int      # 1-based position in the sentence
    form: str
    pos: str
    head: int       # 0 = root, otherwise 1-based index of the head token
    deprel: str


@dataclass(frozen=True)
class EntityMention:
    start: int      # inclusive 1-based token index
    end: int        # inclusive 1-based token index
    labels: tuple[str, ...]


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence: Sentence
    tokens: tuple[Token, ...]
    mentions: tuple[EntityMention, ...]

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class LineError:
    line: int
    message: str


def split_sentences(article: RawArticle, max_len: int = 500, min_len: int = 5) -> list[Sentence]:
    """Cut an article into sentences at clause-final punctuation.

    Spans longer than max_len (no boundary found) are hard-split at exactly
    max_len characters.  Sentences shorter than min_len are dropped; if none
    survive, the article yields no sentences at all.  Lengths count unicode
    scalar values, punctuation included.
    """
    pieces: list[str] = []
    buf: list[str] = []
    for ch in article.text:
        if ch in SENTENCE_BOUNDARIES:
            if ch != "\n":
                buf.append(ch)
            if buf:
                pieces.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        pieces.append("".join(buf))

    kept: list[Sentence] = []
    for piece in pieces:
        piece = piece.strip()
        # hard split over-long spans at exactly max_len
        chunks = [piece[i:i + max_len] for i in range(0, len(piece), max_len)] or [""]
        for chunk in chunks:
            if min_len <= len(chunk) <= max_len:
                kept.append(Sentence(article.id, len(kept), chunk))
    return kept


def _parse_annotated(obj: dict) -> AnnotatedSentence:
    sent = Sentence(str(obj["article_id"]), int(obj["sent_index"]), str(obj["text"]))
    raw_tokens = obj["tokens"]
    if not isinstance(raw_tokens, list) or not raw_tokens:
        raise ValueError("tokens must be a non-empty list")
    tokens = tuple(
        Token(int(t["i"]), str(t["form"]), str(t["pos"]), int(t["head"]), str(t["deprel"]))
        for t in raw_tokens
    )
    n = len(tokens)
    for pos, tok in enumerate(tokens, start=1):
        if tok.index != pos:
            raise ValueError(f"token index {tok.index} out of sequence (expected {pos})")
    mentions = []
    for m in obj.get("mentions", []):
        start, end = int(m["start"]), int(m["end"])
        labels = tuple(str(x) for x in m["labels"])
        if not (1 <= start <= end <= n):
            raise ValueError(f"mention span [{start},{end}] outside sentence of {n} tokens")
        if not labels:
            raise ValueError("mention with empty label list")
        mentions.append(EntityMention(start, end, labels))
    return AnnotatedSentence(sent, tokens, tuple(mentions))


def sentence_to_json(sent: AnnotatedSentence) -> dict:
    return {
        "article_id": sent.sentence.article_id,
        "sent_index": sent.sentence.index,
        "text": sent.sentence.text,
        "tokens": [
            {"i": t.index, "form": t.form, "pos": t.pos, "head": t.head, "deprel": t.deprel}
            for t in sent.tokens
        ],
        "mentions": [
            {"start": m.start, "end": m.end, "labels": list(m.labels)} for m in sent.mentions
        ],
    }


def load_annotations(path: str | Path, errors: Optional[list[LineError]] = None) -> Iterator[AnnotatedSentence]:
    """Lazily yield annotated sentences from a JSONL file.

    Malformed lines are recorded in `errors` (when given) with their 1-based
    line number and skipped; an unreadable file raises IngestError.
    """
    path = Path(path)
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    with handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                yield _parse_annotated(obj)
            except (ValueError, KeyError, TypeError) as exc:
                if errors is not None:
                    errors.append(LineError(lineno, f"line {lineno}: {exc}"))


def validate_tree(sent: AnnotatedSentence) -> list[str]:
    """Check the dependency tree; returns violation descriptions (empty = valid)."""
    violations: list[str] = []
    n = len(sent.tokens)
    roots = [t for t in sent.tokens if t.deprel == "HED"]
    if len(roots) > 1:
        violations.append("multiple roots (more than one HED token)")
    elif not roots:
        violations.append("no root (no HED token)")
    zero_heads = [t for t in sent.tokens if t.head == 0]
    if len(zero_heads) != 1:
        violations.append(f"expected exactly one token with head 0, found {len(zero_heads)}")
    elif roots and zero_heads[0].index != roots[0].index:
        violations.append("HED token is not the head-0 token")
    for tok in sent.tokens:
        if not (0 <= tok.head <= n):
            violations.append(f"head out of range at token {tok.index}")
        elif tok.head == tok.index:
            violations.append(f"cycle at token {tok.index} (self-head)")
    if not violations:
        for tok in sent.tokens:
            seen = set()
            cur = tok.index
            while cur != 0:
                if cur in seen:
                    violations.append(f"cycle involving token {tok.index}")
                    break
                seen.add(cur)
                cur = sent.token(cur).head
            if violations:
                break
    return violations


# ---------------------------------------------------------------------------
# corpus-level ingestion


@dataclass
class IngestStats:
    articles_in: int = 0
    articles_kept: int = 0
    sentences_in: int = 0
    sentences_kept: int = 0
    invalid_trees: int = 0
    line_errors: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def read_raw_articles(path: str | Path) -> Iterator[RawArticle]:
    """Read raw articles from a JSONL file of {"id","source","text"} records."""
    path = Path(path)
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                art = RawArticle(str(obj["id"]), str(obj.get("source", "")), str(obj.get("text", "")))
            except (ValueError, KeyError, TypeError) as exc:
                raise IngestError(f"{path}:{lineno}: bad article record: {exc}") from exc
            if art.id in seen:
                raise IngestError(f"{path}:{lineno}: duplicate article id {art.id!r}")
            seen.add(art.id)
            yield art


def ingest_annotated_corpus(
    files: Iterable[str | Path],
    max_len: int = 500,
    min_len: int = 5,
    errors: Optional[list[LineError]] = None,
) -> tuple[list[AnnotatedSentence], IngestStats]:
    """Filter and validate pre-annotated sentences from one or more JSONL files.

    Applies the sentence-length window, drops articles with no surviving
    sentence, and rejects sentences whose dependency trees fail validation.
    Duplicate article ids across files are fatal.
    """
    stats = IngestStats()
    by_article: dict[str, list[AnnotatedSentence]] = {}
    article_file: dict[str, str] = {}
    order: list[str] = []
    for file in files:
        file = str(file)
        for sent in load_annotations(file, errors=errors):
            stats.sentences_in += 1
            aid = sent.sentence.article_id
            if aid in article_file:
                if article_file[aid] != file:
                    raise IngestError(
                        f"duplicate article id {aid!r} in {file} (already in {article_file[aid]})"
                    )
            else:
                by_article[aid] = []
                article_file[aid] = file
                order.append(aid)
            by_article[aid].append(sent)
    if errors is not None:
        stats.line_errors = len(errors)

    kept: list[AnnotatedSentence] = []
    stats.articles_in = len(order)
    for aid in order:
        survivors = []
        for sent in by_article[aid]:
            if not (min_len <= len(sent.sentence.text) <= max_len):
                continue
            if validate_tree(sent):
                stats.invalid_trees += 1
                continue
            survivors.append(sent)
        if survivors:
            stats.articles_kept += 1
            kept.extend(survivors)
    stats.sentences_kept = len(kept)
    return kept, stats


def ingest_raw_corpus(files: Iterable[str | Path], max_len: int = 500, min_len: int = 5) -> tuple[list[Sentence], IngestStats]:
    """Split raw articles into filtered sentences (pre-annotation output)."""
    stats = IngestStats()
    out: list[Sentence] = []
    for file in files:
        for art in read_raw_articles(file):
            stats.articles_in += 1
            sents = split_sentences(art, max_len=max_len, min_len=min_len)
            if sents:
                stats.articles_kept += 1
                out.extend(sents)
    stats.sentences_kept = len(out)
    stats.sentences_in = stats.sentences_kept
    return out, stats
