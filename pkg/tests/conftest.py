from pathlib import Path

import pytest

from entgraph.ingest import AnnotatedSentence, EntityMention, Sentence, Token

FIXTURES = Path(__file__).parent / "fixtures"


def build_sentence(tokens, mentions=(), article_id="t", sent_index=0) -> AnnotatedSentence:
    """tokens: list of (form, pos, head, deprel); mentions: (start, end, labels)."""
    toks = tuple(
        Token(i, form, pos, head, deprel)
        for i, (form, pos, head, deprel) in enumerate(tokens, start=1)
    )
    ments = tuple(EntityMention(s, e, tuple(labels)) for s, e, labels in mentions)
    text = "".join(t.form for t in toks)
    return AnnotatedSentence(Sentence(article_id, sent_index, text), toks, ments)


@pytest.fixture(scope="session")
def gold_sentences() -> dict[str, AnnotatedSentence]:
    from entgraph.ingest import load_annotations

    return {
        s.sentence.article_id: s
        for s in load_annotations(FIXTURES / "gold_parses.jsonl")
    }
