"""Pick the single relation most representative of a whole sentence."""
from __future__ import annotations

import random
from typing import Optional

from ..ingest import AnnotatedSentence
from .forms import RelationTriple


def select_representative(
    relations: list[RelationTriple],
    sent: AnnotatedSentence,
    rng: Optional[random.Random] = None,
) -> Optional[RelationTriple]:
    """Tiered choice: amended relations covering the root verb win, then
    non-amended ones covering it, then anything; ties break by a seeded
    uniform draw so runs stay reproducible.  Returns None when the sentence
    yielded no relations at all.
    """
    if not relations:
        return None
    rng = rng or random.Random(0)
    hed = next((t.index for t in sent.tokens if t.deprel == "HED"), 0)
    tier1 = [r for r in relations if r.amended and r.covers(hed)]
    if tier1:
        return rng.choice(tier1)
    tier2 = [r for r in relations if not r.amended and r.covers(hed)]
    if tier2:
        return rng.choice(tier2)
    return rng.choice(relations)
