"""Dependency-pattern relation extraction.

The extractor walks a validated dependency tree (Baidu label scheme: SBV,
VOB, POB, ATT, ADV, CMP, COO, VV, MT, HED) and emits binary relation
triples.  The seven baseline patterns handle plain S-V-O clauses,
preposition-object promotion, verb-complement folding, coordination
distribution, and nominal compounds; on top of those, the amendment rules
recover relations hidden in 的-modification structures (possessive
modifiers, relative clauses, restricted nominal compounds, covert-object
copulas) and in concatenated or controlled verb sequences.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..ingest import AnnotatedSentence
from .forms import Construction, Marker, NegationLexicon, Part, PredicateForm, RelationTriple

NOMINAL_POS = frozenset({"NN", "NR", "NT", "FW"})
PRONOUN_POS = frozenset({"PN"})
VERBAL_POS = frozenset({"VV", "VC", "VA", "VE"})
PREP_POS = frozenset({"P"})
DE_FORMS = frozenset({"的"})
COPULA_FORMS = frozenset({"是"})

_PERSON_LAYER = "person"
_TITLE_LAYERS = frozenset({"person", "title"})


@dataclass(frozen=True)
class ExtractorConfig:
    """Which rule families run; the baseline mode disables all amendments."""

    de_structures: bool = True       # possessive 的-modifiers of object / subject
    verb_chains: bool = True         # concatenated VPs and control cascades
    relative_clauses: bool = True    # 的-linked clause modifiers of NPs
    restricted_compounds: bool = True  # typed nominal compounds (supersedes the bare pattern)
    covert_copula: bool = True       # copula whose surface object is 的
    max_chain_verbs: int = 4
    lexicon: NegationLexicon = field(default_factory=NegationLexicon)


def dsnf_config(lexicon: Optional[NegationLexicon] = None) -> ExtractorConfig:
    """Baseline-only configuration: the seven bare patterns, no amendments."""
    return ExtractorConfig(
        de_structures=False,
        verb_chains=False,
        relative_clauses=False,
        restricted_compounds=False,
        covert_copula=False,
        lexicon=lexicon or NegationLexicon(),
    )


class _Tree:
    """Index the sentence for child lookups."""

    def __init__(self, sent: AnnotatedSentence):
        self.sent = sent
        self.n = len(sent.tokens)
        self.children: dict[int, list[int]] = {i: [] for i in range(0, self.n + 1)}
        for tok in sent.tokens:
            self.children[tok.head].append(tok.index)
        hed = [t.index for t in sent.tokens if t.deprel == "HED"]
        self.hed = hed[0] if hed else 0

    def form(self, i: int) -> str:
        return self.sent.token(i).form

    def pos(self, i: int) -> str:
        return self.sent.token(i).pos

    def deprel(self, i: int) -> str:
        return self.sent.token(i).deprel

    def head(self, i: int) -> int:
        return self.sent.token(i).head

    def kids(self, i: int, *deprels: str) -> list[int]:
        if not deprels:
            return self.children[i]
        return [c for c in self.children[i] if self.deprel(c) in deprels]

    def is_verb(self, i: int) -> bool:
        return self.pos(i) in VERBAL_POS

    def is_nominal(self, i: int) -> bool:
        return self.pos(i) in NOMINAL_POS

    def is_copula(self, i: int) -> bool:
        return self.pos(i) == "VC" or self.form(i) in COPULA_FORMS

    def de_child(self, i: int) -> Optional[int]:
        """The 的 particle attached directly under token i, if any."""
        for c in self.children[i]:
            if self.form(c) in DE_FORMS:
                return c
        return None

    def mention_layers(self, i: int) -> set[str]:
        """First layer of every mention label covering token i."""
        layers: set[str] = set()
        for m in self.sent.mentions:
            if m.start <= i <= m.end:
                for label in m.labels:
                    head = label.lstrip("/").split("/", 1)[0].strip().lower()
                    if head:
                        layers.add(head)
        return layers


def _argument_set(tree: _Tree, i: int) -> set[int]:
    out = {i}
    for c in tree.kids(i, "ATT"):
        if tree.is_verb(c):          # clause modifier, never part of the argument
            continue
        if tree.de_child(c) is not None:  # 的-linked modifier, extracted separately
            continue
        out |= _argument_set(tree, c)
    return out


def argument_span(tree: _Tree, i: int) -> tuple[int, int]:
    """Contiguous span of an argument token with its plain modifiers."""
    include = _argument_set(tree, i)
    lo, hi = min(include), max(include)
    if set(range(lo, hi + 1)) != include:
        return (i, i)
    return (lo, hi)


@dataclass(frozen=True)
class _Arg:
    token: int
    origin: str  # own | coo | group | vv | gap


def _with_conjuncts(tree: _Tree, token: int) -> list[_Arg]:
    args = [_Arg(token, "own")]
    stack = [token]
    while stack:
        cur = stack.pop()
        for c in tree.kids(cur, "COO"):
            if not tree.is_verb(c):
                args.append(_Arg(c, "coo"))
                stack.append(c)
    return args


class _Extractor:
    def __init__(self, sent: AnnotatedSentence, config: ExtractorConfig):
        self.sent = sent
        self.config = config
        self.tree = _Tree(sent)
        self.triples: list[RelationTriple] = []
        self._seen: set[tuple] = set()
        self._subjects: dict[int, list[_Arg]] = {}
        self._verb_groups = self._build_verb_groups()
        self._claimed_copulas = self._find_covert_copulas() if config.covert_copula else {}

    # -- structure helpers ---------------------------------------------------

    def _build_verb_groups(self) -> dict[int, list[int]]:
        """Connected components of verbs linked by COO edges."""
        tree = self.tree
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        verbs = [t.index for t in self.sent.tokens if tree.is_verb(t.index)]
        for v in verbs:
            h = tree.head(v)
            if tree.deprel(v) == "COO" and h != 0 and tree.is_verb(h):
                parent[find(v)] = find(h)
        groups: dict[int, list[int]] = {}
        for v in verbs:
            groups.setdefault(find(v), []).append(v)
        return {v: sorted(groups[find(v)]) for v in verbs}

    def _find_covert_copulas(self) -> dict[int, int]:
        """Copula token -> its 的 surface object."""
        out = {}
        for tok in self.sent.tokens:
            v = tok.index
            if not self.tree.is_copula(v):
                continue
            for d in self.tree.kids(v, "VOB"):
                if self.tree.form(d) in DE_FORMS:
                    out[v] = d
        return out

    def _own_subjects(self, v: int) -> list[_Arg]:
        out: list[_Arg] = []
        for s in self.tree.kids(v, "SBV"):
            out.extend(_with_conjuncts(self.tree, s))
        return out

    def _own_objects(self, v: int) -> list[_Arg]:
        out: list[_Arg] = []
        for o in self.tree.kids(v, "VOB"):
            if self.config.covert_copula and self._claimed_copulas.get(v) == o:
                continue  # defective 的 object, repaired (or dropped) by the copula rule
            out.extend(_with_conjuncts(self.tree, o))
        return out

    def _clause_host(self, v: int) -> Optional[int]:
        """The NP that verb v modifies as a 的-linked relative clause."""
        if self.tree.deprel(v) != "ATT":
            return None
        if self.tree.de_child(v) is None:
            return None
        host = self.tree.head(v)
        if host == 0 or self.tree.is_verb(host) or self.tree.pos(host) in PRONOUN_POS:
            return None
        return host

    def _resolve(self, v: int) -> tuple[list[_Arg], list[_Arg]]:
        """Subject and object lists for a verb, with borrowing origins."""
        subjects = self._own_subjects(v)
        objects = self._own_objects(v)
        if not subjects:
            group = [m for m in self._verb_groups.get(v, []) if m != v]
            borrowed = [a.token for m in group for a in self._own_subjects(m)]
            subjects = [_Arg(t, "group") for t in dict.fromkeys(borrowed)]
        if not objects:
            group = [m for m in self._verb_groups.get(v, []) if m != v]
            borrowed = [a.token for m in group for a in self._own_objects(m)]
            objects = [_Arg(t, "group") for t in dict.fromkeys(borrowed)]
        if not subjects and self.config.verb_chains and self.tree.deprel(v) == "VV":
            h = self.tree.head(v)
            if h != 0 and self.tree.is_verb(h):
                subjects = [_Arg(a.token, "vv") for a in self._subjects.get(h, [])]
        if self.config.relative_clauses:
            host = self._clause_host(v)
            if host is not None:
                if not subjects and objects:
                    subjects = [_Arg(host, "gap")]
                elif subjects and not objects:
                    objects = [_Arg(host, "gap")]
        self._subjects[v] = subjects
        return subjects, objects

    # -- emission ------------------------------------------------------------

    def _negation_parts(self, anchor: int) -> tuple[bool, int]:
        count = sum(1 for c in self.tree.kids(anchor, "ADV") if self.tree.form(c) in self.config.lexicon)
        return count % 2 == 1, count

    def _emit(
        self,
        subject: tuple[int, int],
        parts: list[Part],
        obj: tuple[int, int],
        construction: Construction,
        amended: bool,
        anchor: int,
    ) -> None:
        if subject[0] <= obj[1] and obj[0] <= subject[1]:
            return  # overlapping argument spans are never a relation
        negated, _ = self._negation_parts(anchor)
        if negated:
            at = parts.index(anchor) if anchor in parts else 0
            parts = parts[:at] + [Marker.NEG] + parts[at:]
        key = (subject, tuple(p.value if isinstance(p, Marker) else p for p in parts), obj)
        if key in self._seen:
            return
        self._seen.add(key)
        self.triples.append(
            RelationTriple(
                subject=subject,
                predicate=PredicateForm(tuple(parts)),
                object=obj,
                construction=construction,
                amended=amended,
                negated=negated,
                pred_head=anchor,
            )
        )

    def _base_tag(self, s: _Arg, o: _Arg, shape: Optional[Construction]) -> Construction:
        if s.origin == "gap" or o.origin == "gap":
            return Construction.C
        if s.origin == "vv":
            return Construction.B1
        if shape is not None:
            return shape
        if s.origin == "group" or o.origin == "group":
            return Construction.DSNF7
        if s.origin == "coo":
            return Construction.DSNF5
        if o.origin == "coo":
            return Construction.DSNF6
        return Construction.DSNF2

    def _emit_verb_relations(self, v: int, subjects: list[_Arg], objects: list[_Arg]) -> None:
        tree = self.tree
        if not subjects:
            return
        cmp_kids = [c for c in tree.kids(v, "CMP")]
        pob_pairs = [
            (a, p)
            for a in tree.kids(v, "ADV")
            for p in tree.kids(a, "POB")
        ]
        if cmp_kids:
            for c in cmp_kids:
                inner = [x for x in tree.kids(c, "VOB") + tree.kids(c, "POB")]
                targets = [_Arg(x, "own") for x in inner] or objects
                for s in subjects:
                    for o in targets:
                        self._emit(
                            argument_span(tree, s.token), [v, c], argument_span(tree, o.token),
                            self._base_tag(s, o, Construction.DSNF4), False, v,
                        )
        elif pob_pairs:
            for _, pob in pob_pairs:
                for s in subjects:
                    if objects:
                        for o in objects:
                            self._emit(
                                argument_span(tree, s.token), [v, o.token], argument_span(tree, pob),
                                self._base_tag(s, o, Construction.DSNF3), False, v,
                            )
                    else:
                        self._emit(
                            argument_span(tree, s.token), [v], argument_span(tree, pob),
                            self._base_tag(s, _Arg(pob, "own"), Construction.DSNF3), False, v,
                        )
        else:
            for s in subjects:
                for o in objects:
                    self._emit(
                        argument_span(tree, s.token), [v], argument_span(tree, o.token),
                        self._base_tag(s, o, None), False, v,
                    )

    def _emit_de_structures(self, v: int, subjects: list[_Arg], objects: list[_Arg]) -> None:
        tree = self.tree
        # object-side 的-modifier: the true object hides under the direct object
        for o in objects:
            if o.origin not in ("own", "coo"):
                continue
            for t in tree.kids(o.token, "ATT"):
                if not tree.is_nominal(t):
                    continue
                de = tree.de_child(t)
                if de is None:
                    continue
                for s in subjects:
                    self._emit(
                        argument_span(tree, s.token), [v, Marker.X, de, o.token],
                        argument_span(tree, t), Construction.A1, True, v,
                    )
        # subject-side 的-modifier: the true subject hides under the direct subject
        for s in subjects:
            if s.origin not in ("own", "coo"):
                continue
            for t in tree.kids(s.token, "ATT"):
                if not tree.is_nominal(t):
                    continue
                if tree.de_child(t) is None:
                    continue
                for o in objects:
                    self._emit(
                        argument_span(tree, t), [s.token, v],
                        argument_span(tree, o.token), Construction.A2, True, v,
                    )

    def _emit_control_chain(self, v: int, subjects: list[_Arg]) -> None:
        tree = self.tree
        if not subjects or tree.deprel(v) == "VOB":
            return  # cascades start at the chain head only
        chain = [v]
        while len(chain) < self.config.max_chain_verbs:
            nxt = [c for c in tree.kids(chain[-1], "VOB") if tree.is_verb(c)]
            if not nxt:
                break
            chain.append(nxt[0])
        if len(chain) < 2:
            return
        final_objs = [c for c in tree.kids(chain[-1], "VOB") if not tree.is_verb(c)]
        for k in range(2, len(chain) + 1):
            parts: list[Part] = list(chain[:k])
            if k < len(chain):
                obj_spans = [(chain[k], chain[k])]
            else:
                obj_spans = [argument_span(tree, o) for o in final_objs]
            for s in subjects:
                for span in obj_spans:
                    self._emit(
                        argument_span(tree, s.token), list(parts), span,
                        Construction.B2, True, chain[0],
                    )

    def _emit_covert_copula(self, v: int, d: int, subjects: list[_Arg]) -> None:
        tree = self.tree
        preds = [c for c in tree.kids(d, "ATT") if tree.is_verb(c)]
        if not preds or not subjects:
            return
        p = preds[-1]
        emitted = False
        for a in tree.kids(p, "ADV"):
            for pob in tree.kids(a, "POB"):
                for s in subjects:
                    self._emit(
                        argument_span(tree, s.token), [v, a, Marker.X, p, d],
                        argument_span(tree, pob), Construction.E, True, v,
                    )
                emitted = True
        if not emitted:
            for f in tree.kids(p, "SBV"):
                for s in subjects:
                    self._emit(
                        argument_span(tree, s.token), [v, Marker.X, p, d],
                        argument_span(tree, f), Construction.E, True, v,
                    )

    def _emit_compounds(self) -> None:
        """Nominal-compound chains: restricted re-orientation or the bare pattern."""
        tree = self.tree
        for w3 in range(1, tree.n + 1):
            if not tree.is_nominal(w3):
                continue
            for w2 in tree.kids(w3, "ATT"):
                if w2 != w3 - 1 or not tree.is_nominal(w2):
                    continue
                for w1 in tree.kids(w2, "ATT"):
                    if w1 != w2 - 1 or not tree.is_nominal(w1):
                        continue
                    if self.config.restricted_compounds:
                        if _PERSON_LAYER not in tree.mention_layers(w3):
                            continue
                        if not (tree.mention_layers(w2) & _TITLE_LAYERS):
                            continue
                        self._emit(
                            (w3, w3), [Marker.IS, Marker.X, Marker.DE, w2], (w1, w1),
                            Construction.D, True, w2,
                        )
                    else:
                        self._emit((w1, w1), [w2], (w3, w3), Construction.DSNF1, False, w2)

    # -- driver ----------------------------------------------------------------

    def run(self) -> list[RelationTriple]:
        tree = self.tree
        order = sorted(
            (t.index for t in self.sent.tokens if tree.is_verb(t.index)),
            key=lambda v: self._depth(v),
        )
        resolved: dict[int, tuple[list[_Arg], list[_Arg]]] = {}
        for v in order:
            resolved[v] = self._resolve(v)
        for v in sorted(resolved):
            subjects, objects = resolved[v]
            if self.config.covert_copula and v in self._claimed_copulas:
                self._emit_covert_copula(v, self._claimed_copulas[v], subjects)
                continue
            self._emit_verb_relations(v, subjects, objects)
            if self.config.de_structures:
                self._emit_de_structures(v, subjects, objects)
            if self.config.verb_chains:
                self._emit_control_chain(v, subjects)
        self._emit_compounds()
        self.triples.sort(
            key=lambda t: (
                t.subject[0],
                t.pred_head,
                t.predicate.lemma_string(self.sent),
                t.object[0],
                t.construction.value,
            )
        )
        return self.triples

    def _depth(self, v: int) -> int:
        depth, cur = 0, v
        while cur != 0 and depth <= self.tree.n:
            cur = self.tree.head(cur)
            depth += 1
        return depth


def extract_relations(sent: AnnotatedSentence, config: Optional[ExtractorConfig] = None) -> list[RelationTriple]:
    """All relations from one sentence under the given rule configuration."""
    return _Extractor(sent, config or ExtractorConfig()).run()


def extract_dsnf(sent: AnnotatedSentence) -> list[RelationTriple]:
    """Baseline-only extraction: the seven bare dependency patterns."""
    return extract_relations(sent, dsnf_config())


def _full(sent: AnnotatedSentence) -> list[RelationTriple]:
    return extract_relations(sent, ExtractorConfig())


def extract_de_structures(sent: AnnotatedSentence) -> list[RelationTriple]:
    """Relations added for 的-possessive modifiers of direct arguments."""
    return [t for t in _full(sent) if t.construction in (Construction.A1, Construction.A2)]


def extract_bounded_dependencies(sent: AnnotatedSentence) -> list[RelationTriple]:
    """Relations added for concatenated VPs and control-verb cascades."""
    return [t for t in _full(sent) if t.construction in (Construction.B1, Construction.B2)]


def extract_relative_clause(sent: AnnotatedSentence) -> list[RelationTriple]:
    """Relations recovered from 的-linked clause modifiers of NPs."""
    return [t for t in _full(sent) if t.construction is Construction.C]


def extract_nominal_compound(sent: AnnotatedSentence) -> list[RelationTriple]:
    """Re-oriented relations from typed three-word nominal compounds."""
    return [t for t in _full(sent) if t.construction is Construction.D]


def extract_covert_object_copula(sent: AnnotatedSentence) -> list[RelationTriple]:
    """Repaired relations for copulas whose surface object is 的."""
    return [t for t in _full(sent) if t.construction is Construction.E]


def detect_negation(sent: AnnotatedSentence, predicate_head: int, lexicon: Optional[NegationLexicon] = None) -> bool:
    """True iff the predicate head has an odd number of negation adjuncts."""
    lexicon = lexicon or NegationLexicon()
    tree = _Tree(sent)
    count = sum(1 for c in tree.kids(predicate_head, "ADV") if tree.form(c) in lexicon)
    return count % 2 == 1
