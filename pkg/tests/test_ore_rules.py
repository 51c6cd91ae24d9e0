import pytest

from entgraph.ore import (
    Construction,
    Marker,
    NegationLexicon,
    detect_negation,
    extract_bounded_dependencies,
    extract_covert_object_copula,
    extract_de_structures,
    extract_dsnf,
    extract_nominal_compound,
    extract_relations,
    extract_relative_clause,
)

from conftest import build_sentence


def rendered(sent, triples):
    return {t.render(sent) for t in triples}


def full(sent):
    return extract_relations(sent)


# Expected output of the full rule set per gold-parsed fixture sentence.
FULL_EXPECTED = {
    "compound_titled": {("默克尔", "is·X·DE·总理", "德国")},
    "svo": {("我", "看到", "你")},
    "adjunct_object": {("他", "玩·游戏", "家")},
    "verb_complement": {("我", "走·到", "图书馆")},
    "subject_coordination": {("我", "去", "商店"), ("你", "去", "商店")},
    "object_coordination": {("我", "吃", "汉堡"), ("我", "吃", "薯条")},
    "predicate_coordination": {("罪犯", "击中", "他"), ("罪犯", "杀死", "他")},
    "object_de_modifier": {("咽炎", "成为", "原因"), ("咽炎", "成为·X·的·原因", "发热")},
    "subject_de_modifier": {("创始人", "是", "乔布斯"), ("苹果", "创始人·是", "乔布斯")},
    "vp_sequence": {("我", "去", "诊所"), ("我", "打", "疫苗")},
    "control_chain": {
        ("我", "想", "试图"),
        ("我", "想·试图", "开始"),
        ("我", "想·试图·开始", "写"),
        ("我", "想·试图·开始·写", "一个剧本"),
    },
    "relative_clause": {("他", "解决", "问题"), ("问题", "困扰", "大家")},
    "copula_prep_from": {("玉米", "是·从·X·引进·的", "美国")},
    "copula_prep_with": {("设备", "是·用·X·做·的", "木头")},
    "copula_bare_material": {("设备", "是·X·做·的", "木头")},
    "copula_bare_agent": {("设备", "是·X·做·的", "木匠")},
    "compound_untitled": set(),
    "compound_pronoun": set(),
}

# Baseline mode: what the seven bare patterns alone produce.
DSNF_EXPECTED = {
    "compound_titled": {("德国", "总理", "默克尔")},
    "adjunct_object": {("他", "玩·游戏", "家")},
    "verb_complement": {("我", "走·到", "图书馆")},
    "subject_coordination": {("我", "去", "商店"), ("你", "去", "商店")},
    "object_coordination": {("我", "吃", "汉堡"), ("我", "吃", "薯条")},
    "predicate_coordination": {("罪犯", "击中", "他"), ("罪犯", "杀死", "他")},
    "object_de_modifier": {("咽炎", "成为", "原因")},
    "vp_sequence": {("我", "去", "诊所")},
    "control_chain": {("我", "想", "试图")},
    "relative_clause": {("他", "解决", "问题")},
    "copula_prep_from": {("玉米", "是", "的")},
    "compound_untitled": {("手续", "办理", "时效")},
}


@pytest.mark.parametrize("name", sorted(FULL_EXPECTED))
def test_full_rule_set_matches_catalogue(gold_sentences, name):
    sent = gold_sentences[name]
    assert rendered(sent, full(sent)) == FULL_EXPECTED[name]


@pytest.mark.parametrize("name", sorted(DSNF_EXPECTED))
def test_baseline_patterns_match_catalogue(gold_sentences, name):
    sent = gold_sentences[name]
    assert rendered(sent, extract_dsnf(sent)) == DSNF_EXPECTED[name]


class TestDeStructures:
    def test_object_side_adds_underlying_relation(self, gold_sentences):
        sent = gold_sentences["object_de_modifier"]
        added = rendered(sent, extract_de_structures(sent))
        assert added == {("咽炎", "成为·X·的·原因", "发热")}

    def test_subject_side_adds_underlying_relation(self, gold_sentences):
        sent = gold_sentences["subject_de_modifier"]
        added = rendered(sent, extract_de_structures(sent))
        assert added == {("苹果", "创始人·是", "乔布斯")}

    def test_direct_relation_kept_and_not_amended(self, gold_sentences):
        sent = gold_sentences["object_de_modifier"]
        by_pred = {t.predicate.lemma_string(sent): t for t in full(sent)}
        assert by_pred["成为"].amended is False
        assert by_pred["成为·X·的·原因"].amended is True

    def test_pronominal_modifier_blocks_rule(self, gold_sentences):
        sent = gold_sentences["pronoun_de_modifier"]
        assert extract_de_structures(sent) == []
        assert rendered(sent, full(sent)) == {("咽炎", "成为", "原因")}


class TestBoundedDependencies:
    def test_vp_sequence_copies_subject(self, gold_sentences):
        sent = gold_sentences["vp_sequence"]
        added = rendered(sent, extract_bounded_dependencies(sent))
        assert added == {("我", "打", "疫苗")}

    def test_control_cascade(self, gold_sentences):
        sent = gold_sentences["control_chain"]
        added = rendered(sent, extract_bounded_dependencies(sent))
        assert added == FULL_EXPECTED["control_chain"] - {("我", "想", "试图")}

    def test_cascade_relations_are_amended(self, gold_sentences):
        sent = gold_sentences["control_chain"]
        for t in full(sent):
            expect = len(t.predicate.parts) > 1
            assert t.amended is expect

    def test_single_vp_has_no_cascade(self):
        sent = build_sentence([
            ("我", "PN", 2, "SBV"), ("想", "VV", 0, "HED"), ("睡觉", "VV", 2, "VOB"),
        ])
        assert extract_bounded_dependencies(sent) == []
        assert rendered(sent, full(sent)) == {("我", "想", "睡觉")}


class TestRelativeClause:
    def test_subject_gap_filled_by_head_noun(self, gold_sentences):
        sent = gold_sentences["relative_clause"]
        assert rendered(sent, extract_relative_clause(sent)) == {("问题", "困扰", "大家")}

    def test_adjectival_modifier_yields_nothing(self):
        sent = build_sentence([
            ("他", "PN", 2, "SBV"), ("解决", "VV", 0, "HED"),
            ("重要", "JJ", 4, "ATT"), ("问题", "NN", 2, "VOB"),
        ])
        assert extract_relative_clause(sent) == []

    def test_object_gap_filled_by_head_noun(self):
        # the book that he wrote
        sent = build_sentence([
            ("他", "PN", 2, "SBV"), ("写", "VV", 4, "ATT"), ("的", "DEC", 2, "MT"),
            ("书", "NN", 5, "SBV"), ("畅销", "VV", 0, "HED"),
        ])
        assert rendered(sent, extract_relative_clause(sent)) == {("他", "写", "书")}

    def test_composes_with_de_structure_inside_clause(self, gold_sentences):
        sent = gold_sentences["clause_with_de_object"]
        got = rendered(sent, full(sent))
        assert got == {
            ("他", "解决", "问题"),
            ("问题", "成为", "原因"),
            ("问题", "成为·X·的·原因", "发热"),
        }


class TestNominalCompound:
    def test_titled_person_compound_reoriented(self, gold_sentences):
        sent = gold_sentences["compound_titled"]
        assert rendered(sent, extract_nominal_compound(sent)) == {("默克尔", "is·X·DE·总理", "德国")}

    def test_untyped_compound_rejected(self, gold_sentences):
        assert extract_nominal_compound(gold_sentences["compound_untitled"]) == []

    def test_pronoun_first_word_rejected(self, gold_sentences):
        assert extract_nominal_compound(gold_sentences["compound_pronoun"]) == []


class TestCovertObjectCopula:
    def test_prepositional_variant(self, gold_sentences):
        sent = gold_sentences["copula_prep_from"]
        assert rendered(sent, extract_covert_object_copula(sent)) == {
            ("玉米", "是·从·X·引进·的", "美国")
        }

    def test_bare_filler_variant(self, gold_sentences):
        sent = gold_sentences["copula_bare_material"]
        assert rendered(sent, extract_covert_object_copula(sent)) == {
            ("设备", "是·X·做·的", "木头")
        }

    def test_replaces_defective_direct_relation(self, gold_sentences):
        for name in ("copula_prep_from", "copula_prep_with", "copula_bare_material"):
            sent = gold_sentences[name]
            for t in full(sent):
                s, e = t.object
                assert not (s == e and sent.token(s).form == "的")

    def test_ordinary_nominal_object_untouched(self, gold_sentences):
        sent = gold_sentences["subject_de_modifier"]  # copula with a real object
        assert extract_covert_object_copula(sent) == []
        assert ("创始人", "是", "乔布斯") in rendered(sent, full(sent))


class TestNegation:
    def test_single_negation_marks_predicate(self, gold_sentences):
        sent = gold_sentences["negated_svo"]
        (triple,) = full(sent)
        assert triple.negated is True
        assert triple.predicate.has_marker(Marker.NEG)
        assert rendered(sent, [triple]) == {("他", "NEG·买", "房子")}
        assert detect_negation(sent, 3) is True

    def test_even_count_cancels(self, gold_sentences):
        sent = gold_sentences["double_negated_svo"]
        (triple,) = full(sent)
        assert triple.negated is False
        assert detect_negation(sent, 4) is False

    def test_no_adjuncts(self, gold_sentences):
        sent = gold_sentences["svo"]
        assert detect_negation(sent, 2) is False

    def test_negated_iff_marker_present(self, gold_sentences):
        for sent in gold_sentences.values():
            for t in full(sent):
                assert t.negated == t.predicate.has_marker(Marker.NEG)

    def test_configurable_lexicon(self, gold_sentences):
        sent = gold_sentences["negated_svo"]
        narrow = NegationLexicon(frozenset({"没有"}))
        assert detect_negation(sent, 3, narrow) is False


class TestConstructionTags:
    def test_tags_assigned(self, gold_sentences):
        sent = gold_sentences["predicate_coordination"]
        assert {t.construction for t in full(sent)} == {Construction.DSNF7}
        sent = gold_sentences["subject_coordination"]
        assert {t.construction for t in full(sent)} == {Construction.DSNF2, Construction.DSNF5}
        sent = gold_sentences["vp_sequence"]
        assert {t.construction for t in full(sent)} == {Construction.DSNF2, Construction.B1}

    def test_sentence_without_relations(self):
        sent = build_sentence([("安静", "VA", 0, "HED")])
        assert full(sent) == []
