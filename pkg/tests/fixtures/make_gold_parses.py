"""Regenerate gold_parses.jsonl, the hand-checked dependency trees for the rule tests.

Run from the repo root:  python tests/fixtures/make_gold_parses.py
"""
import json
from pathlib import Path

# (name, tokens, mentions); token = (form, pos, head, deprel); mention = (start, end, [labels])
SENTENCES = [
    ("compound_titled", [
        ("德国", "NR", 2, "ATT"), ("总理", "NN", 3, "ATT"), ("默克尔", "NR", 0, "HED"),
        ("。", "PU", 3, "MT"),
    ], [(1, 1, ["location/country"]), (2, 2, ["title"]), (3, 3, ["person"])]),
    ("svo", [
        ("我", "PN", 2, "SBV"), ("看到", "VV", 0, "HED"), ("你", "PN", 2, "VOB"),
        ("。", "PU", 2, "MT"),
    ], []),
    ("adjunct_object", [
        ("他", "PN", 4, "SBV"), ("在", "P", 4, "ADV"), ("家", "NN", 2, "POB"),
        ("玩", "VV", 0, "HED"), ("游戏", "NN", 4, "VOB"), ("。", "PU", 4, "MT"),
    ], []),
    ("verb_complement", [
        ("我", "PN", 2, "SBV"), ("走", "VV", 0, "HED"), ("到", "VV", 2, "CMP"),
        ("图书馆", "NN", 3, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("subject_coordination", [
        ("我", "PN", 4, "SBV"), ("和", "CC", 3, "MT"), ("你", "PN", 1, "COO"),
        ("去", "VV", 0, "HED"), ("商店", "NN", 4, "VOB"), ("。", "PU", 4, "MT"),
    ], []),
    ("object_coordination", [
        ("我", "PN", 2, "SBV"), ("吃", "VV", 0, "HED"), ("汉堡", "NN", 2, "VOB"),
        ("和", "CC", 5, "MT"), ("薯条", "NN", 3, "COO"), ("。", "PU", 2, "MT"),
    ], []),
    ("predicate_coordination", [
        ("罪犯", "NN", 2, "SBV"), ("击中", "VV", 0, "HED"), ("、", "PU", 4, "MT"),
        ("杀死", "VV", 2, "COO"), ("了", "AS", 4, "MT"), ("他", "PN", 4, "VOB"),
        ("。", "PU", 2, "MT"),
    ], []),
    ("object_de_modifier", [
        ("咽炎", "NN", 2, "SBV"), ("成为", "VV", 0, "HED"), ("发热", "NN", 5, "ATT"),
        ("的", "DEG", 3, "MT"), ("原因", "NN", 2, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("subject_de_modifier", [
        ("苹果", "NR", 3, "ATT"), ("的", "DEG", 1, "MT"), ("创始人", "NN", 4, "SBV"),
        ("是", "VC", 0, "HED"), ("乔布斯", "NR", 4, "VOB"), ("。", "PU", 4, "MT"),
    ], [(1, 1, ["organization/company"]), (5, 5, ["person"])]),
    ("vp_sequence", [
        ("我", "PN", 2, "SBV"), ("去", "VV", 0, "HED"), ("诊所", "NN", 2, "VOB"),
        ("打", "VV", 2, "VV"), ("疫苗", "NN", 4, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("control_chain", [
        ("我", "PN", 2, "SBV"), ("想", "VV", 0, "HED"), ("试图", "VV", 2, "VOB"),
        ("开始", "VV", 3, "VOB"), ("写", "VV", 4, "VOB"), ("一个", "CD", 7, "ATT"),
        ("剧本", "NN", 5, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("relative_clause", [
        ("他", "PN", 2, "SBV"), ("解决", "VV", 0, "HED"), ("了", "AS", 2, "MT"),
        ("困扰", "VV", 7, "ATT"), ("大家", "PN", 4, "VOB"), ("的", "DEC", 4, "MT"),
        ("问题", "NN", 2, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("copula_prep_from", [
        ("玉米", "NN", 2, "SBV"), ("是", "VC", 0, "HED"), ("从", "P", 5, "ADV"),
        ("美国", "NR", 3, "POB"), ("引进", "VV", 6, "ATT"), ("的", "DEC", 2, "VOB"),
        ("。", "PU", 2, "MT"),
    ], [(4, 4, ["location/country"])]),
    ("copula_prep_with", [
        ("设备", "NN", 2, "SBV"), ("是", "VC", 0, "HED"), ("用", "P", 5, "ADV"),
        ("木头", "NN", 3, "POB"), ("做", "VV", 6, "ATT"), ("的", "DEC", 2, "VOB"),
        ("。", "PU", 2, "MT"),
    ], []),
    ("copula_bare_material", [
        ("设备", "NN", 2, "SBV"), ("是", "VC", 0, "HED"), ("木头", "NN", 4, "SBV"),
        ("做", "VV", 5, "ATT"), ("的", "DEC", 2, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("copula_bare_agent", [
        ("设备", "NN", 2, "SBV"), ("是", "VC", 0, "HED"), ("木匠", "NN", 4, "SBV"),
        ("做", "VV", 5, "ATT"), ("的", "DEC", 2, "VOB"), ("。", "PU", 2, "MT"),
    ], [(3, 3, ["person"])]),
    ("compound_untitled", [
        ("手续", "NN", 2, "ATT"), ("办理", "NN", 3, "ATT"), ("时效", "NN", 0, "HED"),
        ("。", "PU", 3, "MT"),
    ], []),
    ("compound_pronoun", [
        ("他", "PN", 2, "ATT"), ("总理", "NN", 3, "ATT"), ("默克尔", "NR", 0, "HED"),
        ("。", "PU", 3, "MT"),
    ], [(2, 2, ["title"]), (3, 3, ["person"])]),
    ("clause_with_de_object", [
        ("他", "PN", 2, "SBV"), ("解决", "VV", 0, "HED"), ("了", "AS", 2, "MT"),
        ("成为", "VV", 9, "ATT"), ("发热", "NN", 7, "ATT"), ("的", "DEG", 5, "MT"),
        ("原因", "NN", 4, "VOB"), ("的", "DEC", 4, "MT"), ("问题", "NN", 2, "VOB"),
        ("。", "PU", 2, "MT"),
    ], []),
    ("pronoun_de_modifier", [
        ("咽炎", "NN", 2, "SBV"), ("成为", "VV", 0, "HED"), ("他", "PN", 5, "ATT"),
        ("的", "DEG", 3, "MT"), ("原因", "NN", 2, "VOB"), ("。", "PU", 2, "MT"),
    ], []),
    ("negated_svo", [
        ("他", "PN", 3, "SBV"), ("不", "AD", 3, "ADV"), ("买", "VV", 0, "HED"),
        ("房子", "NN", 3, "VOB"), ("。", "PU", 3, "MT"),
    ], []),
    ("double_negated_svo", [
        ("他", "PN", 4, "SBV"), ("不", "AD", 4, "ADV"), ("不", "AD", 4, "ADV"),
        ("买", "VV", 0, "HED"), ("房子", "NN", 4, "VOB"), ("。", "PU", 4, "MT"),
    ], []),
]


def main() -> None:
    out = Path(__file__).parent / "gold_parses.jsonl"
    with out.open("w", encoding="utf-8") as fh:
        for name, tokens, mentions in SENTENCES:
            record = {
                "article_id": name,
                "sent_index": 0,
                "text": "".join(form for form, _, _, _ in tokens),
                "tokens": [
                    {"i": i, "form": form, "pos": pos, "head": head, "deprel": deprel}
                    for i, (form, pos, head, deprel) in enumerate(tokens, start=1)
                ],
                "mentions": [
                    {"start": s, "end": e, "labels": labels} for s, e, labels in mentions
                ],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
