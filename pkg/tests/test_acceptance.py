"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Run with `pytest tests/test_acceptance.py -v -s`."""
import math
import os
import random
import time
from pathlib import Path

import pytest

from entgraph.evaluate import (
    GAMMA_GRID,
    EnsembleSpec,
    Strategy,
    auc_half_precision,
    ensemble,
    pr_curve,
    score_entry,
    load_dataset,
    tune_gamma_from_scores,
)
from entgraph.graph import (
    EdgeScores,
    EntailmentGraph,
    FeatureVector,
    Subgraph,
    binc,
    global_learn,
    load_graph,
)
from entgraph.ore import extract_dsnf, extract_relations
from entgraph.pipeline import PipelineConfig, run_pipeline

from corpus_fixture import make_corpus, make_eval_datasets


def report(name: str, passed: bool = True):
    print(f"\nACCEPTANCE {'PASS' if passed else 'FAIL'}: {name}")


# ---------------------------------------------------------------------------
# 1. rule-catalogue exactness


CONSTRUCTION_FIXTURES = {
    "object_de_modifier": {("咽炎", "成为", "原因"), ("咽炎", "成为·X·的·原因", "发热")},
    "subject_de_modifier": {("创始人", "是", "乔布斯"), ("苹果", "创始人·是", "乔布斯")},
    "vp_sequence": {("我", "去", "诊所"), ("我", "打", "疫苗")},
    "control_chain": {
        ("我", "想", "试图"), ("我", "想·试图", "开始"),
        ("我", "想·试图·开始", "写"), ("我", "想·试图·开始·写", "一个剧本"),
    },
    "relative_clause": {("他", "解决", "问题"), ("问题", "困扰", "大家")},
    "copula_prep_from": {("玉米", "是·从·X·引进·的", "美国")},
    "copula_bare_material": {("设备", "是·X·做·的", "木头")},
    "compound_titled": {("默克尔", "is·X·DE·总理", "德国")},
    "compound_untitled": set(),
}

BASELINE_FIXTURES = {
    "compound_titled": {("德国", "总理", "默克尔")},
    "svo": {("我", "看到", "你")},
    "adjunct_object": {("他", "玩·游戏", "家")},
    "verb_complement": {("我", "走·到", "图书馆")},
    "subject_coordination": {("我", "去", "商店"), ("你", "去", "商店")},
    "object_coordination": {("我", "吃", "汉堡"), ("我", "吃", "薯条")},
    "predicate_coordination": {("罪犯", "击中", "他"), ("罪犯", "杀死", "他")},
}


def test_rule_catalogue_exactness(gold_sentences):
    start = time.perf_counter()
    for name, expected in CONSTRUCTION_FIXTURES.items():
        sent = gold_sentences[name]
        got = {t.render(sent) for t in extract_relations(sent)}
        assert got == expected, f"{name}: {got} != {expected}"
    for name, expected in BASELINE_FIXTURES.items():
        sent = gold_sentences[name]
        got = {t.render(sent) for t in extract_dsnf(sent)}
        assert got == expected, f"{name}: {got} != {expected}"
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"rule catalogue took {elapsed:.3f}s"
    report("rule-catalogue exactness (9 construction + 7 baseline fixtures, < 1 s)")


# ---------------------------------------------------------------------------
# 2. BInc oracle equivalence


def oracle_binc(u: dict, v: dict) -> float:
    if not v:
        return 0.0
    shared = [f for f in u if f in v]
    sum_u = sum(u.values())
    sum_uv = sum_u + sum(v.values())
    if sum_u == 0 or sum_uv == 0 or not shared:
        return 0.0
    lin = (sum(u[f] for f in shared) + sum(v[f] for f in shared)) / sum_uv
    weeds = sum(u[f] for f in shared) / sum_u
    return math.sqrt(lin * weeds)


def test_binc_matches_brute_force_oracle():
    rnd = random.Random(20240)
    checked = 0
    for _ in range(1000):
        n_preds = rnd.randint(1, 6)
        n_feats = rnd.randint(1, 8)
        feats = [("f%d" % i, "x") for i in range(n_feats)]
        table = []
        for _ in range(n_preds):
            vec = {}
            for f in feats:
                if rnd.random() < 0.6:
                    vec[f] = rnd.choice([0.0, rnd.uniform(0.0, 5.0)])
            if not vec:
                vec[feats[0]] = rnd.uniform(0.1, 1.0)
            table.append(vec)
        for u in table:
            for v in table:
                got = binc(FeatureVector(dict(u)), FeatureVector(dict(v)))
                want = oracle_binc(u, v)
                assert abs(got - want) <= 1e-12, (u, v, got, want)
                checked += 1
    assert checked > 1000
    report(f"BInc oracle equivalence (1000 random tables, {checked} pairs, tol 1e-12)")


# ---------------------------------------------------------------------------
# 3. ensemble worked example


def test_ensemble_worked_example():
    en, zh = 0.6, 0.7
    values = {
        Strategy.EN_ZH: 0.6,
        Strategy.ZH_EN: 0.7,
        Strategy.MAX: 0.7,
        Strategy.AVG: 0.65,
    }
    for strategy, want in values.items():
        got = ensemble(en, zh, EnsembleSpec(strategy, 1.0))
        # exact up to binary float representation: (0.6 + 0.7) / 2 cannot
        # equal decimal 0.65 bit-for-bit
        assert got == pytest.approx(want, abs=1e-12), (strategy, got, want)
    report("ensemble worked example (0.6, 0.7, gamma=1 -> 0.6 / 0.7 / 0.7 / 0.65)")


# ---------------------------------------------------------------------------
# 4. AUC geometry vs threshold-sweep + trapezoid oracle


def oracle_curve_points(scores, labels, flags):
    eff = [math.inf if f else s for s, f in zip(scores, flags)]
    thresholds = ([math.inf] if any(flags) else []) + sorted(
        {s for s in eff if s != math.inf}, reverse=True
    )
    pos = sum(1 for x in labels if x)
    pts = []
    for t in thresholds:
        tp = sum(1 for e, l in zip(eff, labels) if e >= t and l)
        fp = sum(1 for e, l in zip(eff, labels) if e >= t and not l)
        pts.append((tp / pos if pos else 0.0, tp / (tp + fp) if (tp + fp) else 1.0))
    return pts


def oracle_area(points) -> float:
    total = 0.0
    for (r1, p1), (r2, p2) in zip(points, points[1:]):
        if r2 <= r1:
            continue
        lo, hi = (r1, p1), (r2, p2)
        if (p1 - 0.5) * (p2 - 0.5) < 0:  # crosses the half-precision line
            rc = r1 + (r2 - r1) * (0.5 - p1) / (p2 - p1)
            if p1 > 0.5:
                lo, hi = (r1, p1), (rc, 0.5)
            else:
                lo, hi = (rc, 0.5), (r2, p2)
        elif p1 <= 0.5 and p2 <= 0.5:
            continue
        total += (hi[0] - lo[0]) * (lo[1] + hi[1]) / 2.0
    return 100.0 * total


def test_auc_geometry_matches_oracle():
    rnd = random.Random(77)
    cases = []
    for _ in range(300):
        n = rnd.randint(1, 10)
        scores = [round(rnd.random(), rnd.choice([1, 2])) for _ in range(n)]
        labels = [rnd.random() < 0.5 for _ in range(n)]
        flags = [rnd.random() < 0.2 for _ in range(n)]
        cases.append((scores, labels, flags))
    # crafted: every point below half precision, lemma boundary on, heavy ties
    cases.append(([0.5] * 6, [False] * 5 + [True], [False] * 6))
    cases.append(([0.9, 0.8], [True, True], [True, False]))
    cases.append(([0.3, 0.3, 0.3], [True, False, False], [False, False, False]))
    for scores, labels, flags in cases:
        curve = pr_curve(scores, labels, flags)
        want_points = oracle_curve_points(scores, labels, flags)
        assert len(curve.points) == len(want_points)
        for got, want in zip(curve.points, want_points):
            assert abs(got[0] - want[0]) <= 1e-12 and abs(got[1] - want[1]) <= 1e-12
        auc = auc_half_precision(curve)
        assert abs(auc - oracle_area(want_points)) <= 1e-9
        max_recall = max(r for r, _ in curve.points)
        assert 0.0 <= auc <= 100.0 * max_recall + 1e-9
    all_low = pr_curve([0.4, 0.3, 0.2], [False, True, False])
    assert auc_half_precision(all_low) == 0.0
    report("AUC geometry vs brute-force sweep + trapezoid oracle (303 cases, tol 1e-9)")


# ---------------------------------------------------------------------------
# 5. global-learning contracts


def chain_fixture():
    pair = ("person", "location")
    sub = Subgraph(type_pair=pair, nodes={"u", "v", "w"})
    sub.edges[("u", "v")] = EdgeScores(0.9, 0.9)
    sub.edges[("v", "w")] = EdgeScores(0.9, 0.9)
    return EntailmentGraph(subgraphs={pair: sub}), pair


def test_global_learning_contracts():
    graph, pair = chain_fixture()
    before = {e: s.global_ for e, s in graph.subgraphs[pair].edges.items()}
    identity = global_learn(graph, epochs=0)
    assert {e: s.global_ for e, s in identity.subgraphs[pair].edges.items()} == before

    graph, pair = chain_fixture()
    closed = global_learn(graph, epochs=1)
    gap = closed.subgraphs[pair].edges.get(("u", "w"))
    assert gap is not None and gap.global_ > 0.0

    rnd = random.Random(99)
    for trial in range(5):
        toy = EntailmentGraph()
        for pi, pair in enumerate([("a", "b"), ("b", "a"), ("c", "c")]):
            sub = Subgraph(type_pair=pair)
            names = [f"n{i}" for i in range(5)]
            sub.nodes.update(names)
            for u in names:
                for v in names:
                    if u != v and rnd.random() < 0.4:
                        s = rnd.random()
                        sub.edges[(u, v)] = EdgeScores(s, s)
            toy.subgraphs[pair] = sub
        out = global_learn(toy, epochs=10)
        for sub in out.subgraphs.values():
            for s in sub.edges.values():
                assert 0.0 <= s.global_ <= 1.0
    report("global learning (epochs=0 identity, chain closure > 0, [0,1] over 10 epochs)")


# ---------------------------------------------------------------------------
# 6. end-to-end determinism


def _dir_bytes(path: Path) -> dict:
    return {
        p.relative_to(path): p.read_bytes()
        for p in sorted(path.rglob("*"))
        if p.is_file()
    }


def test_end_to_end_determinism(tmp_path):
    corpus = tmp_path / "corpus"
    make_corpus(corpus)
    dev, test = make_eval_datasets(tmp_path / "data")
    start = time.perf_counter()
    results = []
    for run in ("one", "two"):
        config = PipelineConfig.from_dict({
            "corpus_dir": str(corpus),
            "workdir": str(tmp_path / run),
            "seed": 11,
            "epochs": 3,
            "dev": str(dev),
            "test": str(test),
        })
        results.append(run_pipeline(config))
    elapsed = time.perf_counter() - start
    g1, g2 = _dir_bytes(tmp_path / "one" / "graph"), _dir_bytes(tmp_path / "two" / "graph")
    assert g1 == g2, "graph directories differ between identical runs"
    e1, e2 = _dir_bytes(tmp_path / "one" / "eval"), _dir_bytes(tmp_path / "two" / "eval")
    assert e1 == e2, "eval reports differ between identical runs"
    assert elapsed < 60.0, f"two pipeline runs took {elapsed:.1f}s"
    report(f"end-to-end determinism (byte-identical artifacts, {elapsed:.1f}s < 60s)")


# ---------------------------------------------------------------------------
# 7. paper-scale substitute: optional released-graph integration check


RELEASED_GRAPH = os.environ.get("ENTGRAPH_RELEASED_GRAPH")
RELEASED_DEV = os.environ.get("ENTGRAPH_RELEASED_DEV")
RELEASED_AUC = os.environ.get("ENTGRAPH_RELEASED_DEV_AUC")


@pytest.mark.skipif(
    not (RELEASED_GRAPH and RELEASED_DEV and RELEASED_AUC),
    reason="paper-scale AUCs need externally supplied released graph files "
    "(set ENTGRAPH_RELEASED_GRAPH, ENTGRAPH_RELEASED_DEV, ENTGRAPH_RELEASED_DEV_AUC); "
    "the invariant suites above stand in at desk scale",
)
def test_released_graph_reproduces_reported_auc():
    graph = load_graph(RELEASED_GRAPH)
    entries = load_dataset(RELEASED_DEV)
    scores = [score_entry(e, graph) for e in entries]
    from entgraph.evaluate import lemma_match, zh_normalizer

    flags = [lemma_match(e.premise, e.hypothesis, zh_normalizer) for e in entries]
    auc = auc_half_precision(pr_curve(scores, [e.label for e in entries], flags))
    assert abs(auc - float(RELEASED_AUC)) <= 0.5
    report("released-graph dev AUC within ±0.5 points")


# ---------------------------------------------------------------------------
# 8. gamma sweep


def test_gamma_sweep_argmax_and_tie_break():
    assert len(GAMMA_GRID) == 11
    rnd = random.Random(5)
    pairs = [(round(rnd.random(), 2), round(rnd.random(), 2)) for _ in range(20)]
    labels = [rnd.random() < 0.5 for _ in range(20)]
    flags = [False] * 20
    for strategy in Strategy:
        got_gamma, got_auc = tune_gamma_from_scores(pairs, labels, flags, strategy)
        best = None
        for gamma in GAMMA_GRID:  # exhaustive re-evaluation, ascending
            spec = EnsembleSpec(strategy, gamma)
            scores = [ensemble(en, zh, spec) for en, zh in pairs]
            auc = auc_half_precision(pr_curve(scores, labels, flags))
            if best is None or auc > best[1]:
                best = (gamma, auc)
        assert (got_gamma, got_auc) == best, strategy
    flat_gamma, _ = tune_gamma_from_scores([(0.4, 0.4)] * 20, labels, flags, Strategy.AVG)
    assert flat_gamma == 0.0
    report("gamma sweep (11 candidates, exhaustive argmax, smaller-gamma ties)")
