"""Exit-criteria checks.  Each test records one PASS/FAIL line (see conftest)."""

import json
import math
import random
import time

import numpy as np
import pytest

from acceptance_log import record
from findsum.corpus import build_example, split_by_company
from findsum.corpus.example import Example
from findsum.ingest import parse_filing, round_cell_value
from findsum.ingest.models import TextSegment
from findsum.ingest.tuples import extract_tuples
from findsum.metrics import bleu4, fragment_stats_tokens, num_metrics, number_coverage_direct, rouge_l
from findsum.metrics.report import ScoreItem, score_one
from findsum.corpus.example import doc_numbers
from findsum.select_text import lexrank_extract, mmrg, ngram_recall, textrank_extract
from findsum.select_text.mmrg import selected_text
from findsum.select_tuple import evaluate_topn, rank_tuples, train_classifier, undersample
from findsum.textutil import split_sentences, word_count

from oracles import bleu4_oracle, fragments_oracle, mmrg_oracle, num_metrics_oracle, rouge_l_oracle
from synth import doc_matrix, planted_corpus
from test_cli import pipeline, write_config

pytestmark = pytest.mark.acceptance


def test_c01_rounding_fidelity():
    start = time.perf_counter()
    got = {raw: round_cell_value(raw) for raw in ("15,700", "2,038", "10,168")}
    ok = got == {"15,700": "15.7", "2,038": "2", "10,168": "10.2"} and time.perf_counter() - start < 1
    record("C1", "rounding fidelity", ok, json.dumps(got))
    assert ok


def test_c02_mmrg_oracle_equivalence():
    rng = random.Random(2024)
    vocab = "alpha beta gamma delta eps zeta eta theta".split()
    start = time.perf_counter()
    mismatches, decreasing = 0, 0
    for _ in range(20):
        m = rng.randint(1, 5)
        parts, targets = [], []
        for _ in range(m):
            parts.append([" ".join(rng.choice(vocab) for _ in range(rng.randint(0, 6)))
                          for _ in range(rng.randint(1, 6))])
            targets.append(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 10))))
        for orders in ((1,), (1, 2)):
            got = mmrg(list(zip(parts, targets)), 6, orders)
            want, _ = mmrg_oracle(parts, targets, 6, orders)
            mismatches += got.ids != want
            decreasing += any(b < a - 1e-12 for a, b in zip(got.trace, got.trace[1:]))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and decreasing == 0 and elapsed < 10
    record("C2", "MMRG oracle equivalence", ok,
           f"{mismatches} id mismatches, {decreasing} decreasing traces, {elapsed:.2f}s")
    assert ok


def _planted_selection_corpus(rng, n_examples, n_parts=8, salient=(2, 5)):
    """Examples whose targets draw on words concentrated in two fixed parts."""
    filler = [f"f{i}" for i in range(300)]
    pool = [f"s{i}" for i in range(40)]

    def sentence(words):
        return " ".join([words[0].capitalize()] + words[1:]) + "."

    examples = []
    for _ in range(n_examples):
        parts = []
        for j in range(n_parts):
            sents = []
            for _ in range(3):
                if j in salient:
                    words = rng.sample(pool, 5) + rng.sample(filler, 3)
                else:
                    words = [rng.choice(pool) if rng.random() < 0.1 else rng.choice(filler) for _ in range(8)]
                rng.shuffle(words)
                sents.append(sentence(words))
            parts.append(" ".join(sents))
        source = [w for j in salient for w in parts[j].lower().split()]
        target = [rng.choice(source) if rng.random() < 0.8 else rng.choice(filler) for _ in range(40)]
        examples.append((parts, " ".join(target)))
    return examples


def test_c03_mmrg_dominance():
    rng = random.Random(77)
    wins = 0
    for _ in range(100):
        train = _planted_selection_corpus(rng, 8)
        test = _planted_selection_corpus(rng, 8)
        ids = mmrg(train, 2).ids
        r_m = r_t = r_l = 0.0
        for parts, target in test:
            chosen = selected_text(parts, ids)
            budget = max(word_count(chosen), 1)
            sents = split_sentences("\n".join(parts))
            r_m += ngram_recall(chosen, target, 1)
            r_t += ngram_recall(textrank_extract(sents, budget).text, target, 1)
            r_l += ngram_recall(lexrank_extract(sents, budget).text, target, 1)
        wins += r_m >= r_t and r_m >= r_l
    ok = wins >= 95
    record("C3", "MMRG dominance over TextRank/LexRank", ok, f"{wins}/100 trials")
    assert ok


def test_c04_number_metrics():
    rng = random.Random(4)
    universe = [str(v) for v in range(12)]
    bad_value = bad_bound = bad_nc = 0
    for _ in range(1000):
        d, s, h = ({x for x in universe if rng.random() < p} for p in (rng.random(), rng.random(), rng.random()))
        got = num_metrics(d, s, h)
        want = num_metrics_oracle(d, s, h)
        for g, w in zip((got.np, got.nr, got.nc, got.ns), want):
            if (g is None) != (w is None) or (g is not None and abs(g - w) > 1e-12):
                bad_value += 1
        if got.np is not None and got.nc is not None:
            bad_bound += not (min(got.np, got.nc) <= got.ns <= max(got.np, got.nc))
        bad_nc += got.nc != number_coverage_direct(d, s, h)
    ok = bad_value == bad_bound == bad_nc == 0
    record("C4", "NP/NC/NS suite", ok, f"{bad_value} value, {bad_bound} bound, {bad_nc} NC-path mismatches")
    assert ok


def test_c05_rouge_bleu_oracle():
    rng = random.Random(5)
    worst_rl = worst_bleu = 0.0
    for _ in range(200):
        a = [rng.choice("abcde") for _ in range(rng.randint(0, 14))]
        b = [rng.choice("abcde") for _ in range(rng.randint(0, 14))]
        worst_rl = max(worst_rl, abs(rouge_l(" ".join(a), " ".join(b)) - rouge_l_oracle(a, b)))
        worst_bleu = max(worst_bleu, abs(bleu4(" ".join(a), " ".join(b)) - bleu4_oracle(a, b)))
    ok = worst_rl <= 1e-9 and worst_bleu <= 1e-9
    record("C5", "ROUGE-L / BLEU-4 oracle", ok, f"max error R-L {worst_rl:.1e}, BLEU {worst_bleu:.1e}")
    assert ok


def test_c06_fragment_stats():
    single = fragment_stats_tokens("b c d e".split(), "a b c d e f".split())
    disjoint = fragment_stats_tokens("x y".split(), "a b c".split())
    trivial = (single.coverage, single.density, disjoint.coverage, disjoint.density) == (1.0, 4.0, 0.0, 0.0)
    rng = random.Random(6)
    bad = 0
    for _ in range(100):
        s = [rng.choice("abcd") for _ in range(rng.randint(0, 15))]
        src = [rng.choice("abcd") for _ in range(rng.randint(0, 25))]
        got = fragment_stats_tokens(s, src)
        frags = fragments_oracle(s, src)
        n = len(s)
        want_cov = sum(frags) / n if n else 0.0
        want_den = sum(f * f for f in frags) / n if n else 0.0
        bad += list(got.fragments) != frags or abs(got.coverage - want_cov) > 1e-12 \
            or abs(got.density - want_den) > 1e-12
    ok = trivial and bad == 0
    record("C6", "fragment coverage/density", ok, f"trivial cases {'ok' if trivial else 'wrong'}, {bad}/100 random mismatches")
    assert ok


def test_c07_split_integrity():
    rng = random.Random(7)
    ratios = (0.8, 0.1, 0.1)
    failures = []
    for trial in range(50):
        sizes = [rng.randint(1, 12) for _ in range(rng.randint(3, 40))]
        exs = [Example(f"c{c}_{k}", f"c{c}", [TextSegment(0, "w", 1)], [], "t", "")
               for c, n in enumerate(sizes) for k in range(n)]
        sp = split_by_company(exs, ratios, seed=trial)
        owner = {}
        disjoint = all(owner.setdefault(eid.split("_")[0], name) == name
                       for name, ids in sp.parts().items() for eid in ids)
        complete = sorted(sp.train + sp.val + sp.test) == sorted(e.example_id for e in exs)
        shares = all(abs(len(ids) - r * len(exs)) <= max(sizes) + 1e-9
                     for ids, r in zip((sp.train, sp.val, sp.test), ratios))
        stable = sp == split_by_company(exs, ratios, seed=trial)
        if not (disjoint and complete and shares and stable):
            failures.append(trial)
    ok = not failures
    record("C7", "split integrity", ok, f"{50 - len(failures)}/50 corpora")
    assert ok


def test_c08_tuple_ranking_beats_random():
    start = time.perf_counter()
    rng = random.Random(8)
    shape = dict(n_tables=8, n_rows=20, n_cols=4)
    train = planted_corpus(rng, 20, **shape)
    test = planted_corpus(rng, 10, **shape)
    rows = [(lt.label, x) for doc in train for lt, x in zip(doc, doc_matrix(doc))]

    class Row:
        def __init__(self, label, x):
            self.label, self.x = label, x

    sample = undersample([Row(y, x) for y, x in rows], ratio=10, seed=0)
    model = train_classifier(np.array([r.x for r in sample]), [int(r.label) for r in sample])
    n = 100
    model_recall = np.mean([
        evaluate_topn(rank_tuples(model, [lt.tuple for lt in doc], doc_matrix(doc), n), doc, [n])[n].recall
        for doc in test])
    mc = random.Random(88)
    trials = []
    for _ in range(1000):
        doc = test[mc.randrange(len(test))]
        order = [lt.tuple for lt in doc]
        mc.shuffle(order)
        trials.append(evaluate_topn(order, doc, [n])[n].recall)
    baseline = float(np.mean(trials))
    elapsed = time.perf_counter() - start
    ok = model_recall - baseline >= 20 and elapsed < 30
    record("C8", "tuple ranking vs random", ok,
           f"recall@{n} {model_recall:.1f} vs random {baseline:.1f}, {elapsed:.1f}s")
    assert ok


def test_c09_end_to_end_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("FINDSUM_WORKDIR", raising=False)
    cfg = write_config(tmp_path, pipeline={"mode": "CG", "generator": "python -m findsum.stubgen lead",
                                           "output_word_budget": 30})
    pipeline(cfg, tmp_path / "run1")
    pipeline(cfg, tmp_path / "run2")
    compared = ["reports/metrics.json", "reports/metrics.csv", "reports/manifest.json",
                "summaries/manifest.json", "tuples/eval.json", "selection/selection.json"]
    same = [(tmp_path / "run1" / r).read_bytes() == (tmp_path / "run2" / r).read_bytes() for r in compared]
    ok = all(same)
    record("C9", "end-to-end determinism", ok, f"{sum(same)}/{len(compared)} artifacts byte-identical")
    assert ok


def _big_filing(rng, words=45000, tables=30):
    vocab = [f"term{i}" for i in range(2000)]

    def para(n):
        sents, left = [], n
        while left > 0:
            k = min(left, rng.randint(8, 20))
            w = [rng.choice(vocab) for _ in range(k)]
            w[0] = w[0].capitalize()
            if rng.random() < 0.3:
                w[-1] = f"{rng.randint(1, 999)}.{rng.randint(0, 9)}"
            sents.append(" ".join(w) + ".")
            left -= k
        return "<p>" + " ".join(sents) + "</p>"

    def table(t):
        rows = "".join(f"<tr><td>Line {t}-{r}</td><td>{rng.randint(1000, 99999):,}</td>"
                       f"<td>{rng.randint(1000, 99999):,}</td></tr>" for r in range(12))
        return f"<table><tr><th></th><th>2020</th><th>2019</th></tr>{rows}</table>"

    items = [("1", "Business", 0.35), ("1A", "Risk Factors", 0.2), ("7", "Management's Discussion", 0.3),
             ("8", "Financial Statements", 0.15)]
    html, used_tables = ["<html><body>"], 0
    for item_id, title, share in items:
        html.append(f"<p>Item {item_id}. {title}</p>")
        budget = int(words * share)
        if item_id == "7":
            for head in ("Overview", "Results of Operations", "Liquidity and Capital Resources", "Outlook"):
                html.append(f"<p>{head}</p>")
                html.append(para(budget // 4))
            continue
        n_tab = tables // 3 if used_tables + tables // 3 <= tables else tables - used_tables
        n_par = 20
        for k in range(n_par):
            html.append(para(budget // n_par))
            if k < n_tab:
                html.append(table(used_tables))
                used_tables += 1
    html.append("</body></html>")
    return "".join(html)


def test_c10_throughput():
    rng = random.Random(10)
    html = _big_filing(rng)
    start = time.perf_counter()
    doc = parse_filing(html, "big_2020")
    tuples = extract_tuples(doc)
    ex = build_example(doc, tuples)
    parts = [s.text for s in ex.input_segments]
    sel = mmrg([(parts, ex.target_roo)], 10)
    hyp = selected_text(parts, sel.ids)
    row = score_one(ScoreItem(ex.example_id, hyp, ex.target_roo, doc_numbers(ex)))
    elapsed = time.perf_counter() - start
    n_words = sum(len(it.text.split()) for it in doc.items)
    n_tables = len(doc.tables())
    ok = elapsed < 10 and n_tables == 30 and n_words >= 44000 and not math.isnan(row["r1"])
    record("C10", "throughput", ok, f"{n_words} words, {n_tables} tables, {len(tuples)} tuples in {elapsed:.2f}s")
    assert ok
