import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from findsum.metrics import (
    bleu4,
    covered_num_pct,
    extract_numbers,
    fragment_stats,
    fragment_stats_tokens,
    lcs_length,
    normalize_number,
    novel_ngram_pct,
    num_metrics,
    number_coverage_direct,
    rouge_l,
    rouge_n,
)
from findsum.metrics.report import MEAN_ROW, UNDEFINED_ROW, ScoreItem, score_batch

from oracles import bleu4_oracle, fragments_oracle, lcs_dp, num_metrics_oracle


class TestExtractNumbers:
    def test_appendix_prose(self):
        text = "revenue increased $17.1 million (3.2%) to $545.7 million"
        assert extract_numbers(text) == {"17.1", "3.2", "545.7"}

    def test_numbers_inside_words_are_ignored(self):
        assert extract_numbers("COVID-19 impact") == set()
        assert extract_numbers("see Form 10-K for 2018-2019") == set()

    def test_comma_groups_normalize(self):
        assert extract_numbers("totaled $ 2,038 million and $ 15,700 million") == {"2038", "15700"}

    @pytest.mark.parametrize("raw,expected", [
        ("2,038", "2038"), ("2038", "2038"), ("545.70", "545.7"), ("+3", "3"),
        ("(2,038)", "-2038"), ("$ (1,000.50)", "-1000.5"), ("3.0", "3"), ("n/a", None),
        ("", None), ("1,00", None),
    ])
    def test_normalize(self, raw, expected):
        assert normalize_number(raw) == expected

    def test_parenthetical_percent_and_years_stay_positive(self):
        assert extract_numbers("rose (3.2%) in (2019) see (1)") == {"3.2", "2019", "1"}
        assert extract_numbers("a loss of $(5.2) million") == {"-5.2"}

    def test_scale_is_not_inferred(self):
        assert extract_numbers("545,700") & extract_numbers("545.7") == set()

    @given(st.lists(st.decimals(min_value=-10**9, max_value=10**9, places=3,
                                allow_nan=False, allow_infinity=False), max_size=20))
    def test_idempotent_under_reserialization(self, values):
        text = " ".join(str(v) for v in values)
        once = extract_numbers(text)
        assert extract_numbers(" ".join(sorted(once))) == once
        for member in once:
            assert math.isfinite(float(member))


class TestNumMetrics:
    def test_identical_sets(self):
        s = {"1", "2", "3", "4"}
        m = num_metrics(s, s, s)
        assert (m.np, m.nc, m.ns) == (1.0, 1.0, 1.0)

    def test_harmonic_mean_arithmetic(self):
        # D = S = {0..9}; H has 0,1,2 plus 12 numbers outside S
        # -> NP = 3/15 = 0.2, NC = 3/10 = 0.3, NS = 0.24
        s = {str(i) for i in range(10)}
        h = {"0", "1", "2"} | {str(100 + i) for i in range(12)}
        m = num_metrics(s, s, h)
        assert m.np == pytest.approx(0.2)
        assert m.nc == pytest.approx(0.3)
        assert m.ns == pytest.approx(0.24)

    def test_worked_triple(self):
        d, s, h = {"1", "2", "3", "4"}, {"2", "3", "5"}, {"2", "7"}
        m = num_metrics(d, s, h)
        assert (m.m_hs, m.m_ds) == (1, 2)
        assert m.np == 0.5
        assert m.nr == pytest.approx(1 / 3)
        assert m.nc == 0.5
        assert m.ns == 0.5
        assert num_metrics_oracle(d, s, h) == (m.np, m.nr, m.nc, m.ns)

    def test_undefined_cases(self):
        m = num_metrics({"1"}, {"1"}, set())
        assert m.np is None and m.ns is None and m.nc == 0.0
        m = num_metrics(set(), {"1"}, {"1"})
        assert m.nc is None and m.ns is None
        m = num_metrics({"1"}, set(), {"1"})
        assert m.nr is None and m.nc is None

    def test_zero_np_and_nc_gives_zero_ns(self):
        m = num_metrics({"1"}, {"1"}, {"9"})
        assert m.np == 0.0 and m.nc == 0.0 and m.ns == 0.0

    @given(st.sets(st.integers(0, 15)), st.sets(st.integers(0, 15)), st.sets(st.integers(0, 15)))
    def test_bounds_and_two_paths(self, d, s, h):
        d, s, h = ({str(x) for x in z} for z in (d, s, h))
        m = num_metrics(d, s, h)
        assert m.nc == number_coverage_direct(d, s, h)
        if m.np is not None and m.nc is not None:
            assert min(m.np, m.nc) - 1e-12 <= m.ns <= max(m.np, m.nc) + 1e-12


class TestCoveredNum:
    def test_cases(self):
        assert covered_num_pct({"1", "2"}, {"1", "2"}) == 100.0
        assert covered_num_pct({"3"}, {"1", "2"}) == 0.0
        assert covered_num_pct({"1"}, {"1", "2", "3", "4"}) == 25.0
        assert covered_num_pct({"1"}, set()) is None


class TestRouge:
    def test_identical_and_disjoint(self):
        assert rouge_n("a b c", "a b c", 1) == 1.0
        assert rouge_n("a b c", "a b c", 2) == 1.0
        assert rouge_l("a b c", "a b c") == 1.0
        assert rouge_n("a b", "c d", 1) == 0.0
        assert rouge_l("a b", "c d") == 0.0

    def test_worked_pair(self):
        assert rouge_n("the cat sat", "the cat ran", 1) == pytest.approx(2 / 3)
        assert lcs_length("the cat sat".split(), "the cat ran".split()) == 2
        assert rouge_l("the cat sat", "the cat ran") == pytest.approx(2 / 3)

    def test_case_insensitive(self):
        assert rouge_n("The Cat", "the cat", 1) == 1.0

    def test_empty(self):
        assert rouge_n("", "a", 1) == 0.0
        assert rouge_l("a", "") == 0.0

    @settings(max_examples=200)
    @given(st.lists(st.sampled_from("abcde"), max_size=40), st.lists(st.sampled_from("abcde"), max_size=40))
    def test_lcs_matches_dp(self, a, b):
        assert lcs_length(a, b) == lcs_dp(a, b)

    @given(st.lists(st.sampled_from("abcd"), max_size=15), st.lists(st.sampled_from("abcd"), max_size=15))
    def test_rouge1_symmetric(self, a, b):
        x, y = " ".join(a), " ".join(b)
        assert rouge_n(x, y, 1) == pytest.approx(rouge_n(y, x, 1))


class TestBleu:
    def test_identical(self):
        assert bleu4("a b c d e", "a b c d e") == pytest.approx(1.0)

    def test_no_fourgram_overlap(self):
        assert bleu4("the cat sat on the mat", "the cat is on the mat") == 0.0

    def test_hand_computed(self):
        # clipped precisions 5/6, 3/5, 2/4, 1/3, equal lengths
        assert bleu4("a b c d e f", "a b c d x f") == pytest.approx(12 ** -0.25, abs=1e-12)

    def test_brevity_penalty(self):
        assert bleu4("a b c d", "a b c d e f") == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_short_hypothesis(self):
        assert bleu4("a b c", "a b c") == 0.0
        assert bleu4("", "a b") == 0.0

    def test_matches_oracle_random(self):
        rng = random.Random(7)
        for _ in range(100):
            a = [rng.choice("abc") for _ in range(rng.randint(0, 12))]
            b = [rng.choice("abc") for _ in range(rng.randint(0, 12))]
            assert bleu4(" ".join(a), " ".join(b)) == pytest.approx(bleu4_oracle(a, b), abs=1e-12)


class TestFragments:
    def test_contiguous_span(self):
        st_ = fragment_stats("b c d e", "a b c d e f")
        assert st_.coverage == 1.0 and st_.density == 4.0

    def test_disjoint(self):
        st_ = fragment_stats("x y", "a b c")
        assert st_.coverage == 0.0 and st_.density == 0.0

    def test_two_fragments(self):
        st_ = fragment_stats("a b c x y", "a b c q x y")
        assert st_.fragments == (3, 2)
        assert st_.coverage == 1.0
        assert st_.density == pytest.approx(2.6)

    def test_longest_match_not_first_match(self):
        # the first "a a" alignment is not the longest; the true longest is 3
        st_ = fragment_stats_tokens("a a b".split(), "a a a b".split())
        assert st_.fragments == (3,)

    def test_random_vs_exhaustive(self):
        rng = random.Random(3)
        for _ in range(100):
            s = [rng.choice("abcd") for _ in range(rng.randint(0, 15))]
            a = [rng.choice("abcd") for _ in range(rng.randint(0, 25))]
            got = fragment_stats_tokens(s, a)
            assert list(got.fragments) == fragments_oracle(s, a)
            assert got.coverage <= 1.0
            assert got.density <= got.coverage * max(len(s), 1) + 1e-12


class TestNovelNgrams:
    def test_copy_and_disjoint(self):
        assert novel_ngram_pct("a b c", "x a b c y", 1) == 0.0
        assert novel_ngram_pct("a b c", "x a b c y", 3) == 0.0
        assert novel_ngram_pct("p q", "a b", 1) == 100.0

    def test_type_level_set_difference(self):
        # summary bigrams {ab, bc, cd}; source has {ab, bx, xc, cd} -> 1 novel of 3
        assert novel_ngram_pct("a b c d", "a b x c d", 2) == pytest.approx(100 / 3)
        assert novel_ngram_pct("a b a b", "a b", 2) == pytest.approx(50.0)


class TestReport:
    def test_identity_corpus(self):
        items = [ScoreItem("e1", "sales were 5 and 6 . costs hit 7 units",
                           "sales were 5 and 6 . costs hit 7 units", {"5", "6", "7"})]
        rep = score_batch(items)
        row = rep.rows[0]
        for col in ("r1", "r2", "rl", "bleu", "np", "nc", "ns"):
            assert row[col] == pytest.approx(1.0)
        assert rep.undefined["np"] == 0

    def test_empty_hypothesis_counts_undefined(self):
        rep = score_batch([ScoreItem("e1", "", "value 5", {"5"}), ScoreItem("e2", "value 5", "value 5", {"5"})])
        assert rep.rows[0]["np"] is None
        assert rep.undefined["np"] == 1
        assert rep.aggregate["np"] == 1.0
        csv_text = rep.to_csv()
        lines = csv_text.strip().split("\n")
        assert lines[0].startswith("example_id,r1,r2,rl,bleu,np")
        assert lines[-2].startswith(MEAN_ROW) and lines[-1].startswith(UNDEFINED_ROW)
