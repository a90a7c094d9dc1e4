from findsum.metrics.fragments import (
    FragmentStats,
    fragment_lengths,
    fragment_stats,
    fragment_stats_tokens,
    novel_ngram_pct,
)
from findsum.metrics.numbers import (
    NumMetrics,
    covered_num_pct,
    extract_numbers,
    normalize_number,
    num_metrics,
    number_coverage_direct,
    parse_number,
)
from findsum.metrics.overlap import RougeScore, bleu4, lcs_length, rouge_all, rouge_l, rouge_n
from findsum.metrics.report import MetricReport, ScoreItem, score_batch, score_one

__all__ = [
    "FragmentStats", "fragment_lengths", "fragment_stats", "fragment_stats_tokens",
    "novel_ngram_pct", "NumMetrics", "covered_num_pct", "extract_numbers",
    "normalize_number", "num_metrics", "number_coverage_direct", "parse_number",
    "RougeScore", "bleu4", "lcs_length", "rouge_all", "rouge_l", "rouge_n",
    "MetricReport", "ScoreItem", "score_batch", "score_one",
]
