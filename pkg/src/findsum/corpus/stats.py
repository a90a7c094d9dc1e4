"""Dataset statistics: lengths, numeric coverage, extractiveness, novelty."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from findsum.corpus.example import Example
from findsum.metrics.fragments import fragment_stats_tokens, novel_ngram_pct_tokens
from findsum.metrics.numbers import covered_num_pct, extract_numbers
from findsum.textutil import split_sentences, tokenize


@dataclass
class DatasetStats:
    pairs: int
    avg_doc_words: float
    avg_doc_sents: float
    avg_sum_words: float
    avg_sum_sents: float
    avg_sum_nums: float
    pct_covered_num: Optional[float]
    frag_coverage: float
    frag_density: float
    novel_ngram_pct: tuple[float, float, float, float]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["novel_ngram_pct"] = list(self.novel_ngram_pct)
        return d


def example_measures(example: Example, target: str = "roo") -> dict:
    """Direct per-example measures; corpus stats are their means."""
    summary = example.target(target)
    doc = example.input_text
    s_tok, d_tok = tokenize(summary), tokenize(doc)
    frag = fragment_stats_tokens(s_tok, d_tok)
    s_nums = extract_numbers(summary)
    return {
        "doc_words": len(d_tok),
        "doc_sents": sum(len(split_sentences(s.text)) for s in example.input_segments),
        "sum_words": len(s_tok),
        "sum_sents": len(split_sentences(summary)),
        "sum_nums": len(s_nums),
        "covered": covered_num_pct(extract_numbers(doc), s_nums),
        "coverage": frag.coverage,
        "density": frag.density,
        "novel": tuple(novel_ngram_pct_tokens(s_tok, d_tok, n) for n in (1, 2, 3, 4)),
    }


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def corpus_stats(examples: Sequence[Example], target: str = "roo", jobs: int = 1) -> DatasetStats:
    """Table-style statistics over examples whose ``target`` summary is non-empty.

    Averages are per-example means.  ``pct_covered_num`` skips examples
    whose summary has no numbers and is None when no example has any.
    """
    if not examples:
        raise ValueError("corpus_stats needs a non-empty corpus")
    usable = [ex for ex in examples if ex.target(target).strip()]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda ex: example_measures(ex, target), usable))
    else:
        rows = [example_measures(ex, target) for ex in usable]
    covered = [r["covered"] for r in rows if r["covered"] is not None]
    return DatasetStats(
        pairs=len(rows),
        avg_doc_words=_mean(r["doc_words"] for r in rows),
        avg_doc_sents=_mean(r["doc_sents"] for r in rows),
        avg_sum_words=_mean(r["sum_words"] for r in rows),
        avg_sum_sents=_mean(r["sum_sents"] for r in rows),
        avg_sum_nums=_mean(r["sum_nums"] for r in rows),
        pct_covered_num=_mean(covered) if covered else None,
        frag_coverage=_mean(r["coverage"] for r in rows),
        frag_density=_mean(r["density"] for r in rows),
        novel_ngram_pct=tuple(_mean(r["novel"][k] for r in rows) for k in range(4)),
    )
