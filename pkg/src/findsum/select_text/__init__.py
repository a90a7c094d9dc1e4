from findsum.select_text.graph import ExtractiveSelection, lexrank_extract, pagerank, textrank_extract
from findsum.select_text.mmrg import (
    MmrgResult, SegmentSelection, SelectionExample, examples_from_corpus, mmrg,
    mmrg_multi_segment, recall_gain, select_part, selected_text,
)
from findsum.select_text.recall import RecallProfile, evaluate_selection, mean_recall, ngram_recall
from findsum.select_text.split import split_summary

__all__ = [
    "ExtractiveSelection", "lexrank_extract", "pagerank", "textrank_extract", "MmrgResult",
    "SegmentSelection", "SelectionExample", "examples_from_corpus", "mmrg", "mmrg_multi_segment",
    "recall_gain", "select_part", "selected_text", "RecallProfile", "evaluate_selection",
    "mean_recall", "ngram_recall", "split_summary",
]
