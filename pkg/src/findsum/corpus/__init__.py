from findsum.corpus.clean import CorpusSplit, dedup_and_filter, split_by_company
from findsum.corpus.example import Example, build_example, doc_numbers, read_examples, write_examples
from findsum.corpus.stats import DatasetStats, corpus_stats
from findsum.corpus.targets import extract_targets

__all__ = [
    "CorpusSplit", "dedup_and_filter", "split_by_company", "Example", "build_example",
    "doc_numbers", "read_examples", "write_examples", "DatasetStats", "corpus_stats",
    "extract_targets",
]
