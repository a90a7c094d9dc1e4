"""Corpus cleaning (dedup, length filter, truncation) and the company split."""

from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

from findsum.corpus.example import Example
from findsum.errors import InsufficientCompanies
from findsum.textutil import normalize_ws

log = logging.getLogger(__name__)

DEFAULT_MIN_WORDS = 1000
DEFAULT_MAX_WORDS = 60000
SPLIT_NAMES = ("train", "val", "test")


def input_digest(example: Example) -> str:
    return hashlib.sha256(normalize_ws(example.input_text).encode("utf-8")).hexdigest()


def truncate_example(example: Example, max_words: int) -> Example:
    """Drop trailing segments until the input fits; never cuts inside a segment."""
    kept, used = [], 0
    for seg in example.input_segments:
        if used + seg.word_count > max_words:
            break
        kept.append(seg)
        used += seg.word_count
    if len(kept) == len(example.input_segments):
        return example
    return Example(example.example_id, example.company_id, kept, example.input_tuples,
                   example.target_roo, example.target_liquidity, dict(example.table_sections))


def dedup_and_filter(examples: Sequence[Example], min_input_words: int = DEFAULT_MIN_WORDS,
                     max_input_words: int = DEFAULT_MAX_WORDS) -> list[Example]:
    """Truncate long inputs, drop exact duplicates (first kept), drop short inputs."""
    if min_input_words < 0 or max_input_words <= 0 or min_input_words >= max_input_words:
        raise ValueError("need 0 <= min_input_words < max_input_words")
    seen: set[str] = set()
    out = []
    dropped_dup = dropped_short = 0
    for ex in examples:
        ex = truncate_example(ex, max_input_words)
        key = input_digest(ex)
        if key in seen:
            dropped_dup += 1
            continue
        seen.add(key)
        if ex.input_words < min_input_words:
            dropped_short += 1
            continue
        out.append(ex)
    log.info("dedup_and_filter: kept %d, %d duplicates, %d too short",
             len(out), dropped_dup, dropped_short)
    return out


@dataclass
class CorpusSplit:
    train: list[str] = field(default_factory=list)
    val: list[str] = field(default_factory=list)
    test: list[str] = field(default_factory=list)
    seed: int = 0

    def parts(self) -> dict[str, list[str]]:
        return {"train": self.train, "val": self.val, "test": self.test}

    def to_dict(self) -> dict:
        return {**self.parts(), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusSplit":
        return cls(list(d["train"]), list(d["val"]), list(d["test"]), int(d["seed"]))


def split_by_company(examples: Sequence[Example], ratios=(0.8, 0.1, 0.1), seed: int = 0) -> CorpusSplit:
    """Company-disjoint split with example-count shares close to ``ratios``.

    Companies are shuffled with a seeded PRNG and each goes, whole, to the
    split currently furthest below its quota (ties to the earlier split).
    Every split ends within one company's example count of its quota.
    """
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must be 3 non-negative numbers summing to 1, got {ratios}")
    by_company: dict[str, list[str]] = {}
    for ex in examples:
        by_company.setdefault(ex.company_id, []).append(ex.example_id)
    if len(by_company) < 3:
        raise InsufficientCompanies(f"need at least 3 companies, got {len(by_company)}")
    companies = sorted(by_company)
    random.Random(seed).shuffle(companies)
    total = sum(len(v) for v in by_company.values())
    quotas = [r * total for r in ratios]
    buckets: list[list[str]] = [[], [], []]
    sizes = [0, 0, 0]
    for comp in companies:
        deficits = [quotas[i] - sizes[i] for i in range(3)]
        i = max(range(3), key=lambda k: (deficits[k], -k))
        buckets[i].extend(by_company[comp])
        sizes[i] += len(by_company[comp])
    return CorpusSplit(*(sorted(b) for b in buckets), seed=seed)
