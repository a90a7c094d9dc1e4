"""ROUGE-N / ROUGE-L F1 and cumulative 4-gram BLEU over lowercased whitespace tokens."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from findsum.textutil import ngram_counts, tokenize


@dataclass(frozen=True)
class RougeScore:
    r1: float
    r2: float
    rl: float


def _f1(overlap: int, hyp_total: int, ref_total: int) -> float:
    if overlap == 0 or hyp_total == 0 or ref_total == 0:
        return 0.0
    p = overlap / hyp_total
    r = overlap / ref_total
    return 2 * p * r / (p + r)


def rouge_n_tokens(hyp: Sequence[str], ref: Sequence[str], n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    h = ngram_counts(hyp, n)
    r = ngram_counts(ref, n)
    overlap = sum(min(c, r[g]) for g, c in h.items() if g in r)
    return _f1(overlap, sum(h.values()), sum(r.values()))


def rouge_n(hyp: str, ref: str, n: int) -> float:
    return rouge_n_tokens(tokenize(hyp), tokenize(ref), n)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence.

    Bit-parallel formulation: one machine-word-free integer holds a bit per
    position of ``a``, so each symbol of ``b`` costs a handful of big-int ops
    instead of a full DP row.
    """
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    masks: dict[str, int] = {}
    for i, tok in enumerate(a):
        masks[tok] = masks.get(tok, 0) | (1 << i)
    full = (1 << len(a)) - 1
    v = full
    for tok in b:
        m = masks.get(tok)
        if m is None:
            continue
        u = v & m
        v = ((v + u) | (v - u)) & full
    return len(a) - bin(v).count("1")


def rouge_l_tokens(hyp: Sequence[str], ref: Sequence[str]) -> float:
    return _f1(lcs_length(hyp, ref), len(hyp), len(ref))


def rouge_l(hyp: str, ref: str) -> float:
    return rouge_l_tokens(tokenize(hyp), tokenize(ref))


def rouge_all(hyp: str, ref: str) -> RougeScore:
    h, r = tokenize(hyp), tokenize(ref)
    return RougeScore(rouge_n_tokens(h, r, 1), rouge_n_tokens(h, r, 2), rouge_l_tokens(h, r))


def bleu4_tokens(hyp: Sequence[str], ref: Sequence[str]) -> float:
    if not hyp:
        return 0.0
    log_sum = 0.0
    for n in range(1, 5):
        h = ngram_counts(hyp, n)
        total = sum(h.values())
        if total == 0:
            return 0.0
        r = ngram_counts(ref, n)
        clipped = sum(min(c, r[g]) for g, c in h.items() if g in r)
        if clipped == 0:
            return 0.0
        log_sum += 0.25 * math.log(clipped / total)
    c, rl = len(hyp), len(ref)
    bp = 1.0 if c > rl else math.exp(1 - rl / c)
    return bp * math.exp(log_sum)


def bleu4(hyp: str, ref: str) -> float:
    """Cumulative BLEU-4 (uniform weights, single reference, no smoothing)."""
    return bleu4_tokens(tokenize(hyp), tokenize(ref))
