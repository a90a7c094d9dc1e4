"""Clipped n-gram recall and recall profiles over selected texts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from findsum.textutil import ngram_counts, tokenize

PROFILE_ORDERS = (1, 2, 3, 5)

Orders = Union[int, Sequence[int]]


def as_orders(n: Orders) -> tuple[int, ...]:
    orders = (n,) if isinstance(n, int) else tuple(n)
    if not orders or any(int(k) < 1 for k in orders):
        raise ValueError(f"n-gram orders must be >= 1, got {n!r}")
    return tuple(int(k) for k in orders)


def ngram_recall_tokens(candidate: Sequence[str], target: Sequence[str], n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    t = ngram_counts(target, n)
    total = sum(t.values())
    if not total:
        return 0.0
    c = ngram_counts(candidate, n)
    return sum(min(v, c[g]) for g, v in t.items()) / total


def ngram_recall(candidate: str, target: str, n: int) -> float:
    """|clipped n-gram overlap| / |target n-grams|; 0 when the target has none."""
    return ngram_recall_tokens(tokenize(candidate), tokenize(target), n)


def mean_recall(candidate: str, target: str, n: Orders = 1) -> float:
    orders = as_orders(n)
    c, t = tokenize(candidate), tokenize(target)
    return sum(ngram_recall_tokens(c, t, k) for k in orders) / len(orders)


@dataclass(frozen=True)
class RecallProfile:
    recall_by_n: dict
    recall_avg: float


def evaluate_selection(selected: Sequence[str], targets: Sequence[str],
                       orders: Sequence[int] = PROFILE_ORDERS) -> RecallProfile:
    """Mean recall per order across examples, and the mean over orders."""
    if len(selected) != len(targets):
        raise ValueError(f"{len(selected)} selections for {len(targets)} targets")
    orders = as_orders(orders)
    toks = [(tokenize(s), tokenize(t)) for s, t in zip(selected, targets)]
    by_n = {}
    for n in orders:
        vals = [ngram_recall_tokens(s, t, n) for s, t in toks]
        by_n[n] = sum(vals) / len(vals) if vals else 0.0
    return RecallProfile(by_n, sum(by_n.values()) / len(by_n))
