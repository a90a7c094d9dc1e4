"""Ranking tuples by classifier probability and top-n evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from findsum.ingest.models import TableTuple

DEFAULT_TOP_N = (100, 200)


def rank_indices(probs: Sequence[float], tuples: Sequence[TableTuple]) -> list[int]:
    """Indices by descending probability; ties broken by (table_id, row_id, col_id)."""
    p = np.asarray(probs, dtype=float)
    return sorted(range(len(tuples)), key=lambda i: (-p[i], tuples[i].key))


def rank_tuples(model, tuples: Sequence[TableTuple], features, n: int) -> list[TableTuple]:
    if n < 1:
        raise ValueError("n must be >= 1")
    tuples = list(tuples)
    if not tuples:
        return []
    probs = model.predict_proba(features)
    return [tuples[i] for i in rank_indices(probs, tuples)[:n]]


@dataclass(frozen=True)
class TopNScore:
    n: int
    accuracy: float
    recall: float


def evaluate_topn(ranked: Sequence[TableTuple], all_labeled: Iterable,
                  n_values: Sequence[int] = DEFAULT_TOP_N) -> dict[int, TopNScore]:
    """Accuracy and recall (both in percent) of the first n ranked tuples.

    The top-n set counts as predicted positive and everything else as
    predicted negative.  Recall is 100 when there are no salient tuples.
    """
    labels = {lt.tuple.key: bool(lt.label) for lt in all_labeled}
    missing = [t.key for t in ranked if t.key not in labels]
    if missing:
        raise ValueError(f"ranked tuples without labels: {missing[:5]}")
    total_pos = sum(labels.values())
    out = {}
    for n in n_values:
        top = {t.key for t in ranked[:n]}
        tp = sum(labels[k] for k in top)
        fp = len(top) - tp
        fn = total_pos - tp
        correct = len(labels) - fp - fn
        acc = 100.0 * correct / len(labels) if labels else 0.0
        rec = 100.0 * tp / total_pos if total_pos else 100.0
        out[n] = TopNScore(n, acc, rec)
    return out
