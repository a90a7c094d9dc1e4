"""TextRank and LexRank sentence extraction (PageRank over sentence graphs)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from findsum.textutil import tokenize, word_count

DAMPING = 0.85
TOL = 1e-6
MAX_ITER = 100
LEXRANK_THRESHOLD = 0.1


@dataclass(frozen=True)
class ExtractiveSelection:
    indices: tuple[int, ...]
    sentences: tuple[str, ...]
    scores: tuple[float, ...]

    @property
    def text(self) -> str:
        return " ".join(self.sentences)


def pagerank(weights: np.ndarray, damping: float = DAMPING, tol: float = TOL,
             max_iter: int = MAX_ITER) -> np.ndarray:
    """Weighted PageRank; rows with no outgoing weight jump uniformly."""
    n = weights.shape[0]
    if n == 0:
        return np.zeros(0)
    w = np.asarray(weights, dtype=float)
    out = w.sum(axis=1)
    trans = np.empty_like(w)
    live = out > 0
    trans[live] = w[live] / out[live, None]
    trans[~live] = 1.0 / n
    pr = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        new = (1.0 - damping) / n + damping * (trans.T @ pr)
        done = np.abs(new - pr).sum() < tol
        pr = new
        if done:
            break
    return pr


def textrank_matrix(sentences: Sequence[str]) -> np.ndarray:
    """Word-overlap similarity normalized by log sentence lengths, no self-loops."""
    toks = [tokenize(s) for s in sentences]
    vocab = {w: k for k, w in enumerate(sorted({w for t in toks for w in t}))}
    n = len(sentences)
    b = np.zeros((n, len(vocab)))
    for i, t in enumerate(toks):
        b[i, [vocab[w] for w in set(t)]] = 1.0
    overlap = b @ b.T
    logs = np.log(np.maximum([len(t) for t in toks], 1))
    denom = logs[:, None] + logs[None, :]
    # two one-word sentences sharing their word: weight by raw overlap
    m = np.where(denom > 0, overlap / np.where(denom > 0, denom, 1.0), overlap)
    np.fill_diagonal(m, 0.0)
    return m


def tfidf_matrix(sentences: Sequence[str]) -> np.ndarray:
    """L2-normalized TF-IDF rows; idf = ln((1+N)/(1+df)) + 1 over the sentences."""
    docs = [Counter(tokenize(s)) for s in sentences]
    vocab = sorted({w for d in docs for w in d})
    index = {w: k for k, w in enumerate(vocab)}
    n = len(docs)
    df = Counter(w for d in docs for w in d)
    x = np.zeros((n, len(vocab)))
    for i, d in enumerate(docs):
        for w, c in d.items():
            x[i, index[w]] = c * (math.log((1 + n) / (1 + df[w])) + 1.0)
    norms = np.linalg.norm(x, axis=1)
    norms[norms == 0] = 1.0
    return x / norms[:, None]


def lexrank_matrix(sentences: Sequence[str], threshold: float = LEXRANK_THRESHOLD) -> np.ndarray:
    """0/1 adjacency where TF-IDF cosine >= threshold (self-loops included)."""
    x = tfidf_matrix(sentences)
    cos = x @ x.T
    adj = (cos >= threshold - 1e-12).astype(float)
    # empty sentences have a zero vector; give them only a self-loop
    for i in range(len(sentences)):
        adj[i, i] = 1.0
    return adj


def pack(sentences: Sequence[str], scores: Sequence[float], budget_words: int) -> ExtractiveSelection:
    """Take sentences by descending score while they fit; restore source order.

    Sentences that do not fit are skipped (a shorter one further down may
    still fit).  If nothing fits, the top sentence is cut to the budget.
    """
    if budget_words < 1:
        raise ValueError("budget_words must be >= 1")
    order = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))
    chosen, used = [], 0
    for i in order:
        w = word_count(sentences[i])
        if w and used + w <= budget_words:
            chosen.append(i)
            used += w
    if not chosen and order:
        top = order[0]
        cut = " ".join(sentences[top].split()[:budget_words])
        return ExtractiveSelection((top,), (cut,), (float(scores[top]),))
    chosen.sort()
    return ExtractiveSelection(tuple(chosen), tuple(sentences[i] for i in chosen),
                               tuple(float(scores[i]) for i in chosen))


def textrank_extract(sentences: Sequence[str], budget_words: int) -> ExtractiveSelection:
    sentences = list(sentences)
    if not sentences:
        return ExtractiveSelection((), (), ())
    return pack(sentences, pagerank(textrank_matrix(sentences)), budget_words)


def lexrank_extract(sentences: Sequence[str], budget_words: int,
                    threshold: float = LEXRANK_THRESHOLD) -> ExtractiveSelection:
    sentences = list(sentences)
    if not sentences:
        return ExtractiveSelection((), (), ())
    return pack(sentences, pagerank(lexrank_matrix(sentences, threshold)), budget_words)
