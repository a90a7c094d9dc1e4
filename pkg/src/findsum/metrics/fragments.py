"""Extractive fragment coverage/density and novel n-gram rates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from findsum.textutil import ngrams, tokenize


@dataclass(frozen=True)
class FragmentStats:
    coverage: float
    density: float
    fragments: tuple[int, ...]


class _SuffixAutomaton:
    """Suffix automaton over a token sequence (tokens pre-mapped to ints)."""

    __slots__ = ("link", "length", "trans")

    def __init__(self, seq: Sequence[int]):
        link = [-1]
        length = [0]
        trans: list[dict[int, int]] = [{}]
        last = 0
        for c in seq:
            cur = len(length)
            length.append(length[last] + 1)
            link.append(-1)
            trans.append({})
            p = last
            while p != -1 and c not in trans[p]:
                trans[p][c] = cur
                p = link[p]
            if p == -1:
                link[cur] = 0
            else:
                q = trans[p][c]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = len(length)
                    length.append(length[p] + 1)
                    link.append(link[q])
                    trans.append(dict(trans[q]))
                    while p != -1 and trans[p].get(c) == q:
                        trans[p][c] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur
        self.link, self.length, self.trans = link, length, trans

    def matching_statistics(self, seq: Sequence[int]) -> list[int]:
        """out[k] = longest suffix of seq[:k+1] occurring in the indexed sequence."""
        link, length, trans = self.link, self.length, self.trans
        state, cur_len = 0, 0
        out = []
        for c in seq:
            while state and c not in trans[state]:
                state = link[state]
                cur_len = length[state]
            nxt = trans[state].get(c)
            if nxt is None:
                state, cur_len = 0, 0
            else:
                state, cur_len = nxt, cur_len + 1
            out.append(cur_len)
        return out


def longest_match_lengths(summary: Sequence[str], source: Sequence[str]) -> list[int]:
    """For each summary position i, the longest summary[i:i+L] found in source."""
    vocab: dict[str, int] = {}
    src = [vocab.setdefault(t, len(vocab)) for t in source]
    # words absent from the source get ids that cannot match
    summ = [vocab.get(t, -1 - k) for k, t in enumerate(summary)]
    sam = _SuffixAutomaton(src[::-1])
    ms = sam.matching_statistics(summ[::-1])
    n = len(summary)
    return [ms[n - 1 - i] for i in range(n)]


def fragment_lengths(summary: Sequence[str], source: Sequence[str]) -> list[int]:
    """Greedy left-to-right decomposition into longest shared fragments."""
    best = longest_match_lengths(summary, source)
    out, i = [], 0
    while i < len(summary):
        length = best[i]
        if length:
            out.append(length)
        i += max(length, 1)
    return out


def fragment_stats_tokens(summary: Sequence[str], source: Sequence[str]) -> FragmentStats:
    if not summary:
        return FragmentStats(0.0, 0.0, ())
    frags = fragment_lengths(summary, source)
    n = len(summary)
    return FragmentStats(sum(frags) / n, sum(f * f for f in frags) / n, tuple(frags))


def fragment_stats(summary: str, source: str) -> FragmentStats:
    return fragment_stats_tokens(tokenize(summary), tokenize(source))


def novel_ngram_pct_tokens(summary: Sequence[str], source: Sequence[str], n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    grams = set(ngrams(summary, n))
    if not grams:
        return 0.0
    seen = set(ngrams(source, n))
    return 100.0 * len(grams - seen) / len(grams)


def novel_ngram_pct(summary: str, source: str, n: int) -> float:
    """Percent of distinct summary n-grams that never occur in the source (0 when none)."""
    return novel_ngram_pct_tokens(tokenize(summary), tokenize(source), n)
