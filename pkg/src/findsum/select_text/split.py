"""Cut a target summary into k contiguous, roughly equal-length slots."""

from __future__ import annotations

from findsum.textutil import join_sentences, split_sentences, word_count


def split_summary(text: str, k: int) -> list[str]:
    """Sentence-aligned split into ``k`` pieces (some may be empty).

    Each sentence goes to the slot in which its first word falls, so the
    pieces are contiguous, in order, and balanced by word count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sents = split_sentences(text)
    total = sum(word_count(s) for s in sents)
    slots: list[list[str]] = [[] for _ in range(k)]
    before = 0
    for s in sents:
        w = word_count(s)
        idx = min(k - 1, k * before // total) if total else 0
        slots[idx].append(s)
        before += w
    return [join_sentences(x) for x in slots]
