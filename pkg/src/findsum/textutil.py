"""Tokenization, sentence splitting and n-gram helpers shared across stages."""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Sequence

_WS = re.compile(r"\s+")

# Tokens that end in a period but never close a sentence.
ABBREVIATIONS = frozenset(
    {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.",
        "inc.", "corp.", "co.", "ltd.", "llc.", "l.p.", "plc.", "bros.",
        "no.", "nos.", "vs.", "v.", "etc.", "e.g.", "i.e.", "cf.", "approx.",
        "u.s.", "u.k.", "u.s.a.", "n.a.", "s.a.",
        "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.",
        "oct.", "nov.", "dec.", "fig.", "sec.", "art.", "dept.", "est.",
    }
)

# Candidate boundary: terminator, optional closing quotes/brackets, whitespace,
# then an (optionally quoted/bracketed) capital letter.
_NUMBERED_LABELS = frozenset({"item", "note", "part", "section"})

_BOUNDARY = re.compile(r"[.!?][\"')\]]*(\s+)(?=[\"'(\[]*[A-Z])")


def normalize_ws(text: str) -> str:
    return _WS.sub(" ", text.replace("\xa0", " ")).strip()


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokens; the tokenization every metric uses."""
    return text.lower().split()


def word_count(text: str) -> int:
    return len(text.split())


def _split_line(line: str) -> list[str]:
    sentences = []
    start = 0
    for m in _BOUNDARY.finditer(line):
        head = line[start : m.start(1)]
        last = head.split()[-1].lower() if head.split() else ""
        if last in ABBREVIATIONS:
            continue
        # single initials like "J." are not boundaries either
        if re.fullmatch(r"[a-z]\.", last):
            continue
        # "Item 7. Management's ..." / "Note 3. Debt": numbered headings
        if re.fullmatch(r"\d+[a-z]?\.", last) and len(head.split()) >= 2 \
                and head.split()[-2].lower() in _NUMBERED_LABELS:
            continue
        sentences.append(head.strip())
        start = m.end(1)
    tail = line[start:].strip()
    if tail:
        sentences.append(tail)
    return [s for s in sentences if s]


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation followed by a capitalized word.

    Newlines are hard boundaries: block structure from the source document
    (headings, paragraphs) never merges into one sentence.
    """
    out: list[str] = []
    for line in text.splitlines():
        line = normalize_ws(line)
        if line:
            out.extend(_split_line(line))
    return out


def ngrams(tokens: Sequence[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(ngrams(tokens, n))


def join_sentences(sentences: Iterable[str]) -> str:
    return " ".join(s for s in sentences if s)


def truncate_sentences(text: str, budget: int) -> str:
    """Keep whole sentences while the running word count stays within budget.

    If even the first sentence does not fit, it is cut at the word budget so
    the result is never empty for a non-empty input and positive budget.
    """
    if budget <= 0:
        return ""
    kept: list[str] = []
    used = 0
    for sent in split_sentences(text):
        n = word_count(sent)
        if used + n > budget:
            if not kept:
                kept.append(" ".join(sent.split()[:budget]))
            break
        kept.append(sent)
        used += n
    return join_sentences(kept)
