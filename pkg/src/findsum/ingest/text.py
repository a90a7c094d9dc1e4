"""Text cleanup and sentence-packed segmentation of item text."""

from __future__ import annotations

import re

from findsum.ingest.models import TextSegment
from findsum.textutil import normalize_ws, split_sentences, word_count

# "Item 7", "ITEM 1A.", "Item&nbsp;7A" at the start of a block or line
ITEM_HEADING_RE = re.compile(r"^\s*item\s+(\d{1,2}[a-z]?)\b", re.IGNORECASE)
_ITEM_LINE_RE = re.compile(r"^[ \t\xa0]*item[ \t\xa0]+\d{1,2}[a-z]?\b", re.IGNORECASE | re.MULTILINE)

# 4+ repeats of one non-alphanumeric, non-space character: "=====", "*****", "....".
_STYLE_RUN_RE = re.compile(r"([^\w\s])\1{3,}")
_PLACEHOLDER_RE = re.compile(r"\[TABLE_\d+\]")

DEFAULT_MAX_WORDS = 500


def item_id_from_heading(block: str):
    m = ITEM_HEADING_RE.match(block)
    return f"item{m.group(1).lower()}" if m else None


def strip_style_runs(text: str) -> str:
    return _STYLE_RUN_RE.sub(" ", text)


def clean_text(raw: str) -> str:
    """Drop the cover page, decorative character runs and redundant whitespace.

    Everything before the first line starting with an "Item <N>" heading is
    removed (text without any heading is kept whole).  Line structure is kept
    so later stages can still see headings; blank lines disappear.
    """
    m = _ITEM_LINE_RE.search(raw)
    if m:
        raw = raw[m.start():]
    lines = (normalize_ws(strip_style_runs(line)) for line in raw.splitlines())
    return "\n".join(line for line in lines if line)


def remove_placeholders(text: str) -> str:
    return _PLACEHOLDER_RE.sub(" ", text)


def segment_text(item_text: str, max_words: int = DEFAULT_MAX_WORDS, item_id: str = "") -> list[TextSegment]:
    """Greedily pack sentences into segments of at most ``max_words`` words.

    A sentence longer than the limit is emitted as a segment of its own.
    Table placeholders are not text and are skipped.
    """
    if max_words < 1:
        raise ValueError("max_words must be >= 1")
    segments: list[TextSegment] = []
    buf: list[str] = []
    used = 0

    def flush():
        nonlocal buf, used
        if buf:
            text = " ".join(buf)
            segments.append(TextSegment(len(segments), text, word_count(text), item_id))
        buf, used = [], 0

    for sent in split_sentences(remove_placeholders(item_text)):
        n = word_count(sent)
        if used and used + n > max_words:
            flush()
        buf.append(sent)
        used += n
    flush()
    return segments
