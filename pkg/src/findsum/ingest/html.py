"""Parse a filing's HTML into items of cleaned text, segments and tables."""

from __future__ import annotations

import logging
import re
from typing import Optional, Union

from bs4 import BeautifulSoup, NavigableString, Tag
from bs4.element import Comment, Declaration, Doctype, ProcessingInstruction

from findsum.errors import NoItemsFound, UnreadableInput
from findsum.ingest.models import ReportDocument, ReportItem, Table, placeholder
from findsum.ingest.tables import layout_blocks, parse_table
from findsum.ingest.text import DEFAULT_MAX_WORDS, item_id_from_heading, segment_text, strip_style_runs
from findsum.textutil import normalize_ws, word_count

log = logging.getLogger(__name__)

PARSER = "html.parser"
MAX_HEADING_WORDS = 25

_SKIP = {"script", "style", "head", "title", "meta", "noscript", "template"}
_BLOCK = {
    "p", "div", "br", "hr", "li", "ul", "ol", "dl", "dt", "dd", "h1", "h2", "h3", "h4",
    "h5", "h6", "section", "article", "header", "footer", "blockquote", "pre", "center",
    "body", "html", "form", "address", "tr", "page", "document", "text", "caption",
}
_HIDDEN_RE = re.compile(r"display\s*:\s*none", re.IGNORECASE)
_SKIP_STRINGS = (Comment, Declaration, Doctype, ProcessingInstruction)
_CIK_RE = re.compile(r"CENTRAL\s+INDEX\s+KEY:\s*(\d+)", re.IGNORECASE)
_FILED_RE = re.compile(r"FILED\s+AS\s+OF\s+DATE:\s*(\d{4})(\d{2})(\d{2})", re.IGNORECASE)


def decode(data: Union[bytes, str]) -> str:
    """UTF-8 with Latin-1 fallback; binary data is refused."""
    if isinstance(data, str):
        text = data
    elif isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError:
            text = bytes(data).decode("latin-1")
    else:
        raise UnreadableInput(f"expected bytes, got {type(data).__name__}")
    if "\x00" in text[:65536]:
        raise UnreadableInput("input looks binary (NUL bytes)")
    sample = text[:65536]
    if sample:
        ctrl = sum(1 for ch in sample if ord(ch) < 32 and ch not in "\t\n\r\f\v")
        if ctrl / len(sample) > 0.1:
            raise UnreadableInput("input looks binary (control characters)")
    return text


def header_metadata(text: str) -> tuple[Optional[str], Optional[str]]:
    """(company_id, filing_date) from an EDGAR SGML header, when present."""
    head = text[:20000]
    cik = _CIK_RE.search(head)
    filed = _FILED_RE.search(head)
    date = "-".join(filed.groups()) if filed else None
    return (cik.group(1) if cik else None), date


def _hidden(tag: Tag) -> bool:
    return bool(_HIDDEN_RE.search(str(tag.get("style", "")))) or tag.has_attr("hidden")


def _events(soup: BeautifulSoup):
    """Yield ("text", str) / ("break", None) / ("table", Tag) in document order."""
    stack: list = [iter(soup.contents)]
    closing: list = [None]
    while stack:
        node = next(stack[-1], None)
        if node is None:
            stack.pop()
            name = closing.pop()
            if name in _BLOCK:
                yield "break", None
            continue
        if isinstance(node, NavigableString):
            if not isinstance(node, _SKIP_STRINGS):
                yield "text", str(node)
            continue
        if not isinstance(node, Tag):
            continue
        name = node.name.lower()
        if name in _SKIP or _hidden(node):
            continue
        if name == "table":
            yield "table", node
            continue
        if name in _BLOCK:
            yield "break", None
        stack.append(iter(node.contents))
        closing.append(name)


def _clean_block(text: str) -> str:
    return normalize_ws(strip_style_runs(text))


def blocks_from_soup(soup: BeautifulSoup) -> list[Union[str, Table]]:
    """Flatten the DOM into cleaned text blocks and parsed tables."""
    out: list[Union[str, Table]] = []
    buf: list[str] = []

    def flush():
        if buf:
            block = _clean_block("".join(buf))
            buf.clear()
            if block:
                out.append(block)

    for kind, payload in _events(soup):
        if kind == "text":
            buf.append(payload)
        elif kind == "break":
            flush()
        else:
            flush()
            table = parse_table(payload)
            if table is None:
                out.extend(b for b in (_clean_block(x) for x in layout_blocks(payload)) if b)
            else:
                out.append(table)
    flush()
    return out


def _headings(blocks) -> list[tuple[int, str]]:
    found = []
    for i, b in enumerate(blocks):
        if isinstance(b, str) and word_count(b) <= MAX_HEADING_WORDS:
            item_id = item_id_from_heading(b)
            if item_id:
                found.append((i, item_id))
    return found


def _content_words(blocks, start: int, stop: int) -> int:
    n = 0
    for b in blocks[start:stop]:
        n += word_count(b) if isinstance(b, str) else 1
    return n


def parse_filing(html: Union[bytes, str], doc_id: str, *, company_id: Optional[str] = None,
                 filing_date: Optional[str] = None, max_words: int = DEFAULT_MAX_WORDS) -> ReportDocument:
    """Parse one filing into a :class:`ReportDocument`.

    Items are detected by "Item <N>" headings at block starts.  When an item
    heading occurs more than once (a table of contents repeats them all), the
    occurrence followed by the most content wins.  Content before the first
    retained heading is cover page and is dropped.

    ``company_id`` / ``filing_date`` override values read from the EDGAR
    header; without either, the company is the ``doc_id`` prefix before the
    first underscore.
    """
    text = decode(html)
    cik, filed = header_metadata(text)
    company = company_id or cik or doc_id.split("_", 1)[0]
    date = filing_date or filed

    blocks = blocks_from_soup(BeautifulSoup(text, PARSER))
    heads = _headings(blocks)
    if not heads:
        raise NoItemsFound(f"{doc_id}: no 'Item <N>' headings found")

    bounds = [pos for pos, _ in heads[1:]] + [len(blocks)]
    best: dict[str, tuple[int, int, int]] = {}
    for (pos, item_id), stop in zip(heads, bounds):
        size = _content_words(blocks, pos + 1, stop)
        if item_id not in best or size >= best[item_id][2]:
            best[item_id] = (pos, stop, size)

    items: list[ReportItem] = []
    next_table = 0
    for item_id, (pos, stop, _) in sorted(best.items(), key=lambda kv: kv[1][0]):
        parts: list[str] = []
        tables: list[Table] = []
        for b in blocks[pos:stop]:
            if isinstance(b, Table):
                b.table_id = next_table
                next_table += 1
                tables.append(b)
                parts.append(placeholder(b.table_id))
            else:
                parts.append(b)
        item_text = "\n".join(parts)
        items.append(ReportItem(item_id, item_text, segment_text(item_text, max_words, item_id), tables))
    log.debug("%s: %d items, %d tables", doc_id, len(items), next_table)
    return ReportDocument(doc_id, company, date, items)
