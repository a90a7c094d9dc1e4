"""Locate the MD&A item and carve its two target sections out of it."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from findsum.errors import NoMdaItem
from findsum.ingest.models import ReportDocument, ReportItem

ROO_KEY = "results of operations"
LIQUIDITY_KEY = "liquidity and capital resources"
MAX_HEADING_WORDS = 12

# Headings that end a target section: the usual sibling sections of MD&A.
STOP_KEYS = (
    ROO_KEY, LIQUIDITY_KEY, "critical accounting", "off-balance sheet", "off balance sheet",
    "contractual obligations", "recent accounting pronouncements", "new accounting pronouncements",
    "recently issued accounting", "overview", "forward-looking", "forward looking", "inflation",
    "seasonality", "quantitative and qualitative",
)

_PLACEHOLDER_RE = re.compile(r"^\[TABLE_(\d+)\]$")
_MDA_RE = re.compile(r"management[’'`s]*\s+discussion", re.IGNORECASE)


@dataclass
class MdaSplit:
    roo: list[str] = field(default_factory=list)
    liquidity: list[str] = field(default_factory=list)
    residual: list[str] = field(default_factory=list)
    target_tables: set[int] = field(default_factory=set)


def is_heading(block: str) -> bool:
    b = block.strip()
    return (bool(b) and not b.endswith(".") and len(b.split()) <= MAX_HEADING_WORDS
            and any(ch.isalpha() for ch in b) and not _PLACEHOLDER_RE.match(b))


def is_placeholder(block: str) -> bool:
    return bool(_PLACEHOLDER_RE.match(block.strip()))


def find_mda_item(doc: ReportDocument) -> ReportItem:
    for item in doc.items:
        if item.item_id == "item7":
            return item
    for item in doc.items:
        first = item.text.split("\n", 1)[0]
        if _MDA_RE.search(first):
            return item
    raise NoMdaItem(f"{doc.doc_id}: no MD&A item")


def _section_of(block: str):
    low = block.lower()
    if ROO_KEY in low:
        return "roo"
    if LIQUIDITY_KEY in low:
        return "liquidity"
    if any(k in low for k in STOP_KEYS):
        return "stop"
    return None


def split_mda(item_text: str) -> MdaSplit:
    """Assign every block of the MD&A text to roo, liquidity or residual.

    A target section runs from its heading to the next heading naming a
    sibling section (or the end of the item).  Headings inside a target
    section are dropped so the target holds prose only; tables there are
    recorded in ``target_tables``.
    """
    out = MdaSplit()
    blocks = item_text.split("\n")
    state = None
    for i, block in enumerate(blocks):
        if i > 0 and is_heading(block):
            kind = _section_of(block)
            if kind in ("roo", "liquidity"):
                state = kind
                continue
            if kind == "stop":
                state = None
        if state is None:
            out.residual.append(block)
            continue
        m = _PLACEHOLDER_RE.match(block.strip())
        if m:
            out.target_tables.add(int(m.group(1)))
        elif not is_heading(block):
            getattr(out, state).append(block)
    return out


def extract_targets(doc: ReportDocument) -> tuple[str, str]:
    """(results-of-operations text, liquidity text); either may be empty."""
    split = split_mda(find_mda_item(doc).text)
    return "\n".join(split.roo), "\n".join(split.liquidity)
