"""Pure input assembly for the CG and GC pipelines."""

from __future__ import annotations

import math
from typing import Sequence

from findsum.ingest.models import TableTuple
from findsum.textutil import join_sentences, normalize_ws, truncate_sentences, word_count

FIELD_SEP = " | "
TUPLE_SEP = " , "


def _clean_field(text: str, special_symbol: str) -> str:
    # keep the separators unambiguous so the block parses back
    text = normalize_ws(text).replace(special_symbol, " ")
    text = normalize_ws(text.replace(" | ", " / ").replace("|", "/"))
    while " , " in text:
        text = text.replace(" , ", ", ")
    return text.strip(" ,")


def serialize_tuple(t: TableTuple, special_symbol: str = "<tuples>") -> str:
    """Row name, column name, cell value and date; positional ids are dropped."""
    fields = (t.row_name, t.col_name, t.cell_value, t.date)
    return FIELD_SEP.join(_clean_field(f, special_symbol) for f in fields)


def serialize_tuples(tuples: Sequence[TableTuple], special_symbol: str = "<tuples>") -> str:
    return TUPLE_SEP.join(serialize_tuple(t, special_symbol) for t in tuples)


def _fit_text(segments: Sequence[str], budget: int) -> str:
    text = normalize_ws(" ".join(segments))
    if word_count(text) <= budget:
        return text
    return truncate_sentences(text, budget)


def assemble_cg_input(segments: Sequence[str], tuples: Sequence[TableTuple],
                      special_symbol: str = "<tuples>", budget: int = 3000) -> str:
    """``text <sym> t1 , t2 , ...`` within ``budget`` words.

    The symbol is always present.  Text is cut at sentence boundaries if it
    alone would overflow; tuples are then added whole while they fit.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    text = _fit_text(segments, budget - 1)
    used = word_count(text) + 1
    kept = []
    for t in tuples:
        s = serialize_tuple(t, special_symbol)
        # the " , " separator is a word of its own
        cost = word_count(s) + (1 if kept else 0)
        if used + cost > budget:
            break
        kept.append(s)
        used += cost
    return " ".join(p for p in (text, special_symbol, TUPLE_SEP.join(kept)) if p)


def parse_cg_input(assembled: str, special_symbol: str = "<tuples>") -> tuple[str, list[tuple[str, ...]]]:
    """Inverse of :func:`assemble_cg_input`: (text, [(row, col, value, date), ...])."""
    head, sym, block = assembled.rpartition(special_symbol)
    if not sym:
        raise ValueError("special symbol not found")
    # drop only the single joining space: an empty first or last field is legal
    block = block[1:] if block.startswith(" ") else block
    rows = []
    if block:
        for chunk in block.split(TUPLE_SEP):
            fields = tuple(chunk.split(FIELD_SEP))
            if len(fields) != 4:
                raise ValueError(f"malformed tuple {chunk!r}")
            rows.append(fields)
    return head.strip(), rows


def gc_shares(ratio: tuple, total_budget: int) -> tuple[int, int]:
    """Word shares for the text and table halves; the text share is floored."""
    rt, rb = ratio
    text = math.floor(total_budget * rt / (rt + rb))
    return text, total_budget - text


def run_gc(text_summary: str, table_summary: str, ratio: tuple, total_budget: int) -> str:
    """Text-first concatenation of both halves, each cut to its share."""
    if total_budget < 1:
        raise ValueError("total_budget must be >= 1")
    t_share, b_share = gc_shares(ratio, total_budget)
    return join_sentences([truncate_sentences(text_summary, t_share),
                           truncate_sentences(table_summary, b_share)])


def template_description(t: TableTuple) -> str:
    """Plain sentence for one tuple, used when no tuple-to-text generator is set."""
    value = t.rounded or t.original
    subject = normalize_ws(f"{t.row_name} {t.col_name}") or "Value"
    date = f" in {t.date}" if t.date and t.date not in t.col_name else ""
    return f"{subject[0].upper()}{subject[1:]}{date} was {value}."
