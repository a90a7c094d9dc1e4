"""HTML table -> header paths + cell grid.

Financial filings lay tables out for print, not for machines: a value column
is often split over three ``<td>`` (currency sign, digits, closing paren),
header cells span several of those, and row hierarchy is expressed by
indentation and label-only "group" rows ("Revenue:").  The steps below undo
that layout:

1. expand ``rowspan``/``colspan`` into a rectangular grid;
2. blank lone currency signs and glue ``)`` / ``%`` cells onto the value on
   their left;
3. split leading header rows from body rows;
4. turn group rows plus indentation into row header paths;
5. drop columns with no body value.

Tables that are really layout (a single row, or no value column at all)
yield ``None`` and the caller treats their text as running prose.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from bs4 import Tag

from findsum.ingest.models import Table
from findsum.metrics.numbers import parse_number
from findsum.textutil import normalize_ws

MAX_SPAN = 64

YEAR_RE = re.compile(r"(?<!\d)(19\d{2}|20\d{2})(?!\d)")
_INDENT_RE = re.compile(r"(padding-left|margin-left|text-indent)\s*:\s*(-?\d+(?:\.\d+)?)", re.IGNORECASE)
_CURRENCY = {"$", "us$", "€", "£", "¥"}
_SUFFIX_RE = re.compile(r"^[)%]+$|^\)%$")
# "—", "-", "–" stand for nil in financial tables
_NIL = {"—", "–", "-", "--", "—%", "-%"}


@dataclass
class _Cell:
    text: str
    origin: bool
    indent: float = 0.0


_EMPTY = _Cell("", False)


def _own(table: Tag, names) -> list[Tag]:
    return [t for t in table.find_all(names) if t.find_parent("table") is table]


def own_rows(table: Tag) -> list[Tag]:
    return _own(table, "tr")


def _span(tag: Tag, attr: str) -> int:
    try:
        v = int(str(tag.get(attr, "1")).strip() or 1)
    except ValueError:
        return 1
    return min(max(v, 1), MAX_SPAN)


def _indent(tag: Tag) -> float:
    total = 0.0
    for node in [tag] + tag.find_all(True):
        for _, v in _INDENT_RE.findall(str(node.get("style", ""))):
            total += float(v)
    return total


def cell_text(tag: Tag) -> str:
    return normalize_ws(tag.get_text(" "))


def read_grid(table: Tag) -> list[list[_Cell]]:
    occupied: dict[tuple[int, int], _Cell] = {}
    rows = own_rows(table)
    width = 0
    for r, tr in enumerate(rows):
        c = 0
        for td in tr.find_all(["td", "th"], recursive=False):
            while (r, c) in occupied:
                c += 1
            rs, cs = _span(td, "rowspan"), _span(td, "colspan")
            text, ind = cell_text(td), _indent(td)
            for dr in range(rs):
                for dc in range(cs):
                    occupied[(r + dr, c + dc)] = _Cell(text, dr == 0 and dc == 0, ind)
            c += cs
        width = max(width, c)
    return [[occupied.get((r, c), _EMPTY) for c in range(width)] for r in range(len(rows))]


def _tidy(grid: list[list[_Cell]]) -> None:
    """Blank currency-only cells and merge ')' / '%' cells leftwards, in place."""
    for row in grid:
        for c, cell in enumerate(row):
            if not cell.origin:
                continue
            t = cell.text
            if t.lower() in _CURRENCY or t in _NIL:
                row[c] = _Cell("", True, cell.indent)
            elif c > 0 and _SUFFIX_RE.match(t.replace(" ", "")):
                for k in range(c - 1, 0, -1):
                    left = row[k]
                    if left.origin and left.text:
                        row[k] = _Cell(left.text + t.replace(" ", ""), True, left.indent)
                        row[c] = _Cell("", True, cell.indent)
                        break
        # strip currency prefixes glued to a value, e.g. "$ 545,700"
        for c, cell in enumerate(row):
            if c and cell.origin and cell.text[:1] in "$€£¥" and parse_number(cell.text) is not None:
                row[c] = _Cell(cell.text[1:].strip(), True, cell.indent)


def _is_value_number(text: str) -> bool:
    return parse_number(text) is not None and not YEAR_RE.fullmatch(text.strip())


def _header_count(grid: list[list[_Cell]]) -> int:
    n = 0
    for row in grid:
        stub = row[0].text if row else ""
        values = [cell.text for cell in row[1:] if cell.text]
        if not stub and not values:
            n += 1
            continue
        if not values:
            break  # label-only row: a group row in the body
        if not stub or not any(_is_value_number(v) for v in values):
            n += 1
            continue
        break
    return n


def _strip_label(text: str) -> str:
    return text.rstrip().rstrip(":").rstrip()


def parse_table(table: Tag) -> Optional[Table]:
    """Structured table, or None when the markup is layout rather than data.

    The returned table has ``table_id == -1``; ids are assigned by the caller
    once it knows which tables survive item detection.
    """
    grid = read_grid(table)
    grid = [row for row in grid if any(c.text for c in row)]
    if len(grid) < 2 or len(grid[0]) < 2:
        return None
    _tidy(grid)
    n_head = _header_count(grid)
    head, body = grid[:n_head], grid[n_head:]
    width = len(grid[0])
    value_cols = [c for c in range(1, width) if any(row[c].origin and row[c].text for row in body
                                                    if any(x.text for x in row[1:]))]
    if not value_cols or not body:
        return None

    title_rows = [row for row in head if len({c.text for c in row if c.text}) == 1 and row[0].text]
    col_headers = []
    for c in value_cols:
        path: list[str] = []
        for row in head:
            if row in title_rows:
                continue
            t = row[c].text
            if t and (not path or path[-1] != t):
                path.append(t)
        col_headers.append(path)

    row_headers, cells = [], []
    stack: list[tuple[float, str]] = []
    for row in body:
        label, indent = _strip_label(row[0].text), row[0].indent
        values = [row[c].text if row[c].origin else "" for c in value_cols]
        if not any(values):
            if label:
                while stack and stack[-1][0] >= indent:
                    stack.pop()
                stack.append((indent, label))
            continue
        while stack and stack[-1][0] > indent:
            stack.pop()
        row_headers.append([s for _, s in stack] + ([label] if label else []))
        cells.append([v or None for v in values])

    detected = None
    caption = _own(table, "caption")
    sources = [cell_text(caption[0])] if caption else []
    sources += [next(c.text for c in row if c.text) for row in title_rows]
    for src in sources:
        m = YEAR_RE.search(src)
        if m:
            detected = m.group(1)
            break
    return Table(-1, row_headers, col_headers, cells, detected)


def layout_blocks(table: Tag) -> list[str]:
    """Row-wise text of a table used for layout, one block per row."""
    out = []
    for row in read_grid(table):
        texts = [c.text for c in row if c.origin and c.text]
        if texts:
            out.append(" ".join(texts))
    return out


def column_year(path: list[str]) -> Optional[str]:
    years = YEAR_RE.findall(" ".join(path))
    return years[-1] if years else None
