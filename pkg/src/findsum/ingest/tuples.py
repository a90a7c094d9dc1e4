"""Table cells -> 7-field tuples with combined original & rounded values."""

from __future__ import annotations

import logging
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Optional

from findsum.ingest.models import ReportDocument, Table, TableTuple
from findsum.ingest.tables import column_year
from findsum.metrics.numbers import format_decimal, parse_number

log = logging.getLogger(__name__)

NAME_SEP = " & "
DEFAULT_DIVISOR = 1000
_TENTH = Decimal("0.1")


def round_cell_value(raw: str, divisor=DEFAULT_DIVISOR) -> Optional[str]:
    """Scaled, 1-decimal rounded form of a numeric cell; None if not numeric.

    ``"15,700" -> "15.7"``, ``"2,038" -> "2"``, ``"(2,038)" -> "-2"``.
    Rounding is half away from zero on exact decimals, so the result does not
    depend on float representation or locale.

    Percentages are ratios rather than amounts, so they are rounded without
    scaling: ``"3.25%" -> "3.3"``.
    """
    if raw is None:
        return None
    value = parse_number(raw)
    if value is None:
        return None
    divisor = Decimal(str(divisor))
    if divisor <= 0:
        raise ValueError("divisor must be positive")
    if "%" not in raw:
        value = value / divisor
    return format_decimal(value.quantize(_TENTH, rounding=ROUND_HALF_UP))


def combined_value(raw: str, divisor=DEFAULT_DIVISOR) -> str:
    rounded = round_cell_value(raw, divisor)
    if rounded is None:
        return raw.replace(NAME_SEP, " and ")
    return f"{raw}{NAME_SEP}{rounded}"


def table_tuples(table: Table, fallback_date: str = "", divisor=DEFAULT_DIVISOR) -> list[TableTuple]:
    out = []
    col_names = [NAME_SEP.join(p) for p in table.col_headers]
    col_dates = [column_year(p) for p in table.col_headers]
    for r, row in enumerate(table.cells):
        row_name = NAME_SEP.join(table.row_headers[r])
        for c, raw in enumerate(row):
            if raw is None or not raw.strip():
                continue
            date = col_dates[c] or table.detected_date or fallback_date or ""
            out.append(TableTuple(row_name, col_names[c], combined_value(raw, divisor),
                                  date, table.table_id, r, c))
    return out


def extract_tuples(doc: ReportDocument, divisor=DEFAULT_DIVISOR) -> list[TableTuple]:
    """One tuple per non-empty data cell, in document, row, column order.

    The date is the owning column's header year, else the table's detected
    date, else the filing date.
    """
    out: list[TableTuple] = []
    for table in doc.tables():
        out.extend(table_tuples(table, doc.filing_date or "", divisor))
    unnamed = count_unnamed(out)
    if unnamed:
        log.warning("%s: %d tuples without row or column name", doc.doc_id, unnamed)
    return out


def count_unnamed(tuples: Iterable[TableTuple]) -> int:
    return sum(1 for t in tuples if not t.row_name or not t.col_name)
