"""Document model for a parsed filing: items, text segments, tables and tuples."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

PLACEHOLDER_FMT = "[TABLE_{}]"


def placeholder(table_id: int) -> str:
    return PLACEHOLDER_FMT.format(table_id)


@dataclass
class TextSegment:
    segment_id: int
    text: str
    word_count: int
    # which item the segment came from; empty for free-standing text
    item_id: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TextSegment":
        return cls(int(d["segment_id"]), d["text"], int(d["word_count"]), d.get("item_id", ""))


@dataclass
class Table:
    table_id: int
    row_headers: list[list[str]]
    col_headers: list[list[str]]
    cells: list[list[Optional[str]]]
    detected_date: Optional[str] = None

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_headers), len(self.col_headers)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Table":
        return cls(int(d["table_id"]), [list(p) for p in d["row_headers"]],
                   [list(p) for p in d["col_headers"]], [list(r) for r in d["cells"]],
                   d.get("detected_date"))


@dataclass
class ReportItem:
    item_id: str
    text: str
    segments: list[TextSegment] = field(default_factory=list)
    tables: list[Table] = field(default_factory=list)

    @property
    def words(self) -> int:
        return sum(s.word_count for s in self.segments)


@dataclass
class ReportDocument:
    doc_id: str
    company_id: str
    filing_date: Optional[str]
    items: list[ReportItem] = field(default_factory=list)

    def item(self, item_id: str) -> Optional[ReportItem]:
        for it in self.items:
            if it.item_id == item_id:
                return it
        return None

    def tables(self) -> list[Table]:
        return [t for it in self.items for t in it.tables]


@dataclass(frozen=True)
class TableTuple:
    row_name: str
    col_name: str
    cell_value: str
    date: str
    table_id: int
    row_id: int
    col_id: int

    def as_list(self) -> list:
        return [self.row_name, self.col_name, self.cell_value, self.date,
                self.table_id, self.row_id, self.col_id]

    @property
    def key(self) -> tuple[int, int, int]:
        return self.table_id, self.row_id, self.col_id

    @property
    def original(self) -> str:
        return self.cell_value.split(" & ", 1)[0]

    @property
    def rounded(self) -> Optional[str]:
        parts = self.cell_value.split(" & ", 1)
        return parts[1] if len(parts) == 2 else None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TableTuple":
        return cls(d["row_name"], d["col_name"], d["cell_value"], d.get("date", ""),
                   int(d["table_id"]), int(d["row_id"]), int(d["col_id"]))
