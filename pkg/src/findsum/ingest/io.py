"""JSON-lines storage of parsed documents and TSV export of tuples.

One file per document.  Each line is an object with a ``kind`` field:
``document`` (first line), then per item an ``item`` line followed by its
``segment`` and ``table`` lines, and finally every ``tuple``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Optional

from findsum.ingest.models import ReportDocument, ReportItem, Table, TableTuple, TextSegment

TSV_FIELDS = ("row_name", "col_name", "cell_value", "date", "table_id", "row_id", "col_id")


def document_records(doc: ReportDocument, tuples: Optional[Iterable[TableTuple]] = None) -> list[dict]:
    recs = [{"kind": "document", "doc_id": doc.doc_id, "company_id": doc.company_id,
             "filing_date": doc.filing_date}]
    for it in doc.items:
        recs.append({"kind": "item", "item_id": it.item_id, "text": it.text})
        for seg in it.segments:
            recs.append({"kind": "segment", **seg.to_dict(), "item_id": it.item_id})
        for t in it.tables:
            recs.append({"kind": "table", "item_id": it.item_id, **t.to_dict()})
    for tup in tuples or ():
        recs.append({"kind": "tuple", **tup.to_dict()})
    return recs


def dumps_document(doc: ReportDocument, tuples=None) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n"
                   for r in document_records(doc, tuples))


def write_document(path, doc: ReportDocument, tuples=None) -> None:
    Path(path).write_text(dumps_document(doc, tuples), encoding="utf-8")


def loads_document(text: str) -> tuple[ReportDocument, list[TableTuple]]:
    doc: Optional[ReportDocument] = None
    items: dict[str, ReportItem] = {}
    tuples: list[TableTuple] = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        kind = rec.pop("kind", None)
        if kind == "document":
            doc = ReportDocument(rec["doc_id"], rec["company_id"], rec.get("filing_date"))
        elif kind == "item":
            if doc is None:
                raise ValueError(f"line {n}: item before document record")
            it = ReportItem(rec["item_id"], rec["text"])
            items[it.item_id] = it
            doc.items.append(it)
        elif kind == "segment":
            items[rec["item_id"]].segments.append(TextSegment.from_dict(rec))
        elif kind == "table":
            items[rec["item_id"]].tables.append(Table.from_dict(rec))
        elif kind == "tuple":
            tuples.append(TableTuple.from_dict(rec))
        else:
            raise ValueError(f"line {n}: unknown record kind {kind!r}")
    if doc is None:
        raise ValueError("no document record")
    return doc, tuples


def read_document(path) -> tuple[ReportDocument, list[TableTuple]]:
    return loads_document(Path(path).read_text(encoding="utf-8"))


def _tsv_field(v) -> str:
    return str(v).replace("\t", " ").replace("\n", " ").replace("\r", " ")


def tuples_to_tsv(tuples: Iterable[TableTuple]) -> str:
    return "".join("\t".join(_tsv_field(v) for v in t.as_list()) + "\n" for t in tuples)


def tuples_from_tsv(text: str) -> list[TableTuple]:
    out = []
    for line in text.splitlines():
        if not line:
            continue
        f = line.split("\t")
        if len(f) != 7:
            raise ValueError(f"expected 7 columns, got {len(f)}")
        out.append(TableTuple(f[0], f[1], f[2], f[3], int(f[4]), int(f[5]), int(f[6])))
    return out
