from findsum.ingest.html import parse_filing
from findsum.ingest.io import read_document, tuples_to_tsv, write_document
from findsum.ingest.models import ReportDocument, ReportItem, Table, TableTuple, TextSegment, placeholder
from findsum.ingest.text import clean_text, segment_text
from findsum.ingest.tuples import extract_tuples, round_cell_value

__all__ = [
    "parse_filing", "read_document", "tuples_to_tsv", "write_document", "ReportDocument",
    "ReportItem", "Table", "TableTuple", "TextSegment", "placeholder", "clean_text",
    "segment_text", "extract_tuples", "round_cell_value",
]
