"""Summarization examples built from parsed documents, and their JSONL form."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from findsum.corpus.targets import find_mda_item, is_heading, is_placeholder, split_mda
from findsum.errors import EmptyTargets
from findsum.ingest.models import ReportDocument, TableTuple, TextSegment
from findsum.ingest.text import DEFAULT_MAX_WORDS, segment_text
from findsum.ingest.tuples import extract_tuples
from findsum.metrics.numbers import extract_numbers, normalize_number

log = logging.getLogger(__name__)

TARGETS = ("roo", "liquidity")


@dataclass
class Example:
    example_id: str
    company_id: str
    input_segments: list[TextSegment]
    input_tuples: list[TableTuple]
    target_roo: str
    target_liquidity: str
    # table_id -> ordinal of the item holding the table
    table_sections: dict[int, int] = field(default_factory=dict)

    def target(self, name: str) -> str:
        if name not in TARGETS:
            raise ValueError(f"unknown target {name!r}; expected one of {TARGETS}")
        return self.target_roo if name == "roo" else self.target_liquidity

    @property
    def input_text(self) -> str:
        return " ".join(s.text for s in self.input_segments)

    @property
    def input_words(self) -> int:
        return sum(s.word_count for s in self.input_segments)

    def to_dict(self) -> dict:
        return {
            "example_id": self.example_id,
            "company_id": self.company_id,
            "input_segments": [s.to_dict() for s in self.input_segments],
            "input_tuples": [t.as_list() for t in self.input_tuples],
            "target_roo": self.target_roo,
            "target_liquidity": self.target_liquidity,
            "table_sections": {str(k): v for k, v in sorted(self.table_sections.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Example":
        return cls(
            d["example_id"], d["company_id"],
            [TextSegment.from_dict(s) for s in d["input_segments"]],
            [TableTuple(*t) for t in d["input_tuples"]],
            d["target_roo"], d["target_liquidity"],
            {int(k): int(v) for k, v in d.get("table_sections", {}).items()},
        )


def build_example(doc: ReportDocument, tuples: Optional[list[TableTuple]] = None,
                  max_words: int = DEFAULT_MAX_WORDS) -> Example:
    """Targets from MD&A; everything outside the two target sections is input.

    Segment ids are renumbered 0..n-1 across the whole example so a part id
    means the same position in every example.
    """
    mda = find_mda_item(doc)
    split = split_mda(mda.text)
    roo, liq = "\n".join(split.roo), "\n".join(split.liquidity)
    if not roo.strip() and not liq.strip():
        raise EmptyTargets(f"{doc.doc_id}: both target sections empty")
    if tuples is None:
        tuples = extract_tuples(doc)

    segments: list[TextSegment] = []
    sections: dict[int, int] = {}
    for ordinal, item in enumerate(doc.items):
        for t in item.tables:
            sections[t.table_id] = ordinal
        if item is mda:
            # a residual made only of headings (e.g. the bare item title) is not input
            prose = [b for b in split.residual if not is_heading(b) and not is_placeholder(b)]
            segs = segment_text("\n".join(split.residual), max_words, item.item_id) if prose else []
        else:
            segs = item.segments
        for s in segs:
            segments.append(TextSegment(len(segments), s.text, s.word_count, item.item_id))
    kept = [t for t in tuples if t.table_id not in split.target_tables]
    if not segments and not kept:
        log.warning("%s: MD&A is the only content; example has empty inputs", doc.doc_id)
    return Example(doc.doc_id, doc.company_id, segments, kept, roo, liq,
                   {k: v for k, v in sections.items() if k not in split.target_tables})


def doc_numbers(example: Example) -> set[str]:
    """Numbers available to a summarizer: input text plus tuple values (both forms)."""
    nums = extract_numbers(example.input_text)
    for t in example.input_tuples:
        for raw in (t.original, t.rounded):
            if raw is not None:
                v = normalize_number(raw)
                if v is not None:
                    nums.add(v)
    return nums


def write_examples(path, examples: Iterable[Example]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(ex.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def read_examples(path) -> list[Example]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [Example.from_dict(json.loads(line)) for line in lines if line.strip()]
