"""Batch scoring into a per-example + aggregate report, serializable as JSON or CSV.

CSV columns (fixed order): ``example_id`` followed by :data:`SCORE_COLUMNS`.
The last two rows are ``__mean__`` (macro average over defined values) and
``__undefined__`` (how many examples had an undefined value in that column).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from findsum.metrics.numbers import extract_numbers, num_metrics
from findsum.metrics.overlap import bleu4_tokens, rouge_l_tokens, rouge_n_tokens
from findsum.textutil import tokenize

SCORE_COLUMNS = ("r1", "r2", "rl", "bleu", "np", "nr", "nc", "ns",
                 "m_hs", "m_ds", "size_h", "size_s", "size_d")
MEAN_ROW = "__mean__"
UNDEFINED_ROW = "__undefined__"


@dataclass
class ScoreItem:
    example_id: str
    hypothesis: str
    reference: str
    doc_numbers: set = field(default_factory=set)


def score_one(item: ScoreItem, *, with_bleu: bool = True) -> dict:
    h, r = tokenize(item.hypothesis), tokenize(item.reference)
    nm = num_metrics(item.doc_numbers, extract_numbers(item.reference),
                     extract_numbers(item.hypothesis))
    row = {
        "example_id": item.example_id,
        "r1": rouge_n_tokens(h, r, 1),
        "r2": rouge_n_tokens(h, r, 2),
        "rl": rouge_l_tokens(h, r),
        "bleu": bleu4_tokens(h, r) if with_bleu else None,
    }
    row.update(nm.as_dict())
    return row


@dataclass
class MetricReport:
    rows: list[dict]
    aggregate: dict
    undefined: dict

    @classmethod
    def from_rows(cls, rows: Sequence[dict]) -> "MetricReport":
        agg, undef = {}, {}
        for col in SCORE_COLUMNS:
            vals = [r[col] for r in rows if r.get(col) is not None]
            undef[col] = len(rows) - len(vals)
            agg[col] = sum(vals) / len(vals) if vals else None
        return cls(list(rows), agg, undef)

    def to_json(self, extra: Optional[dict] = None) -> str:
        payload = dict(extra or {})
        payload.update({"columns": list(SCORE_COLUMNS), "examples": self.rows,
                        "aggregate": self.aggregate, "undefined_counts": self.undefined,
                        "n_examples": len(self.rows)})
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("example_id",) + SCORE_COLUMNS)
        for r in self.rows:
            w.writerow([r["example_id"]] + [_fmt(r.get(c)) for c in SCORE_COLUMNS])
        w.writerow([MEAN_ROW] + [_fmt(self.aggregate[c]) for c in SCORE_COLUMNS])
        w.writerow([UNDEFINED_ROW] + [self.undefined[c] for c in SCORE_COLUMNS])
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return f"{v:.6f}"


def score_batch(items: Iterable[ScoreItem], *, with_bleu: bool = True, jobs: int = 1) -> MetricReport:
    items = list(items)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda it: score_one(it, with_bleu=with_bleu), items))
    else:
        rows = [score_one(it, with_bleu=with_bleu) for it in items]
    return MetricReport.from_rows(rows)
