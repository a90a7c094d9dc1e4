"""Tuple labels and feature vectors (position, name embedding, name keywords)."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from findsum.errors import DimensionMismatch
from findsum.ingest.models import TableTuple
from findsum.metrics.numbers import extract_numbers, normalize_number
from findsum.textutil import tokenize

POSITIONAL = ("row_id", "col_id", "table_id", "section_index")


@dataclass(frozen=True)
class LabeledTuple:
    tuple: TableTuple
    label: bool

    def to_dict(self) -> dict:
        return {"tuple": self.tuple.as_list(), "label": int(self.label)}

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledTuple":
        return cls(TableTuple(*d["tuple"]), bool(d["label"]))


def tuple_numbers(t: TableTuple) -> set[str]:
    """Normalized absolute values of a tuple's original and rounded forms."""
    out = set()
    for raw in (t.original, t.rounded):
        if raw is None:
            continue
        v = normalize_number(raw)
        if v is not None:
            out.add(v.lstrip("-"))
    return out


def label_tuples(tuples: Iterable[TableTuple], target_summary: str) -> list[LabeledTuple]:
    """Salient iff the tuple's original or rounded value appears in the summary.

    Signs are ignored: filings write a decrease "(2,038)" in tables and
    "decreased $2.0 million" in prose.
    """
    nums = {n.lstrip("-") for n in extract_numbers(target_summary)}
    return [LabeledTuple(t, bool(tuple_numbers(t) & nums)) for t in tuples]


def load_vectors(path) -> dict[str, np.ndarray]:
    """Plain-text word vectors: ``token v1 ... vd`` per line, one d for all lines.

    A leading ``<count> <dim>`` header line (word2vec text format) is skipped.
    """
    table: dict[str, np.ndarray] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if n == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            try:
                vec = np.array([float(x) for x in parts[1:]])
            except ValueError as exc:
                raise DimensionMismatch(f"{path}:{n}: non-numeric vector component") from exc
            if dim is None:
                dim = len(vec)
            if len(vec) != dim or dim == 0:
                raise DimensionMismatch(f"{path}:{n}: expected {dim} components, got {len(vec)}")
            table[parts[0]] = vec
    return table


def vector_dim(vectors: Optional[dict]) -> int:
    if not vectors:
        return 0
    dims = {len(v) for v in vectors.values()}
    if len(dims) != 1:
        raise DimensionMismatch(f"vector table has mixed dimensions {sorted(dims)}")
    return dims.pop()


def name_phrases(t: TableTuple) -> set[str]:
    return {p.strip().lower() for p in (t.row_name.split(" & ") + t.col_name.split(" & ")) if p.strip()}


def fit_keywords(labeled: Iterable[LabeledTuple], k: int) -> list[str]:
    """The ``k`` header phrases most frequent among salient tuples (ties alphabetical)."""
    counts = Counter(p for lt in labeled if lt.label for p in name_phrases(lt.tuple))
    return [p for p, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]]


@dataclass
class FeatureConfig:
    positional: bool = True
    embedding: bool = False
    keywords: list[str] = field(default_factory=list)
    embedding_dim: int = 0

    def length(self) -> int:
        n = 2 * len(POSITIONAL) if self.positional else 0
        return n + (self.embedding_dim if self.embedding else 0) + len(self.keywords)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        return cls(bool(d.get("positional", True)), bool(d.get("embedding", False)),
                   list(d.get("keywords", [])), int(d.get("embedding_dim", 0)))


@dataclass(frozen=True)
class DocContext:
    """Per-document maxima used to normalize positions, plus the table -> item map."""
    max_row: int
    max_col: int
    max_table: int
    max_section: int
    table_sections: dict

    @classmethod
    def from_tuples(cls, tuples: Sequence[TableTuple], table_sections: Optional[dict] = None) -> "DocContext":
        sections = dict(table_sections or {})
        return cls(
            max((t.row_id for t in tuples), default=0),
            max((t.col_id for t in tuples), default=0),
            max((t.table_id for t in tuples), default=0),
            max((sections.get(t.table_id, 0) for t in tuples), default=0),
            sections,
        )

    @classmethod
    def from_example(cls, example) -> "DocContext":
        return cls.from_tuples(example.input_tuples, example.table_sections)


def _norm(v: int, m: int) -> float:
    return v / m if m > 0 else 0.0


def featurize(t: TableTuple, ctx: DocContext, vectors: Optional[dict], config: FeatureConfig) -> np.ndarray:
    """Fixed-length feature vector for one tuple."""
    out: list[float] = []
    if config.positional:
        sec = ctx.table_sections.get(t.table_id, 0)
        raw = (t.row_id, t.col_id, t.table_id, sec)
        maxima = (ctx.max_row, ctx.max_col, ctx.max_table, ctx.max_section)
        out.extend(float(v) for v in raw)
        out.extend(_norm(v, m) for v, m in zip(raw, maxima))
    if config.embedding:
        dim = config.embedding_dim
        if vectors is None:
            raise DimensionMismatch("embedding features enabled but no vector table loaded")
        if vector_dim(vectors) != dim:
            raise DimensionMismatch(f"vector table has dimension {vector_dim(vectors)}, config expects {dim}")
        toks = tokenize(t.row_name + " " + t.col_name)
        acc = np.zeros(dim)
        for tok in toks:
            vec = vectors.get(tok)
            if vec is not None:
                acc += vec
        out.extend((acc / len(toks)).tolist() if toks else [0.0] * dim)
    if config.keywords:
        have = name_phrases(t)
        out.extend(1.0 if k in have else 0.0 for k in config.keywords)
    return np.asarray(out, dtype=float)


def featurize_all(tuples: Sequence[TableTuple], ctx: DocContext, vectors: Optional[dict],
                  config: FeatureConfig) -> np.ndarray:
    if not tuples:
        return np.zeros((0, config.length()))
    return np.vstack([featurize(t, ctx, vectors, config) for t in tuples])


def read_labeled(path) -> list[LabeledTuple]:
    import json

    return [LabeledTuple.from_dict(json.loads(line))
            for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
