"""Divide-and-conquer summary generation over per-slot plans.

Each summary segment (slot) gets its own plan: the text parts chosen for
that slot plus the top-ranked tuples, assembled according to the pipeline
mode.  Slots are generated independently and recombined by slot index.
"""

from __future__ import annotations

import logging
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from findsum.errors import GeneratorFailure
from findsum.ingest.models import TableTuple
from findsum.select_text.graph import lexrank_extract, textrank_extract
from findsum.select_text.mmrg import SegmentSelection
from findsum.summarize.assemble import (
    assemble_cg_input, run_gc, serialize_tuples, template_description,
)
from findsum.summarize.config import PipelineConfig
from findsum.summarize.generator import GeneratorClient, GenRequest
from findsum.textutil import join_sentences, ngrams, normalize_ws, split_sentences, tokenize, truncate_sentences

log = logging.getLogger(__name__)


@dataclass
class SummarySegmentPlan:
    slot: int
    segment_ids: list[int]
    segments: list[str]
    tuples: list[TableTuple]
    input_text: str
    table_input: str = ""

    def to_dict(self) -> dict:
        return {"slot": self.slot, "segment_ids": self.segment_ids, "segments": self.segments,
                "tuples": [t.as_list() for t in self.tuples], "input_text": self.input_text,
                "table_input": self.table_input}


@dataclass
class Summary:
    segments: list[str]
    failed_slots: list[int] = field(default_factory=list)

    @property
    def combined(self) -> str:
        return join_sentences(self.segments)

    def to_dict(self) -> dict:
        d = {"segments": list(self.segments), "combined": self.combined}
        if self.failed_slots:
            d["failed_slots"] = list(self.failed_slots)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Summary":
        return cls(list(d["segments"]), list(d.get("failed_slots", [])))


def _words(sentence: str) -> list[str]:
    return [w for w in (t.strip(string.punctuation) for t in tokenize(sentence)) if w]


def trigram_block(text: str) -> str:
    """Drop every sentence that repeats a trigram emitted by an earlier sentence.

    Trigrams are over lowercased words with edge punctuation removed, so
    "margin fell." and "margin fell again" share a trigram.

    Line breaks in the input are kept, so the result splits back into the
    same sentences (which makes the operation idempotent).
    """
    seen: set = set()
    lines = []
    for line in text.splitlines():
        kept = []
        for sent in split_sentences(line):
            grams = set(ngrams(_words(sent), 3))
            if grams & seen:
                continue
            seen |= grams
            kept.append(sent)
        if kept:
            lines.append(" ".join(kept))
    return "\n".join(lines)


def extractive_summarize(segments: Sequence[str], budget: int, method: str = "textrank") -> str:
    if budget < 1:
        raise ValueError("budget must be >= 1")
    sentences = split_sentences("\n".join(segments))
    if method == "textrank":
        return textrank_extract(sentences, budget).text
    if method == "lexrank":
        return lexrank_extract(sentences, budget).text
    raise ValueError(f"unknown extractive method {method!r}")


def describe_tuples(tuples: Sequence[TableTuple], generator: Optional[GeneratorClient],
                    config: PipelineConfig, slot: Optional[int] = None) -> list[str]:
    """One description per batch of tuples (template sentences without a generator)."""
    if not tuples:
        return []
    if generator is None:
        return [template_description(t) for t in tuples]
    size = config.tuple_batch
    reqs = [GenRequest(k, "tuple2text", serialize_tuples(tuples[i:i + size], config.special_symbol),
                       config.beam_size, config.output_word_budget)
            for k, i in enumerate(range(0, len(tuples), size))]
    outputs, failures = generator.call_many(reqs)
    if failures:
        k, exc = min(failures.items())
        raise GeneratorFailure(f"tuple2text batch {k}: {exc}", slot=slot)
    return [normalize_ws(o) for o in outputs if o and o.strip()]


def run_gcg(tuples: Sequence[TableTuple], generator: Optional[GeneratorClient], text: str,
            budget: int, config: Optional[PipelineConfig] = None, slot: Optional[int] = None) -> str:
    """Input text followed by tuple descriptions, cut at a sentence boundary."""
    config = config or PipelineConfig(mode="GCG")
    descriptions = describe_tuples(list(tuples), generator, config, slot)
    if not descriptions:
        return text
    return truncate_sentences(join_sentences([normalize_ws(text)] + descriptions), budget)


def build_plans(parts: Sequence[str], selection: SegmentSelection, tuples: Sequence[TableTuple],
                config: PipelineConfig, generator: Optional[GeneratorClient] = None) -> list[SummarySegmentPlan]:
    """Per-slot generator inputs for one example.

    ``parts`` are the example's input segments, ``tuples`` its ranked tuples
    (best first).  Every slot sees the same top ``tuples_per_slot`` tuples.
    """
    slots = selection.per_summary_segment
    if len(slots) != config.k_segments:
        raise ValueError(f"selection has {len(slots)} slots, config expects {config.k_segments}")
    top = list(tuples)[: config.tuples_per_slot]
    plans = []
    for s, ids in enumerate(slots):
        segs = [parts[j] for j in ids if j < len(parts) and parts[j].strip()]
        budget = config.input_word_budget
        table_input = ""
        if config.mode == "CG":
            text = assemble_cg_input(segs, top, config.special_symbol, budget)
        elif config.mode == "GCG":
            text = run_gcg(top, generator, " ".join(segs), budget, config, slot=s)
        else:
            text = truncate_sentences(normalize_ws(" ".join(segs)), budget)
            if config.mode == "GC":
                table_input = assemble_cg_input([], top, config.special_symbol, budget)
        plans.append(SummarySegmentPlan(s, list(ids), segs, top if config.mode != "TEXT_ONLY" else [],
                                        text, table_input))
    return plans


def _fallback(plan: SummarySegmentPlan, config: PipelineConfig) -> str:
    budget = config.output_word_budget
    if config.mode == "GC":
        text = extractive_summarize(plan.segments, budget, config.extractive_method) if plan.segments else ""
        table = " ".join(template_description(t) for t in plan.tuples)
        return run_gc(text, table, config.gc_ratio, budget)
    if config.mode == "GCG":
        return extractive_summarize([plan.input_text], budget, config.extractive_method) if plan.input_text else ""
    return extractive_summarize(plan.segments, budget, config.extractive_method) if plan.segments else ""


def generate_segments(plans: Sequence[SummarySegmentPlan], generator: Optional[GeneratorClient],
                      config: PipelineConfig, jobs: int = 1) -> Summary:
    """One generation per slot, trigram-blocked and recombined in slot order.

    Failed slots are left empty; if any slot fails a :class:`GeneratorFailure`
    is raised whose ``partial`` is the Summary of the slots that completed.
    """
    if not plans:
        raise ValueError("plans must be nonempty")
    order = sorted(plans, key=lambda p: p.slot)
    if generator is None:
        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            outs = list(pool.map(lambda p: _fallback(p, config), order))
        return Summary([trigram_block(o) for o in outs])

    hint = dict(beam_size=config.beam_size, max_len=config.output_word_budget)
    reqs = [GenRequest(p.slot, "summarize", p.input_text, **hint) for p in order]
    if config.mode == "GC":
        # table halves get ids after all text halves so ids stay unique
        reqs += [GenRequest(len(order) + p.slot, "summarize", p.table_input, **hint) for p in order]
    outputs, failures = generator.call_many(reqs)
    segments, failed = [], []
    for k, p in enumerate(order):
        bad = k in failures or (config.mode == "GC" and len(order) + k in failures)
        if bad:
            failed.append(p.slot)
            segments.append("")
            continue
        out = outputs[k]
        if config.mode == "GC":
            out = run_gc(out, outputs[len(order) + k], config.gc_ratio, config.output_word_budget)
        segments.append(trigram_block(out))
    summary = Summary(segments, failed)
    if failed:
        k = min(i for i in failures)
        raise GeneratorFailure(f"slot {failed[0]}: {failures[k]}", slot=failed[0], partial=summary)
    return summary
