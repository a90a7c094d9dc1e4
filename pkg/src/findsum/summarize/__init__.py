"""Pipeline assembly, generator driving and summary combination."""

from findsum.summarize.assemble import (
    assemble_cg_input, gc_shares, parse_cg_input, run_gc, serialize_tuple, serialize_tuples,
    template_description,
)
from findsum.summarize.config import MODES, TARGET_DEFAULTS, PipelineConfig, parse_ratio
from findsum.summarize.generator import GeneratorClient, GeneratorHandle, GenRequest
from findsum.summarize.pipeline import (
    Summary, SummarySegmentPlan, build_plans, describe_tuples, extractive_summarize,
    generate_segments, run_gcg, trigram_block,
)

__all__ = [
    "assemble_cg_input", "gc_shares", "parse_cg_input", "run_gc", "serialize_tuple", "serialize_tuples",
    "template_description", "MODES", "TARGET_DEFAULTS", "PipelineConfig", "parse_ratio",
    "GeneratorClient", "GeneratorHandle", "GenRequest", "Summary", "SummarySegmentPlan", "build_plans",
    "describe_tuples", "extractive_summarize", "generate_segments", "run_gcg", "trigram_block",
]
