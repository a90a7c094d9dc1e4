"""Run configuration: one JSON file, validated before any stage runs."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from findsum.errors import ConfigError

ENV_WORKDIR = "FINDSUM_WORKDIR"


@dataclass
class IngestSection:
    max_words: int = 500


@dataclass
class CorpusSection:
    min_input_words: int = 1000
    max_input_words: int = 60000
    split_seed: int = 0
    split_ratios: list = field(default_factory=lambda: [0.8, 0.1, 0.1])
    # which split trains the selectors and which one is summarized and scored;
    # "all" uses every example
    train_split: str = "train"
    eval_split: str = "test"


@dataclass
class SelectionSection:
    target: str = "roo"
    n_prime: int = 10
    ngram_order: object = 1
    k_segments: Optional[int] = None
    budget_words: Optional[int] = None


@dataclass
class TuplesSection:
    kind: str = "logistic-regression"
    command: Optional[str] = None
    undersample_ratio: float = 10.0
    seed: int = 0
    learning_rate: float = 0.5
    epochs: int = 500
    l2: float = 1e-4
    top_n: int = 100
    keywords: int = 0
    vectors: Optional[str] = None
    eval_n: list = field(default_factory=lambda: [100, 200])


@dataclass
class PipelineSection:
    mode: str = "TEXT_ONLY"
    gc_ratio: object = None
    input_word_budget: int = 3000
    output_word_budget: Optional[int] = None
    beam_size: int = 5
    special_symbol: str = "<tuples>"
    extractive_method: str = "textrank"
    tuple_batch: int = 16
    tuples_per_slot: int = 30
    generator: Optional[str] = None
    generator_timeout: float = 120.0
    max_concurrency: int = 1


@dataclass
class MetricsSection:
    bleu: bool = True


SECTIONS = {
    "ingest": IngestSection,
    "corpus": CorpusSection,
    "selection": SelectionSection,
    "tuples": TuplesSection,
    "pipeline": PipelineSection,
    "metrics": MetricsSection,
}

# fields whose default is None (or a free-form value) and the types they accept
_LOOSE = {
    ("selection", "ngram_order"): (int, list),
    ("selection", "k_segments"): (int,),
    ("selection", "budget_words"): (int,),
    ("tuples", "command"): (str,),
    ("tuples", "vectors"): (str,),
    ("pipeline", "gc_ratio"): (str, list),
    ("pipeline", "output_word_budget"): (int,),
    ("pipeline", "generator"): (str,),
}

# config sections each artifact stage depends on, for its digest
STAGE_SECTIONS = {
    "docs": ("ingest",),
    "corpus": ("ingest", "corpus"),
    "selection": ("ingest", "corpus", "selection"),
    "tuples": ("ingest", "corpus", "selection", "tuples"),
    "summaries": ("ingest", "corpus", "selection", "tuples", "pipeline"),
    "reports": ("ingest", "corpus", "selection", "tuples", "pipeline", "metrics"),
}


def _accepts(types: tuple, value) -> bool:
    if isinstance(value, bool):
        return bool in types
    if float in types and isinstance(value, int):
        return True
    return isinstance(value, types)


def _section(name: str, cls, data) -> object:
    if not isinstance(data, dict):
        raise ConfigError(f"config section {name!r} must be an object")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"unknown key(s) in {name!r}: {', '.join(unknown)}")
    defaults = cls()
    for key, value in data.items():
        if value is None:
            if (name, key) not in _LOOSE:
                raise ConfigError(f"{name}.{key} may not be null")
            continue
        default = getattr(defaults, key)
        types = _LOOSE.get((name, key)) or ((bool,) if isinstance(default, bool) else
                                            (float,) if isinstance(default, float) else (type(default),))
        if not _accepts(types, value):
            raise ConfigError(f"{name}.{key} has type {type(value).__name__}, expected "
                              f"{' or '.join(t.__name__ for t in types)}")
    return cls(**data)


@dataclass
class RunConfig:
    input_dir: Optional[str] = None
    work_dir: str = "work"
    jobs: int = 1
    ingest: IngestSection = field(default_factory=IngestSection)
    corpus: CorpusSection = field(default_factory=CorpusSection)
    selection: SelectionSection = field(default_factory=SelectionSection)
    tuples: TuplesSection = field(default_factory=TuplesSection)
    pipeline: PipelineSection = field(default_factory=PipelineSection)
    metrics: MetricsSection = field(default_factory=MetricsSection)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        top = {"input_dir", "work_dir", "jobs"} | set(SECTIONS)
        unknown = sorted(set(data) - top)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        kw = {name: _section(name, cls_, data.get(name, {})) for name, cls_ in SECTIONS.items()}
        for key, types in (("input_dir", (str,)), ("work_dir", (str,)), ("jobs", (int,))):
            if key in data and data[key] is not None and not _accepts(types, data[key]):
                raise ConfigError(f"{key} has the wrong type")
            if key in data and data[key] is not None:
                kw[key] = data[key]
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        """Cross-field checks, so a bad value fails before any stage runs."""
        from findsum.select_text.recall import as_orders

        c = self.corpus
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if c.min_input_words >= c.max_input_words:
            raise ConfigError("corpus.min_input_words must be below max_input_words")
        if len(c.split_ratios) != 3 or any(not _accepts((float,), r) or r < 0 for r in c.split_ratios) \
                or abs(sum(c.split_ratios) - 1.0) > 1e-9:
            raise ConfigError("corpus.split_ratios must be 3 non-negative numbers summing to 1")
        for key in ("train_split", "eval_split"):
            if getattr(c, key) not in ("train", "val", "test", "all"):
                raise ConfigError(f"corpus.{key} must be train, val, test or all")
        s = self.selection
        if s.target not in ("roo", "liquidity"):
            raise ConfigError("selection.target must be roo or liquidity")
        if s.n_prime < 0:
            raise ConfigError("selection.n_prime must be >= 0")
        try:
            as_orders(s.ngram_order)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"selection.ngram_order: {exc}") from exc
        if s.k_segments is not None and s.k_segments < 1:
            raise ConfigError("selection.k_segments must be >= 1")
        t = self.tuples
        if t.kind not in ("logistic-regression", "external"):
            raise ConfigError("tuples.kind must be logistic-regression or external")
        if t.kind == "external" and not t.command:
            raise ConfigError("tuples.command is required for the external classifier")
        if t.undersample_ratio < 1 or t.top_n < 1 or t.epochs < 0 or t.keywords < 0:
            raise ConfigError("tuples: undersample_ratio and top_n must be >= 1; epochs, keywords >= 0")
        if not all(isinstance(n, int) and n >= 1 for n in t.eval_n):
            raise ConfigError("tuples.eval_n must be positive integers")
        if self.pipeline.max_concurrency < 1 or self.pipeline.generator_timeout <= 0:
            raise ConfigError("pipeline.max_concurrency must be >= 1 and generator_timeout > 0")
        try:
            self.pipeline_config()
        except ValueError as exc:
            raise ConfigError(f"pipeline: {exc}") from exc

    def k_segments(self) -> int:
        from findsum.summarize.config import TARGET_DEFAULTS

        return self.selection.k_segments or TARGET_DEFAULTS[self.selection.target]["k_segments"]

    def pipeline_config(self):
        from findsum.summarize.config import TARGET_DEFAULTS, PipelineConfig

        p = self.pipeline
        out_budget = p.output_word_budget or TARGET_DEFAULTS[self.selection.target]["output_word_budget"]
        return PipelineConfig(mode=p.mode, k_segments=self.k_segments(), gc_ratio=p.gc_ratio,
                              input_word_budget=p.input_word_budget, output_word_budget=out_budget,
                              beam_size=p.beam_size, special_symbol=p.special_symbol,
                              extractive_method=p.extractive_method, tuple_batch=p.tuple_batch,
                              tuples_per_slot=p.tuples_per_slot)

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self, stage: str) -> str:
        """Hash of the config sections that can change ``stage``'s artifacts."""
        d = self.to_dict()
        payload = {name: d[name] for name in STAGE_SECTIONS[stage]}
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]

    @property
    def work(self) -> Path:
        return Path(self.work_dir)


def load_config(path: Optional[str], overrides: Optional[dict] = None) -> RunConfig:
    """File values, then the environment, then command-line ``overrides``."""
    data: dict = {}
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    if os.environ.get(ENV_WORKDIR):
        data["work_dir"] = os.environ[ENV_WORKDIR]
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = data
        *heads, last = dotted.split(".")
        for h in heads:
            node = node.setdefault(h, {})
            if not isinstance(node, dict):
                raise ConfigError(f"config section {h!r} must be an object")
        node[last] = value
    return RunConfig.from_dict(data)
