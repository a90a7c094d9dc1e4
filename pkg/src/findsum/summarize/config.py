"""Pipeline configuration for the text+table summary generators."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

MODES = ("GC", "CG", "GCG", "TEXT_ONLY")

# summary-segment slots and per-slot output budgets, by target section
TARGET_DEFAULTS = {
    "roo": {"k_segments": 2, "output_word_budget": 350},
    "liquidity": {"k_segments": 3, "output_word_budget": 360},
}


def parse_ratio(value) -> tuple[float, float]:
    """``"3:1"``, ``[3, 1]`` or ``(3, 1)`` -> ``(3.0, 1.0)``; both parts positive."""
    if isinstance(value, str):
        parts = value.split(":")
    else:
        parts = list(value)
    if len(parts) != 2:
        raise ValueError(f"ratio must have two parts, got {value!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"ratio parts must be numbers, got {value!r}") from exc
    if a <= 0 or b <= 0:
        raise ValueError(f"ratio parts must be positive, got {value!r}")
    return a, b


@dataclass
class PipelineConfig:
    mode: str = "TEXT_ONLY"
    k_segments: int = 2
    gc_ratio: Optional[tuple] = None
    input_word_budget: int = 3000
    output_word_budget: int = 350
    beam_size: int = 5
    special_symbol: str = "<tuples>"
    extractive_method: str = "textrank"
    tuple_batch: int = 16
    tuples_per_slot: int = 30
    hints: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.k_segments < 1:
            raise ValueError("k_segments must be >= 1")
        if self.gc_ratio is not None:
            if self.mode != "GC":
                raise ValueError("gc_ratio only applies to GC mode")
            self.gc_ratio = parse_ratio(self.gc_ratio)
        elif self.mode == "GC":
            self.gc_ratio = (1.0, 1.0)
        for name in ("input_word_budget", "output_word_budget", "beam_size", "tuple_batch"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.tuples_per_slot < 0:
            raise ValueError("tuples_per_slot must be >= 0")
        if not self.special_symbol.strip() or len(self.special_symbol.split()) != 1:
            raise ValueError("special_symbol must be a single non-blank token")
        if self.extractive_method not in ("textrank", "lexrank"):
            raise ValueError(f"unknown extractive method {self.extractive_method!r}")

    @classmethod
    def for_target(cls, target: str, **overrides) -> "PipelineConfig":
        base = dict(TARGET_DEFAULTS.get(target, {}))
        base.update(overrides)
        return cls(**base)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gc_ratio"] = list(self.gc_ratio) if self.gc_ratio else None
        return d
