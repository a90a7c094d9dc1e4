"""Number extraction and the number precision/recall/coverage/selection scores."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Optional

_CORE_RE = re.compile(r"\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?")
_LEAD = set("(\"'[$€£¥+-")
_TRAIL = set(")\"'],.;:!?%")


def parse_number(raw: str, *, text_context: bool = False) -> Optional[Decimal]:
    """Parse a numeric literal such as ``"$ (2,038)"`` or ``"3.2%"``.

    Commas, currency symbols and a leading ``+`` are ignored; parentheses
    negate.  In ``text_context`` (running prose) parentheses only negate
    accounting-style amounts carrying a currency sign, so "(3.2%)", "(2019)"
    and footnote markers like "(1)" stay positive.
    """
    tok = "".join(raw.split())
    i, paren, sign, cur = 0, False, "", False
    while i < len(tok) and tok[i] in _LEAD:
        c = tok[i]
        if c == "(":
            paren = True
        elif c in "$€£¥":
            cur = True
        elif c in "+-":
            if sign:
                return None
            sign = c
        i += 1
    j, pct, close = len(tok), False, False
    while j > i and tok[j - 1] in _TRAIL:
        c = tok[j - 1]
        pct |= c == "%"
        close |= c == ")"
        j -= 1
    core = tok[i:j]
    if not _CORE_RE.fullmatch(core):
        return None
    value = Decimal(core.replace(",", ""))
    negate = sign == "-" or (paren and close and (not text_context or (cur and not pct)))
    return -value if negate else value


def format_decimal(value: Decimal) -> str:
    if value == value.to_integral_value():
        text = str(int(value))
    else:
        text = format(value.normalize(), "f")
    return "0" if text == "-0" else text


def normalize_number(raw: str) -> Optional[str]:
    """Canonical string for a numeric literal, or None if it is not one.

    ``"(2,038)" -> "-2038"``, ``"545.70" -> "545.7"``, ``"+3" -> "3"``.
    """
    value = parse_number(raw)
    return None if value is None else format_decimal(value)


def extract_numbers(text: str) -> set[str]:
    """Set of normalized numbers standing alone in ``text``.

    Numbers glued to letters or embedded in hyphenated words ("COVID-19",
    "2018-2019", "10-K") are not counted.
    """
    out = set()
    for tok in text.split():
        value = parse_number(tok, text_context=True)
        if value is not None:
            out.add(format_decimal(value))
    return out


@dataclass(frozen=True)
class NumMetrics:
    """Numeric-usage scores for one summary. ``None`` marks an undefined value."""

    np: Optional[float]
    nr: Optional[float]
    nc: Optional[float]
    ns: Optional[float]
    m_hs: int
    m_ds: int
    size_h: int
    size_s: int
    size_d: int

    def as_dict(self) -> dict:
        return {
            "np": self.np, "nr": self.nr, "nc": self.nc, "ns": self.ns,
            "m_hs": self.m_hs, "m_ds": self.m_ds,
            "size_h": self.size_h, "size_s": self.size_s, "size_d": self.size_d,
        }


def harmonic_mean(a, b):
    if a is None or b is None:
        return None
    if a + b == 0:
        return a * 0
    return 2 * a * b / (a + b)


def _f(x: Optional[Fraction]) -> Optional[float]:
    return None if x is None else float(x)


def num_metrics(doc_numbers: Iterable[str], target_numbers: Iterable[str],
                hyp_numbers: Iterable[str]) -> NumMetrics:
    """Number precision, recall, coverage and selection for one summary.

    Computed in exact rationals so the recall-based coverage path and the
    reduced ``M(H,S)/M(D,S)`` form agree bit-for-bit after conversion.
    Coverage is not clipped: a summary can match target numbers that never
    occur in the input, pushing it above 1.
    """
    d, s, h = set(doc_numbers), set(target_numbers), set(hyp_numbers)
    m_hs = len(h & s)
    m_ds = len(d & s)
    np_ = Fraction(m_hs, len(h)) if h else None
    nr = Fraction(m_hs, len(s)) if s else None
    nc = nr * len(s) / m_ds if (nr is not None and m_ds) else None
    ns = harmonic_mean(np_, nc)
    return NumMetrics(_f(np_), _f(nr), _f(nc), _f(ns), m_hs, m_ds, len(h), len(s), len(d))


def number_coverage_direct(doc_numbers, target_numbers, hyp_numbers) -> Optional[float]:
    """M(H,S)/M(D,S) computed without going through recall."""
    d, s, h = set(doc_numbers), set(target_numbers), set(hyp_numbers)
    m_ds = len(d & s)
    return float(Fraction(len(h & s), m_ds)) if m_ds else None


def covered_num_pct(input_numbers: Iterable[str], target_numbers: Iterable[str]) -> Optional[float]:
    """Share (percent) of the target's numbers that occur in the input text."""
    s = set(target_numbers)
    if not s:
        return None
    return 100.0 * len(s & set(input_numbers)) / len(s)


def is_finite_number(text: str) -> bool:
    try:
        return math.isfinite(float(text))
    except ValueError:
        return False
