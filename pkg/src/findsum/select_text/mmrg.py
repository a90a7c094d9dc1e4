"""Corpus-level greedy part selection by maximum marginal recall gain.

Every example is a list of parts (text segments, indexed the same way in
every example) plus a target summary.  At each step the part id with the
largest recall gain averaged over all examples is added, and the same ids
are then used for every example.

Gains are computed incrementally: each example keeps the clipped n-gram
counts of its selected text, so scoring a candidate only touches the
candidate's own n-grams plus the few that straddle the join with the
already-selected text.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence

from findsum.errors import ConstraintUnsatisfiable
from findsum.select_text.recall import Orders, as_orders, mean_recall
from findsum.textutil import ngrams, tokenize, word_count

log = logging.getLogger(__name__)

EPS = 1e-12


class SelectionExample(NamedTuple):
    parts: Sequence[str]
    target: str


def _coerce(examples) -> list[SelectionExample]:
    out = []
    for ex in examples:
        if isinstance(ex, SelectionExample):
            out.append(ex)
        elif hasattr(ex, "parts") and hasattr(ex, "target"):
            out.append(SelectionExample(list(ex.parts), ex.target))
        else:
            parts, target = ex
            out.append(SelectionExample(list(parts), target))
    return out


def examples_from_corpus(examples, target: str = "roo") -> list[SelectionExample]:
    """Selection examples from corpus Examples: parts are the input segments."""
    return [SelectionExample([s.text for s in ex.input_segments], ex.target(target)) for ex in examples]


class _ExampleState:
    """Running n-gram counts of one example's selected text, per order."""

    def __init__(self, ex: SelectionExample, orders: tuple[int, ...]):
        self.orders = orders
        self.keep = max(orders) - 1
        tgt = tokenize(ex.target)
        self.part_tokens = [tokenize(p) for p in ex.parts]
        self.target = {n: Counter(ngrams(tgt, n)) for n in orders}
        self.total = {n: sum(c.values()) for n, c in self.target.items()}
        self.cur = {n: Counter() for n in orders}
        # part grams restricted to target vocabulary; others never add recall
        self.part_grams = [
            {n: Counter(g for g in ngrams(toks, n) if g in self.target[n]) for n in orders}
            for toks in self.part_tokens
        ]
        self.tail: list[str] = []
        self.words = 0

    def _added(self, j: int, n: int) -> Counter:
        add = self.part_grams[j][n]
        if n == 1 or not self.tail:
            return add
        # n-grams that cross the join between selected text and part j
        seq = self.tail[-(n - 1):] + self.part_tokens[j][: n - 1]
        bridge = [g for g in ngrams(seq, n) if g in self.target[n]]
        if not bridge:
            return add
        add = add.copy()
        add.update(bridge)
        return add

    def gain(self, j: int) -> float:
        if j >= len(self.part_tokens):
            return 0.0
        total = 0.0
        for n in self.orders:
            if not self.total[n]:
                continue
            tgt, cur = self.target[n], self.cur[n]
            delta = 0
            for g, c in self._added(j, n).items():
                have, cap = cur[g], tgt[g]
                if have < cap:
                    delta += min(have + c, cap) - have
            total += delta / self.total[n]
        return total / len(self.orders)

    def recall(self) -> float:
        total = 0.0
        for n in self.orders:
            if self.total[n]:
                tgt = self.target[n]
                total += sum(min(c, tgt[g]) for g, c in self.cur[n].items()) / self.total[n]
        return total / len(self.orders)

    def apply(self, j: int) -> None:
        if j >= len(self.part_tokens):
            return
        for n in self.orders:
            self.cur[n].update(self._added(j, n))
        toks = self.part_tokens[j]
        if self.keep:
            self.tail = (self.tail + toks)[-self.keep:]
        self.words += len(toks)


class _CorpusState:
    def __init__(self, examples: Sequence[SelectionExample], orders: tuple[int, ...]):
        self.examples = list(examples)
        self.states = [_ExampleState(ex, orders) for ex in self.examples]
        self.n_parts = max((len(ex.parts) for ex in self.examples), default=0)
        self.selected: list[int] = []

    def gain(self, j: int) -> float:
        if not self.states:
            return 0.0
        return sum(st.gain(j) for st in self.states) / len(self.states)

    def ranked(self) -> list[tuple[float, int]]:
        """(gain, id) for unselected ids, best first; near-ties go to the smaller id."""
        pool = [j for j in range(self.n_parts) if j not in set(self.selected)]
        gains = {j: self.gain(j) for j in pool}
        out = []
        while pool:
            best = pool[0]
            for j in pool[1:]:
                if gains[j] > gains[best] + EPS:
                    best = j
            out.append((gains[best], best))
            pool.remove(best)
        return out

    def best(self) -> Optional[tuple[float, int]]:
        chosen = set(self.selected)
        best_j, best_g = None, 0.0
        for j in range(self.n_parts):
            if j in chosen:
                continue
            g = self.gain(j)
            if g > best_g + EPS:
                best_j, best_g = j, g
        return None if best_j is None else (best_g, best_j)

    def apply(self, j: int) -> None:
        self.selected.append(j)
        for st in self.states:
            st.apply(j)

    def mean_words_after(self, j: int) -> float:
        tot = 0
        for st in self.states:
            tot += st.words + (len(st.part_tokens[j]) if j < len(st.part_tokens) else 0)
        return tot / len(self.states) if self.states else 0.0

    def recall(self) -> float:
        return sum(st.recall() for st in self.states) / len(self.states) if self.states else 0.0

    def texts(self) -> list[str]:
        return [selected_text(ex.parts, self.selected) for ex in self.examples]


def selected_text(parts: Sequence[str], ids: Sequence[int]) -> str:
    """Parts concatenated in selection order; ids an example lacks are skipped."""
    return " ".join(" ".join(parts[j].split()) for j in ids if j < len(parts) and parts[j].strip())


def recall_gain(examples, selected_ids: Sequence[int], j: int, n: Orders = 1) -> float:
    """Average over examples of Recall(selected + part j) - Recall(selected)."""
    state = _CorpusState(_coerce(examples), as_orders(n))
    for k in selected_ids:
        state.apply(k)
    return state.gain(j)


def select_part(examples, selected_ids: Sequence[int], n: Orders = 1) -> Optional[int]:
    """Unselected id with the largest positive average gain (smallest id on ties)."""
    state = _CorpusState(_coerce(examples), as_orders(n))
    for k in selected_ids:
        state.apply(k)
    found = state.best()
    return None if found is None else found[1]


@dataclass
class MmrgResult:
    ids: list[int]
    texts: list[str]
    trace: list[float] = field(default_factory=list)

    def __iter__(self) -> Iterator:
        yield self.ids
        yield self.texts


def _run(state: _CorpusState, n_prime: int, budget_words: Optional[int]) -> list[float]:
    trace = []
    while len(state.selected) < n_prime:
        found = state.best()
        if found is None:
            break
        _, j = found
        if budget_words is not None and state.mean_words_after(j) > budget_words:
            break
        state.apply(j)
        trace.append(state.recall())
    return trace


def mmrg(examples, n_prime: int, n: Orders = 1, budget_words: Optional[int] = None) -> MmrgResult:
    """Greedy selection of up to ``n_prime`` part ids shared by all examples.

    Stops early when no part has positive gain, or, with ``budget_words``,
    before the mean selected length would exceed the budget.  ``trace``
    holds the corpus-average recall after every accepted step.
    """
    if n_prime < 0:
        raise ValueError("n_prime must be >= 0")
    state = _CorpusState(_coerce(examples), as_orders(n))
    trace = _run(state, n_prime, budget_words)
    return MmrgResult(list(state.selected), state.texts(), trace)


@dataclass
class SegmentSelection:
    per_summary_segment: list[list[int]]
    budget_words: int
    ngram_order: object = 1

    def to_dict(self) -> dict:
        order = self.ngram_order if isinstance(self.ngram_order, int) else list(self.ngram_order)
        return {"slots": {str(i): ids for i, ids in enumerate(self.per_summary_segment)},
                "ngram_order": order, "budget": self.budget_words}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "SegmentSelection":
        slots = [list(map(int, d["slots"][k])) for k in sorted(d["slots"], key=int)]
        order = d.get("ngram_order", 1)
        return cls(slots, int(d.get("budget", 0)), order if isinstance(order, int) else tuple(order))


def mmrg_multi_segment(parts: Sequence[Sequence[str]], targets_per_slot: Sequence[Sequence[str]],
                       n_prime: int, n: Orders = 1, budget_words: Optional[int] = None) -> SegmentSelection:
    """One MMRG run per summary-segment slot, with pairwise-distinct id sets.

    ``parts[i]`` are example i's parts; ``targets_per_slot[s][i]`` is the
    slot-s target of example i.  When a slot would repeat an earlier slot's
    id set, its final pick is swapped for the next-best positive-gain id that
    makes the set new.
    """
    if not targets_per_slot:
        raise ValueError("need at least one slot")
    orders = as_orders(n)
    slots: list[list[int]] = []
    for s, targets in enumerate(targets_per_slot):
        if len(targets) != len(parts):
            raise ValueError(f"slot {s}: {len(targets)} targets for {len(parts)} examples")
        examples = [SelectionExample(list(p), t) for p, t in zip(parts, targets)]
        state = _CorpusState(examples, orders)
        _run(state, n_prime, budget_words)
        ids = list(state.selected)
        earlier = {frozenset(x) for x in slots}
        if n_prime > 0 and frozenset(ids) in earlier:
            ids = _replace_last(examples, orders, ids, earlier, s)
        slots.append(ids)
    budget = budget_words if budget_words is not None else 0
    return SegmentSelection(slots, budget, orders[0] if len(orders) == 1 else orders)


def _replace_last(examples, orders, ids, earlier, slot) -> list[int]:
    if not ids:
        raise ConstraintUnsatisfiable(f"slot {slot}: no part has positive gain; cannot differ from earlier slots")
    state = _CorpusState(examples, orders)
    for k in ids[:-1]:
        state.apply(k)
    for g, j in state.ranked():
        if j == ids[-1] or g <= EPS:
            continue
        cand = ids[:-1] + [j]
        if frozenset(cand) not in earlier:
            log.debug("slot %d: replaced final pick %d with %d", slot, ids[-1], j)
            return cand
    raise ConstraintUnsatisfiable(f"slot {slot}: no positive-gain alternative yields a distinct id set")


def mmrg_reference_recall(examples, ids: Sequence[int], n: Orders = 1) -> float:
    """Corpus-average recall of a fixed id list, recomputed from strings."""
    exs = _coerce(examples)
    if not exs:
        return 0.0
    return sum(mean_recall(selected_text(ex.parts, ids), ex.target, n) for ex in exs) / len(exs)


def part_words(examples, ids: Sequence[int]) -> float:
    exs = _coerce(examples)
    return sum(word_count(selected_text(ex.parts, ids)) for ex in exs) / len(exs) if exs else 0.0
