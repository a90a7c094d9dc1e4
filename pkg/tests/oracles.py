"""Slow, obviously-correct reference computations used to check the fast paths.

Nothing here imports from ``findsum``; each oracle is written from the
definition so agreement is meaningful.
"""

from __future__ import annotations

import math


def grams(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def count(items):
    out = {}
    for it in items:
        out[it] = out.get(it, 0) + 1
    return out


def lcs_dp(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def f1(overlap, hyp_len, ref_len):
    if overlap == 0:
        return 0.0
    p, r = overlap / hyp_len, overlap / ref_len
    return 2 * p * r / (p + r)


def rouge_l_oracle(hyp, ref):
    return f1(lcs_dp(hyp, ref), len(hyp), len(ref))


def clipped_matches(hyp, ref, n):
    hc, rc = count(grams(hyp, n)), count(grams(ref, n))
    return sum(min(c, rc.get(g, 0)) for g, c in hc.items()), max(len(hyp) - n + 1, 0)


def bleu4_oracle(hyp, ref):
    precisions = []
    for n in (1, 2, 3, 4):
        m, total = clipped_matches(hyp, ref, n)
        if total == 0 or m == 0:
            return 0.0
        precisions.append(m / total)
    geo = math.exp(sum(math.log(p) for p in precisions) / 4)
    bp = 1.0 if len(hyp) > len(ref) else math.exp(1 - len(ref) / len(hyp))
    return bp * geo


def longest_at(summary, source, i):
    best = 0
    for j in range(len(source)):
        k = 0
        while i + k < len(summary) and j + k < len(source) and summary[i + k] == source[j + k]:
            k += 1
        best = max(best, k)
    return best


def fragments_oracle(summary, source):
    out, i = [], 0
    while i < len(summary):
        k = longest_at(summary, source, i)
        if k:
            out.append(k)
        i += max(k, 1)
    return out


def num_metrics_oracle(d, s, h):
    """Eqs. for NP/NR/NC/NS evaluated literally on python sets."""
    m_hs = len([x for x in h if x in s])
    m_ds = len([x for x in d if x in s])
    np_ = m_hs / len(h) if len(h) else None
    nr = m_hs / len(s) if len(s) else None
    nc = (nr * len(s)) / m_ds if (nr is not None and m_ds) else None
    if np_ is None or nc is None:
        ns = None
    elif np_ + nc == 0:
        ns = 0.0
    else:
        ns = 2 * np_ * nc / (np_ + nc)
    return np_, nr, nc, ns


def recall_oracle(candidate, target, n):
    """Clipped n-gram recall of whitespace-token strings, computed from scratch."""
    c = count(grams(candidate.lower().split(), n))
    t = count(grams(target.lower().split(), n))
    total = sum(t.values())
    if total == 0:
        return 0.0
    return sum(min(v, c.get(g, 0)) for g, v in t.items()) / total


def mmrg_oracle(parts, targets, n_prime, orders=(1,)):
    """Exhaustive greedy: every step recomputes every candidate's gain from strings."""

    def rec(text, target):
        return sum(recall_oracle(text, target, n) for n in orders) / len(orders)

    m = len(parts)
    n_parts = max(len(p) for p in parts) if parts else 0
    chosen, texts, trace = [], [""] * m, []
    while len(chosen) < n_prime:
        best_j, best_gain = None, 0.0
        for j in range(n_parts):
            if j in chosen:
                continue
            total = 0.0
            for i in range(m):
                if j >= len(parts[i]):
                    continue
                cat = (texts[i] + " " + parts[i][j]).strip()
                total += rec(cat, targets[i]) - rec(texts[i], targets[i])
            gain = total / m
            if gain > best_gain + 1e-12:
                best_j, best_gain = j, gain
        if best_j is None:
            break
        chosen.append(best_j)
        texts = [(texts[i] + " " + parts[i][best_j]).strip() if best_j < len(parts[i]) else texts[i]
                 for i in range(m)]
        trace.append(sum(rec(texts[i], targets[i]) for i in range(m)) / m)
    return chosen, trace


def power_iteration(matrix, damping=0.85, iters=10000, tol=1e-15):
    """PageRank by plain power iteration on a row-stochastic transition built from weights."""
    n = len(matrix)
    trans = []
    for row in matrix:
        s = sum(row)
        trans.append([w / s for w in row] if s > 0 else [1.0 / n] * n)
    pr = [1.0 / n] * n
    for _ in range(iters):
        new = [(1 - damping) / n + damping * sum(pr[j] * trans[j][i] for j in range(n))
               for i in range(n)]
        if sum(abs(a - b) for a, b in zip(new, pr)) < tol:
            return new
        pr = new
    return pr


def stats_oracle(doc_tokens, summary_tokens):
    """Per-example Table-1/2 style measures by direct recount.

    Sentences are counted as tokens ending in '.', numbers as all-digit
    tokens; intended for synthetic corpora built to have exactly that shape.
    """
    nums_s = {t for t in summary_tokens if t.isdigit()}
    nums_d = {t for t in doc_tokens if t.isdigit()}
    frags = fragments_oracle(summary_tokens, doc_tokens)
    n = len(summary_tokens)
    novel = []
    for k in (1, 2, 3, 4):
        sg, dg = set(grams(summary_tokens, k)), set(grams(doc_tokens, k))
        novel.append(100.0 * len(sg - dg) / len(sg) if sg else 0.0)
    return {
        "doc_words": len(doc_tokens),
        "doc_sents": sum(1 for t in doc_tokens if t.endswith(".")),
        "sum_words": n,
        "sum_sents": sum(1 for t in summary_tokens if t.endswith(".")),
        "sum_nums": len(nums_s),
        "covered": 100.0 * len(nums_s & nums_d) / len(nums_s) if nums_s else None,
        "coverage": sum(frags) / n if n else 0.0,
        "density": sum(f * f for f in frags) / n if n else 0.0,
        "novel": novel,
    }


def _gain_oracle(parts, targets, chosen, j, orders):
    def rec(text, target):
        return sum(recall_oracle(text, target, n) for n in orders) / len(orders)

    total = 0.0
    for p, t in zip(parts, targets):
        base = " ".join(p[k] for k in chosen if k < len(p)).strip()
        if j < len(p):
            total += rec((base + " " + p[j]).strip(), t) - rec(base, t)
    return total / len(parts)


class OracleUnsatisfiable(Exception):
    pass


def mmrg_multi_oracle(parts, targets_per_slot, n_prime, orders=(1,)):
    """Per-slot exhaustive greedy, then exhaustive next-best search on duplicate sets."""
    slots = []
    n_parts = max(len(p) for p in parts)
    for targets in targets_per_slot:
        ids, _ = mmrg_oracle(parts, targets, n_prime, orders)
        if n_prime > 0 and any(set(ids) == set(s) for s in slots):
            if not ids:
                raise OracleUnsatisfiable()
            head = ids[:-1]
            cands = []
            for j in range(n_parts):
                if j in head or j == ids[-1]:
                    continue
                g = _gain_oracle(parts, targets, head, j, orders)
                if g > 1e-12:
                    cands.append((g, j))
            cands.sort(key=lambda x: (-round(x[0], 12), x[1]))
            for _, j in cands:
                if not any(set(head + [j]) == set(s) for s in slots):
                    ids = head + [j]
                    break
            else:
                raise OracleUnsatisfiable()
        slots.append(ids)
    return slots


def trigram_block_oracle(sentences):
    """Indices of kept sentences: a sentence survives if none of its trigrams
    occurs in any earlier surviving sentence (recomputed from scratch)."""
    import string

    def words(s):
        return [w for w in (t.strip(string.punctuation) for t in s.lower().split()) if w]

    kept = []
    for i, s in enumerate(sentences):
        toks = words(s)
        mine = {tuple(toks[k:k + 3]) for k in range(len(toks) - 2)}
        earlier = set()
        for j in kept:
            t = words(sentences[j])
            earlier |= {tuple(t[k:k + 3]) for k in range(len(t) - 2)}
        if not mine & earlier:
            kept.append(i)
    return kept
