"""Stage implementations behind the ``findsum`` subcommands.

Each command returns an exit code: 0 success, 1 partial (or a data problem
that stopped the stage), 2 config error, 3 I/O error.  Config and I/O
errors are raised and mapped to codes by :func:`findsum.cli.main`.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from findsum.cli.artifacts import check_stage, dump_json, read_json, write_json, write_manifest
from findsum.cli.config import RunConfig
from findsum.corpus import (
    CorpusSplit, build_example, corpus_stats, dedup_and_filter, doc_numbers, read_examples,
    split_by_company, write_examples,
)
from findsum.errors import FindsumError, GeneratorFailure
from findsum.ingest import parse_filing, read_document, write_document
from findsum.ingest.models import TableTuple
from findsum.ingest.tuples import extract_tuples
from findsum.metrics import ScoreItem, score_batch
from findsum.select_text import SegmentSelection, evaluate_selection, mmrg_multi_segment, split_summary
from findsum.select_text.mmrg import selected_text
from findsum.select_tuple import (
    DocContext, FeatureConfig, TrainConfig, evaluate_topn, featurize_all, fit_keywords, label_tuples,
    load_vectors, model_from_dict, rank_indices, train_classifier, undersample,
)
from findsum.summarize import GeneratorClient, GeneratorHandle, Summary, build_plans, generate_segments

log = logging.getLogger(__name__)

INPUT_SUFFIXES = (".htm", ".html", ".txt")


def _pool_map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _clear(directory: Path, pattern: str) -> None:
    for p in directory.glob(pattern):
        if p.is_file():
            p.unlink()


# ingest

def collect_inputs(paths: Sequence[str]) -> list[Path]:
    out = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.suffix.lower() in INPUT_SUFFIXES and q.is_file()))
        elif p.is_file():
            out.append(p)
        else:
            raise FileNotFoundError(f"no such file or directory: {raw}")
    return out


def cmd_ingest(cfg: RunConfig, files: Sequence[str]) -> int:
    sources = list(files) or ([cfg.input_dir] if cfg.input_dir else [])
    if not sources:
        raise FileNotFoundError("no input files given and no input_dir configured")
    paths = collect_inputs(sources)
    if not paths:
        raise FileNotFoundError(f"no filings ({', '.join(INPUT_SUFFIXES)}) found in {', '.join(sources)}")
    out = cfg.work / "docs"
    out.mkdir(parents=True, exist_ok=True)
    _clear(out, "*.jsonl")

    def one(path: Path) -> Optional[str]:
        try:
            doc = parse_filing(path.read_bytes(), path.stem, max_words=cfg.ingest.max_words)
            write_document(out / f"{path.stem}.jsonl", doc, extract_tuples(doc))
            return None
        except (FindsumError, OSError, ValueError) as exc:
            log.error("%s: %s", path, exc)
            return str(exc)

    errors = _pool_map(one, paths, cfg.jobs)
    failed = sum(e is not None for e in errors)
    write_manifest(out, "docs", cfg.digest("docs"))
    print(f"ingested {len(paths) - failed} of {len(paths)} files ({failed} failed)")
    if failed == len(paths):
        return 3
    return 1 if failed else 0


# corpus

def _load_corpus(cfg: RunConfig, force: bool) -> tuple[list, CorpusSplit]:
    d = cfg.work / "corpus"
    check_stage(d, "corpus", cfg.digest("corpus"), force)
    examples = read_examples(d / "examples.jsonl")
    split = CorpusSplit.from_dict(read_json(d / "split.json"))
    return examples, split


def _subset(examples: list, split: CorpusSplit, name: str) -> list:
    if name == "all":
        return list(examples)
    ids = set(split.parts()[name])
    return [ex for ex in examples if ex.example_id in ids]


def _stats_or_none(examples, target, jobs):
    try:
        return corpus_stats(examples, target, jobs).to_dict()
    except ValueError as exc:
        log.warning("no %s statistics: %s", target, exc)
        return None


def cmd_build_corpus(cfg: RunConfig, force: bool) -> int:
    docs_dir = cfg.work / "docs"
    check_stage(docs_dir, "docs", cfg.digest("docs"), force)
    paths = sorted(docs_dir.glob("*.jsonl"))
    if not paths:
        raise FileNotFoundError(f"no ingested documents in {docs_dir}")

    def one(path: Path):
        doc, tuples = read_document(path)
        try:
            return build_example(doc, tuples, cfg.ingest.max_words)
        except FindsumError as exc:
            log.warning("%s: skipped (%s)", doc.doc_id, exc)
            return None

    built = [ex for ex in _pool_map(one, paths, cfg.jobs) if ex is not None]
    c = cfg.corpus
    kept = dedup_and_filter(built, c.min_input_words, c.max_input_words)
    try:
        split = split_by_company(kept, tuple(c.split_ratios), c.split_seed)
    except FindsumError as exc:
        log.error("cannot split corpus: %s", exc)
        return 1
    out = cfg.work / "corpus"
    out.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest("corpus")
    write_examples(out / "examples.jsonl", kept)
    write_json(out / "split.json", {**split.to_dict(), "config_digest": digest})
    stats = {t: _stats_or_none(kept, t, cfg.jobs) for t in ("roo", "liquidity")}
    write_json(out / "stats.json", {"config_digest": digest, **stats})
    write_manifest(out, "corpus", digest)
    print(f"corpus: {len(kept)} examples from {len(paths)} documents "
          f"(train {len(split.train)}, val {len(split.val)}, test {len(split.test)})")
    return 0


def cmd_stats(cfg: RunConfig, force: bool, target: str = "all") -> int:
    examples, split = _load_corpus(cfg, force)
    targets = ("roo", "liquidity") if target == "all" else (target,)
    report = {t: _stats_or_none(examples, t, cfg.jobs) for t in targets}
    print(dump_json(report), end="")
    return 0


# text selection

def slot_targets(examples, target: str, k: int) -> list[list[str]]:
    per_example = [split_summary(ex.target(target), k) for ex in examples]
    return [[pieces[s] for pieces in per_example] for s in range(k)]


def cmd_select_text(cfg: RunConfig, force: bool) -> int:
    examples, split = _load_corpus(cfg, force)
    train = _subset(examples, split, cfg.corpus.train_split)
    if not train:
        log.error("split %r has no examples to select from", cfg.corpus.train_split)
        return 1
    s, k = cfg.selection, cfg.k_segments()
    parts = [[seg.text for seg in ex.input_segments] for ex in train]
    try:
        selection = mmrg_multi_segment(parts, slot_targets(train, s.target, k), s.n_prime,
                                       s.ngram_order, s.budget_words)
    except FindsumError as exc:
        log.error("selection failed: %s", exc)
        return 1
    out = cfg.work / "selection"
    digest = cfg.digest("selection")
    write_json(out / "selection.json", {**selection.to_dict(), "config_digest": digest,
                                        "target": s.target, "k_segments": k})

    evals = _subset(examples, split, cfg.corpus.eval_split)
    recall = {}
    if evals:
        targets = slot_targets(evals, s.target, k)
        for slot, ids in enumerate(selection.per_summary_segment):
            texts = [selected_text([seg.text for seg in ex.input_segments], ids) for ex in evals]
            prof = evaluate_selection(texts, targets[slot])
            recall[str(slot)] = {"recall_by_n": {str(n): v for n, v in prof.recall_by_n.items()},
                                 "recall_avg": prof.recall_avg}
    write_json(out / "recall.json", {"config_digest": digest, "split": cfg.corpus.eval_split,
                                     "slots": recall})
    write_manifest(out, "selection", digest)
    print("selection: " + "; ".join(f"slot {i}: {ids}" for i, ids in enumerate(selection.per_summary_segment)))
    return 0


# tuple selection

def _feature_matrix(ex, vectors, fconfig: FeatureConfig) -> np.ndarray:
    return featurize_all(ex.input_tuples, DocContext.from_example(ex), vectors, fconfig)


class _Row:
    __slots__ = ("label", "x")

    def __init__(self, label, x):
        self.label, self.x = label, x


def cmd_train_tuples(cfg: RunConfig, force: bool) -> int:
    examples, split = _load_corpus(cfg, force)
    train = _subset(examples, split, cfg.corpus.train_split)
    t, target = cfg.tuples, cfg.selection.target
    labeled = {ex.example_id: label_tuples(ex.input_tuples, ex.target(target)) for ex in train}
    vectors = load_vectors(t.vectors) if t.vectors else None
    keywords = fit_keywords([lt for v in labeled.values() for lt in v], t.keywords) if t.keywords else []
    dim = len(next(iter(vectors.values()))) if vectors else 0
    fconfig = FeatureConfig(positional=True, embedding=bool(vectors), keywords=keywords, embedding_dim=dim)

    rows = []
    for ex in train:
        x = _feature_matrix(ex, vectors, fconfig)
        rows.extend(_Row(lt.label, x[i]) for i, lt in enumerate(labeled[ex.example_id]))
    sample = undersample(rows, t.undersample_ratio, t.seed)
    n_pos = sum(r.label for r in sample)
    x = np.array([r.x for r in sample]).reshape(len(sample), fconfig.length())
    y = [int(r.label) for r in sample]
    train_cfg = TrainConfig(t.learning_rate, t.epochs, t.l2, t.seed)
    fdict = {**fconfig.to_dict(), "vectors": t.vectors}
    try:
        model = train_classifier(x, y, train_cfg, kind=t.kind, command=t.command, feature_config=fdict)
    except FindsumError as exc:
        log.error("cannot train tuple classifier: %s", exc)
        return 1
    out = cfg.work / "tuples"
    out.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest("tuples")
    try:
        write_json(out / "model.json", {**model.to_dict(), "config_digest": digest})
        if t.kind == "external":
            # the external process holds its fitted state only while alive
            write_json(out / "train_data.json", {"features": x.tolist(), "labels": y})
    finally:
        model.close()
    write_manifest(out, "tuples", digest)
    print(f"tuple classifier: {len(sample)} training tuples ({n_pos} salient)")
    return 0


def _load_model(cfg: RunConfig, force: bool):
    d = cfg.work / "tuples"
    check_stage(d, "tuples", cfg.digest("tuples"), force)
    saved = read_json(d / "model.json")
    model = model_from_dict(saved)
    if saved.get("kind") == "external":
        data = read_json(d / "train_data.json")
        model.fit(data["features"], data["labels"])
    return model, saved.get("feature_config", {})


def cmd_select_tuples(cfg: RunConfig, force: bool) -> int:
    examples, split = _load_corpus(cfg, force)
    evals = _subset(examples, split, cfg.corpus.eval_split)
    model, fdict = _load_model(cfg, force)
    t, target = cfg.tuples, cfg.selection.target
    vectors = load_vectors(fdict["vectors"]) if fdict.get("embedding") else None
    fconfig = FeatureConfig.from_dict(fdict)
    out = cfg.work / "tuples"
    ranked_dir = out / "ranked"
    ranked_dir.mkdir(parents=True, exist_ok=True)
    _clear(ranked_dir, "*.json")
    digest = cfg.digest("tuples")
    scores: dict = {str(n): {"accuracy": [], "recall": []} for n in t.eval_n}
    try:
        for ex in evals:
            tuples = ex.input_tuples
            probs = model.predict_proba(_feature_matrix(ex, vectors, fconfig)) if tuples else np.zeros(0)
            order = rank_indices(probs, tuples)
            top = order[: t.top_n]
            write_json(ranked_dir / f"{ex.example_id}.json", {
                "example_id": ex.example_id, "config_digest": digest,
                "tuples": [tuples[i].as_list() for i in top],
                "proba": [round(float(probs[i]), 12) for i in top]})
            if tuples:
                labeled = label_tuples(tuples, ex.target(target))
                for n, sc in evaluate_topn([tuples[i] for i in order], labeled, t.eval_n).items():
                    scores[str(n)]["accuracy"].append(sc.accuracy)
                    scores[str(n)]["recall"].append(sc.recall)
    finally:
        model.close()
    summary = {n: {k: (sum(v) / len(v) if v else None) for k, v in d.items()} for n, d in scores.items()}
    write_json(out / "eval.json", {"config_digest": digest, "split": cfg.corpus.eval_split,
                                   "examples": len(evals), "top_n": summary})
    write_manifest(out, "tuples", digest)
    print(f"ranked tuples for {len(evals)} examples")
    return 0


# summarization

def _ranked_tuples(cfg: RunConfig, example_id: str) -> list[TableTuple]:
    path = cfg.work / "tuples" / "ranked" / f"{example_id}.json"
    if not path.exists():
        raise FileNotFoundError(f"{path} missing; run select-tuples first")
    return [TableTuple(*row) for row in read_json(path)["tuples"]]


def cmd_summarize(cfg: RunConfig, force: bool) -> int:
    examples, split = _load_corpus(cfg, force)
    check_stage(cfg.work / "selection", "selection", cfg.digest("selection"), force)
    pcfg = cfg.pipeline_config()
    if pcfg.mode != "TEXT_ONLY":
        check_stage(cfg.work / "tuples", "tuples", cfg.digest("tuples"), force)
    selection = SegmentSelection.from_dict(read_json(cfg.work / "selection" / "selection.json"))
    evals = _subset(examples, split, cfg.corpus.eval_split)
    out = cfg.work / "summaries"
    out.mkdir(parents=True, exist_ok=True)
    _clear(out, "*.json")
    digest = cfg.digest("summaries")
    p = cfg.pipeline
    generator = None
    if p.generator:
        generator = GeneratorClient(GeneratorHandle(p.generator, p.generator_timeout, p.max_concurrency))

    def one(ex) -> bool:
        parts = [s.text for s in ex.input_segments]
        tuples = _ranked_tuples(cfg, ex.example_id) if pcfg.mode != "TEXT_ONLY" else []
        ok = True
        try:
            plans = build_plans(parts, selection, tuples, pcfg, generator)
            summary = generate_segments(plans, generator, pcfg)
        except GeneratorFailure as exc:
            log.error("%s: %s", ex.example_id, exc)
            summary = exc.partial or Summary([""] * pcfg.k_segments, list(range(pcfg.k_segments)))
            ok = False
        write_json(out / f"{ex.example_id}.json",
                   {"example_id": ex.example_id, "config_digest": digest, **summary.to_dict()})
        return ok

    try:
        results = _pool_map(one, evals, cfg.jobs)
    finally:
        if generator is not None:
            generator.close()
    write_manifest(out, "summaries", digest)
    failed = results.count(False)
    print(f"summarized {len(evals) - failed} of {len(evals)} examples ({failed} failed)")
    return 1 if failed else 0


# evaluation

def cmd_evaluate(cfg: RunConfig, force: bool) -> int:
    examples, split = _load_corpus(cfg, force)
    sdir = cfg.work / "summaries"
    check_stage(sdir, "summaries", cfg.digest("summaries"), force)
    target = cfg.selection.target
    evals = _subset(examples, split, cfg.corpus.eval_split)
    items, missing = [], []
    for ex in evals:
        path = sdir / f"{ex.example_id}.json"
        if not path.exists():
            missing.append(ex.example_id)
            continue
        hyp = read_json(path)["combined"]
        items.append(ScoreItem(ex.example_id, hyp, ex.target(target), doc_numbers(ex)))
    if missing:
        log.warning("no summary for %d example(s): %s", len(missing), ", ".join(missing))
    report = score_batch(items, with_bleu=cfg.metrics.bleu, jobs=cfg.jobs)
    out = cfg.work / "reports"
    out.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest("reports")
    (out / "metrics.json").write_text(report.to_json({"config_digest": digest, "target": target,
                                                      "missing": missing}), encoding="utf-8")
    (out / "metrics.csv").write_text(report.to_csv(), encoding="utf-8")
    write_manifest(out, "reports", digest)
    agg = report.aggregate
    shown = ", ".join(f"{k}={agg[k]:.4f}" if agg[k] is not None else f"{k}=undefined"
                      for k in ("r1", "r2", "rl", "np", "nc", "ns"))
    print(f"evaluated {len(items)} examples: {shown}")
    return 1 if missing else 0
