"""``findsum`` command line: one subcommand per pipeline stage."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from findsum.cli import commands
from findsum.cli.config import ENV_WORKDIR, RunConfig, load_config
from findsum.errors import ConfigError, FindsumError, UnreadableInput

log = logging.getLogger("findsum")

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--work-dir", help=f"artifact directory (overrides ${ENV_WORKDIR} and the config)")
    p.add_argument("--jobs", type=int, help="per-example parallelism")
    p.add_argument("--force", action="store_true", help="consume artifacts made under a different config")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="findsum", description="Report summarization pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="parse filings into documents and tuples")
    p.add_argument("files", nargs="*", help="filing files or directories (default: input_dir)")
    p.add_argument("--input-dir")

    p = sub.add_parser("build-corpus", parents=[common], help="examples, split manifest, statistics")
    p.add_argument("--seed", type=int, help="split seed")
    p.add_argument("--min-words", type=int)
    p.add_argument("--max-words", type=int)

    p = sub.add_parser("stats", parents=[common], help="print dataset statistics")
    p.add_argument("--target", choices=("roo", "liquidity", "all"), default="all")

    p = sub.add_parser("select-text", parents=[common], help="per-slot segment selection")
    p.add_argument("--target", choices=("roo", "liquidity"))
    p.add_argument("--n-prime", type=int)
    p.add_argument("--ngram-order", type=int, nargs="+")
    p.add_argument("--k", type=int, dest="k_segments")

    p = sub.add_parser("train-tuples", parents=[common], help="train the salient-tuple classifier")
    p.add_argument("--target", choices=("roo", "liquidity"))
    p.add_argument("--kind", choices=("logistic-regression", "external"))
    p.add_argument("--classifier-command")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("select-tuples", parents=[common], help="rank tuples per example")
    p.add_argument("--target", choices=("roo", "liquidity"))
    p.add_argument("--top-n", type=int)

    p = sub.add_parser("summarize", parents=[common], help="generate summaries")
    p.add_argument("--target", choices=("roo", "liquidity"))
    p.add_argument("--mode", choices=("GC", "CG", "GCG", "TEXT_ONLY"))
    p.add_argument("--generator", help="generator command line")

    p = sub.add_parser("evaluate", parents=[common], help="score summaries against targets")
    p.add_argument("--target", choices=("roo", "liquidity"))
    p.add_argument("--no-bleu", action="store_true")
    return parser


def _overrides(args) -> dict:
    get = lambda name: getattr(args, name, None)  # noqa: E731
    ngram = get("ngram_order")
    return {
        "work_dir": args.work_dir,
        "jobs": args.jobs,
        "input_dir": get("input_dir"),
        "corpus.split_seed": get("seed") if args.command == "build-corpus" else None,
        "corpus.min_input_words": get("min_words"),
        "corpus.max_input_words": get("max_words"),
        "selection.target": get("target") if args.command != "stats" else None,
        "selection.n_prime": get("n_prime"),
        "selection.ngram_order": (ngram[0] if len(ngram) == 1 else ngram) if ngram else None,
        "selection.k_segments": get("k_segments"),
        "tuples.kind": get("kind"),
        "tuples.command": get("classifier_command"),
        "tuples.seed": get("seed") if args.command == "train-tuples" else None,
        "tuples.top_n": get("top_n"),
        "pipeline.mode": get("mode"),
        "pipeline.generator": get("generator"),
        "metrics.bleu": False if get("no_bleu") else None,
    }


def run(args) -> int:
    cfg: RunConfig = load_config(args.config, _overrides(args))
    cmd = args.command
    if cmd == "ingest":
        return commands.cmd_ingest(cfg, args.files)
    if cmd == "build-corpus":
        return commands.cmd_build_corpus(cfg, args.force)
    if cmd == "stats":
        return commands.cmd_stats(cfg, args.force, args.target)
    if cmd == "select-text":
        return commands.cmd_select_text(cfg, args.force)
    if cmd == "train-tuples":
        return commands.cmd_train_tuples(cfg, args.force)
    if cmd == "select-tuples":
        return commands.cmd_select_tuples(cfg, args.force)
    if cmd == "summarize":
        return commands.cmd_summarize(cfg, args.force)
    if cmd == "evaluate":
        return commands.cmd_evaluate(cfg, args.force)
    raise ConfigError(f"unknown command {cmd}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except ConfigError as exc:
        print(f"findsum: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, UnreadableInput, json.JSONDecodeError) as exc:
        print(f"findsum: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FindsumError as exc:
        print(f"findsum: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
