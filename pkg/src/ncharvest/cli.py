"""Command-line entry point.

Subcommands: ``index`` (build a searchable index plus n-gram table),
``run`` (execute a configured bootstrap run), ``analyze`` (agreement,
collocation binning, dataset emission over a saved state), and ``emit``
(dataset emission only).

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analysis import (
    AnalysisError,
    JudgmentFile,
    bin_accuracy_by_dice,
    bin_table_to_tsv,
    cohen_kappa,
    dice,
    emit_dataset,
    nc_item_id,
)
from .config import ConfigError, load_run_config
from .corpus import CorpusError, CorpusIndex, NGramTable, read_corpus
from .engine import (
    BootstrapEngine,
    HarvestState,
    ProviderError,
    SeedError,
    bundled_seed_paths,
    load_seeds,
)
from .lexicon import Lexicon
from .queries import batches_to_tsv

CONFIG_ENV_VAR = "NCHARVEST_CONFIG"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def cmd_index(args) -> int:
    corpus_path = Path(args.corpus)
    if not corpus_path.exists():
        raise UsageError(f"corpus path not found: {corpus_path}")
    docs = read_corpus(corpus_path, per_file=args.per_file)
    index = CorpusIndex(docs)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    index.save(out)
    ngrams = NGramTable.from_corpus(docs, max_n=args.ngram_max_n)
    ngrams_out = Path(args.ngrams_out or out.with_suffix(".ngrams.tsv"))
    ngrams.save_web1t(ngrams_out)
    print(f"documents: {index.doc_count}")
    print(f"tokens: {index.total_tokens}")
    print(f"index: {out}")
    print(f"ngrams: {ngrams_out} ({len(ngrams)} entries)")
    return EXIT_OK


def _write_manifest(run_config, config_path: Path, seed_paths) -> dict:
    doc = {
        "tool": "ncharvest",
        "version": __version__,
        "config": {k: v for k, v in run_config.raw},
        "corpus_fingerprint": _sha256(run_config.index),
        "ngrams_fingerprint": _sha256(run_config.ngrams),
        "seed_hashes": {
            "ncs": hashlib.sha256(
                Path(seed_paths[0]).read_bytes()).hexdigest(),
            "patterns": hashlib.sha256(
                Path(seed_paths[1]).read_bytes()).hexdigest(),
            "pairs": hashlib.sha256(
                Path(seed_paths[2]).read_bytes()).hexdigest(),
        },
    }
    return doc


def cmd_run(args) -> int:
    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if not config_path:
        raise UsageError(
            f"no config given (flag --config or ${CONFIG_ENV_VAR})")
    run_config = load_run_config(config_path)
    if args.workers is not None:
        run_config = replace(
            run_config,
            engine=replace(run_config.engine, workers=args.workers))
    for name in ("index", "ngrams"):
        p = getattr(run_config, name)
        if not p.is_file():
            raise UsageError(f"{name} file not found: {p}")

    seed_paths = bundled_seed_paths()
    if run_config.seed_ncs:
        seed_paths = (run_config.seed_ncs, run_config.seed_patterns,
                      run_config.seed_pairs)
        if not (run_config.seed_patterns and run_config.seed_pairs):
            raise UsageError("seed_ncs, seed_patterns and seed_pairs must "
                             "be configured together")
    seeds = load_seeds(*seed_paths)

    out_dir = run_config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoints = out_dir / "checkpoints"
    checkpoints.mkdir(exist_ok=True)

    manifest = _write_manifest(run_config, Path(config_path), seed_paths)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n",
        encoding="utf-8")

    lexicon = Lexicon.bundled()
    index = CorpusIndex.load(run_config.index)
    ngrams = NGramTable.from_web1t(run_config.ngrams)

    debug_batches = [] if args.debug_queries else None
    engine = BootstrapEngine(
        lexicon, index, ngrams, run_config.engine,
        debug_query_sink=(debug_batches.append
                          if debug_batches is not None else None))

    initial_state = None
    if args.resume:
        initial_state = HarvestState.load(args.resume)

    def on_checkpoint(state, iteration, step):
        state.save(checkpoints / f"state_iter{iteration}_{step}.json")

    state, reports = engine.run(seeds, initial_state=initial_state,
                                on_checkpoint=on_checkpoint)

    state.save(out_dir / "state.json")
    with open(out_dir / "reports.jsonl", "w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(report.to_json() + "\n")
    dataset_path = out_dir / f"dataset.{run_config.format}"
    dataset_path.write_text(emit_dataset(state, run_config.format, lexicon),
                            encoding="utf-8")
    if debug_batches is not None:
        (out_dir / "queries.tsv").write_text(batches_to_tsv(debug_batches),
                                             encoding="utf-8")

    cfg = run_config.engine
    print(f"strategy={cfg.strategy} N={cfg.n_threshold} M={cfg.m_threshold}")
    for report in reports:
        print(f"iteration {report.iteration}: ncs={report.new_ncs} "
              f"patterns={report.new_patterns} pairs={report.new_pairs} "
              f"queries={report.queries_issued}")
    print(f"total ncs: {len(state.accepted_ncs)}")
    print(f"total patterns: {len(state.accepted_patterns)}")
    print(f"total pairs: {len(state.pairs)}")
    print(f"output: {out_dir}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    state_path = Path(args.state)
    if not state_path.is_file():
        raise UsageError(f"state file not found: {state_path}")
    state = HarvestState.load(state_path)
    lexicon = Lexicon.bundled()
    did_something = False

    if args.judgments and len(args.judgments) > 2:
        raise UsageError("--judgments takes one file (dice binning) or "
                         "two (kappa)")
    if args.judgments and len(args.judgments) == 2:
        a = JudgmentFile.load(args.judgments[0])
        b = JudgmentFile.load(args.judgments[1])
        print(f"kappa: {cohen_kappa(a, b):.3f}")
        did_something = True
    elif args.judgments and len(args.judgments) == 1:
        if not args.ngrams:
            raise UsageError("dice binning needs --ngrams")
        ngrams = NGramTable.from_web1t(args.ngrams)
        judged = JudgmentFile.load(args.judgments[0])
        items = []
        missing = []
        for nc in sorted(state.accepted_ncs):
            item = nc_item_id(nc)
            if item not in judged.labels:
                missing.append(item)
                continue
            items.append((dice(nc, ngrams), judged.labels[item]))
        if missing:
            raise UsageError(
                "missing judgment ids: " + ", ".join(missing))
        rows = bin_accuracy_by_dice(items, args.bins)
        out = bin_table_to_tsv(rows)
        if args.out:
            Path(args.out).write_text(out, encoding="utf-8")
        else:
            sys.stdout.write(out)
        did_something = True

    if not did_something:
        sys.stdout.write(emit_dataset(state, args.format, lexicon))
    return EXIT_OK


def cmd_emit(args) -> int:
    state_path = Path(args.state)
    if not state_path.is_file():
        raise UsageError(f"state file not found: {state_path}")
    state = HarvestState.load(state_path)
    text = emit_dataset(state, args.format, Lexicon.bundled())
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncharvest",
        description="Harvest noun compounds and their paraphrasing "
                    "patterns from a local corpus.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build index and n-gram table")
    p_index.add_argument("corpus", help="corpus file (one document per "
                                        "line) or directory")
    p_index.add_argument("--out", required=True, help="index output path")
    p_index.add_argument("--ngrams-out", help="n-gram table output path")
    p_index.add_argument("--per-file", action="store_true",
                         help="treat each file in a directory as one "
                              "document")
    p_index.add_argument("--ngram-max-n", type=int, default=2,
                         choices=range(1, 6),
                         help="largest n-gram length to count")
    p_index.set_defaults(func=cmd_index)

    p_run = sub.add_parser("run", help="execute a bootstrap run")
    p_run.add_argument("--config", help=f"config file (or "
                                        f"${CONFIG_ENV_VAR})")
    p_run.add_argument("--workers", type=int,
                       help="override worker count")
    p_run.add_argument("--debug-queries", action="store_true",
                       help="dump every generated query to queries.tsv")
    p_run.add_argument("--resume", help="checkpoint file to resume from")
    p_run.set_defaults(func=cmd_run)

    p_an = sub.add_parser("analyze", help="analytics over a saved state")
    p_an.add_argument("state", help="state file from a run")
    p_an.add_argument("--judgments", nargs="+",
                      help="one judgment file (dice binning) or two "
                           "(kappa)")
    p_an.add_argument("--ngrams", help="n-gram table for dice")
    p_an.add_argument("--bins", type=int, default=10)
    p_an.add_argument("--format", choices=("jsonl", "tsv"),
                      default="jsonl")
    p_an.add_argument("--out", help="write table here instead of stdout")
    p_an.set_defaults(func=cmd_analyze)

    p_emit = sub.add_parser("emit", help="emit the final dataset")
    p_emit.add_argument("state", help="state file from a run")
    p_emit.add_argument("--format", choices=("jsonl", "tsv"),
                        default="jsonl")
    p_emit.add_argument("--out", help="write dataset here instead of "
                                      "stdout")
    p_emit.set_defaults(func=cmd_emit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, SeedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProviderError, CorpusError, AnalysisError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
