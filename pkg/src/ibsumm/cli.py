"""Command-line interface.

Exit codes: 0 success, 1 fatal error, 2 usage error, 3 partial failure
(some documents failed or some ids could not be matched).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from .backends import BackendConfig, BackendError, RemoteBackend, make_backends
from .corpus import CorpusError, load_corpus
from .evalsuite import (
    evaluate_corpus,
    lead_k,
    oracle_extract,
    position_histogram,
    write_histogram_csv,
    write_metrics_csv,
)
from .keyphrase import load_stopwords
from .pipeline import ConfigError, build_config, load_config_file, run_corpus
from .plots import render_position_histogram

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3


def _add_backend_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("backend")
    group.add_argument("--backend-mode", choices=["offline", "remote"],
                       default=None, help="scoring backend mode (default offline)")
    group.add_argument("--endpoint", default=None,
                       help="model server URL (or IBSUMM_ENDPOINT env var)")
    group.add_argument("--vectors", default=None,
                       help="word-vector file for the offline embedding backend")
    group.add_argument("--timeout", type=float, default=None,
                       help="remote request timeout in seconds (default 30)")
    group.add_argument("--batch-size", type=int, default=None,
                       help="remote request batch size (default 32)")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline")
    group.add_argument("--config", default=None, help="flat key=value config file")
    group.add_argument("--mode", choices=["none", "greedy", "beam"], default=None,
                       help="realization search mode (default beam)")
    group.add_argument("--views", choices=["keywords", "keywords+category"],
                       default=None, help="signal views (default keywords)")
    group.add_argument("--ranking-mode", choices=["eq4", "similarity-sum"],
                       default=None, help="keyword ranking mode (default eq4)")
    group.add_argument("--alpha", type=float, default=None,
                       help="category view weight (default 1.0)")
    group.add_argument("--beta", type=float, default=None,
                       help="keyword view weight (default 1.0)")
    group.add_argument("--epsilon", type=float, default=None,
                       help="probability clamp floor (default 0.01)")
    group.add_argument("--num-keyphrases", type=int, default=None,
                       help="keyphrases per document (default 10)")
    group.add_argument("--top-n", type=int, default=None,
                       help="candidate sentences kept for realization (default 50)")
    group.add_argument("--window", type=int, default=None,
                       help="greedy lookahead window (default 3)")
    group.add_argument("--k-starts", type=int, default=None,
                       help="beam start sentences (default 5)")
    group.add_argument("--beam-width", type=int, default=None,
                       help="beam width (default 5)")
    group.add_argument("--summary-len", type=int, default=None,
                       help="sentences per summary (default 10)")
    group.add_argument("--min-words", type=int, default=None,
                       help="minimum admissible sentence length (default 8)")
    group.add_argument("--max-words", type=int, default=None,
                       help="maximum admissible sentence length (default 80)")


def _config_from_args(args: argparse.Namespace):
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    flag_map = {
        "mode": "search_mode", "views": "views", "ranking_mode": "ranking_mode",
        "alpha": "alpha", "beta": "beta", "epsilon": "epsilon",
        "num_keyphrases": "num_keyphrases", "top_n": "top_n", "window": "window",
        "k_starts": "k_starts", "beam_width": "beam_width",
        "summary_len": "summary_len", "min_words": "min_words",
        "max_words": "max_words", "backend_mode": "backend_mode",
        "endpoint": "endpoint", "vectors": "embedding_file",
        "timeout": "timeout", "batch_size": "batch_size",
    }
    for attr, key in flag_map.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
    if not values.get("endpoint") and os.environ.get("IBSUMM_ENDPOINT"):
        values["endpoint"] = os.environ["IBSUMM_ENDPOINT"]
    if values.get("backend_mode") is None:
        values["backend_mode"] = "offline"
    return build_config(values)


def _load_summaries(path: str | Path) -> dict[str, dict]:
    records: dict[str, dict] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            records[obj["article_id"]] = obj
    return records


def _write_summaries(records: list[dict], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for obj in records:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def cmd_summarize(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    backends = make_backends(config.backend, load_stopwords())
    manifest = run_corpus(
        args.corpus, config, args.out, backends,
        limit=args.limit, workers=args.workers,
    )
    failed = len(manifest["failures"])
    total = manifest["documents"]
    print(f"summarized {manifest['summarized']}/{total} documents "
          f"({failed} failed, {len(manifest['skipped'])} skipped) "
          f"in {manifest['wall_time_s']}s -> {args.out}")
    if total and failed / total > 0.10:
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    documents = load_corpus(args.corpus)
    known = {d.id for d in documents}
    records = _load_summaries(args.summaries)
    unknown = sorted(set(records) - known)
    for doc_id in unknown:
        print(f"unknown document id in summaries: {doc_id}", file=sys.stderr)
    row = evaluate_corpus(
        documents,
        {i: obj["sentences"] for i, obj in records.items() if i in known},
        system=args.system,
        stemming=args.stemming,
    )
    if args.out:
        write_metrics_csv([row], args.out)
    print(f"{row.system}: R-1 {row.rouge1_f1:.4f}  R-2 {row.rouge2_f1:.4f}  "
          f"R-L {row.rougeL_f1:.4f}  ({row.num_docs} docs)")
    return EXIT_PARTIAL if unknown else EXIT_OK


def _extractive_records(documents, extract) -> list[dict]:
    records = []
    for doc in sorted(documents, key=lambda d: d.id):
        sentences = extract(doc)
        records.append({
            "article_id": doc.id,
            "sentence_indices": [s.index for s in sentences],
            "sentences": [s.text for s in sentences],
        })
    return records


def cmd_oracle(args: argparse.Namespace) -> int:
    documents = [d for d in load_corpus(args.corpus, limit=args.limit) if d.reference]
    if not documents:
        print("no documents with references", file=sys.stderr)
        return EXIT_FATAL
    records = _extractive_records(
        documents, lambda d: oracle_extract(d, max_sentences=args.max)
    )
    _write_summaries(records, args.out)
    print(f"wrote {len(records)} oracle summaries -> {args.out}")
    return EXIT_OK


def cmd_lead(args: argparse.Namespace) -> int:
    documents = load_corpus(args.corpus, limit=args.limit)
    records = _extractive_records(documents, lambda d: lead_k(d, k=args.k))
    _write_summaries(records, args.out)
    print(f"wrote {len(records)} lead-{args.k} summaries -> {args.out}")
    return EXIT_OK


def cmd_positions(args: argparse.Namespace) -> int:
    documents = load_corpus(args.corpus)
    docs_by_id = {d.id: d for d in documents}
    records = _load_summaries(args.summaries)
    unknown = sorted(set(records) - set(docs_by_id))
    for doc_id in unknown:
        print(f"unknown document id in summaries: {doc_id}", file=sys.stderr)
    pairs = [
        (obj["sentence_indices"], len(docs_by_id[i].sentences))
        for i, obj in sorted(records.items()) if i in docs_by_id
    ]
    hist = position_histogram(pairs, bins=args.bins)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_histogram_csv(hist, out)
    render_position_histogram(hist, out.with_suffix(".png"))
    print(f"wrote histogram -> {out} and {out.with_suffix('.png')}")
    return EXIT_PARTIAL if unknown else EXIT_OK


def cmd_backend_check(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    backends = make_backends(config.backend, load_stopwords())
    if config.backend.mode == "offline":
        dim = backends.embedder.dim
        [prob] = backends.nsp.nsp([("a first probe sentence", "a second one")])
        print(f"embed: offline, dim={dim}")
        print(f"nsp: offline, probe prob={prob:.4f}")
        print("classify: stub (uniform distribution)")
        return EXIT_OK
    remote: RemoteBackend = backends.embedder
    try:
        t0 = time.perf_counter()
        health = remote.health()
        print(f"health: {health} ({1000 * (time.perf_counter() - t0):.0f} ms)")
        t0 = time.perf_counter()
        [vec] = remote.embed(["probe sentence"])
        print(f"embed: dim={vec.size} ({1000 * (time.perf_counter() - t0):.0f} ms)")
        t0 = time.perf_counter()
        [prob] = remote.nsp([("first probe sentence", "second probe sentence")])
        print(f"nsp: prob={prob:.4f} ({1000 * (time.perf_counter() - t0):.0f} ms)")
        if health.get("classify"):
            t0 = time.perf_counter()
            [dist] = remote.classify(["probe sentence"])
            print(f"classify: {dist.size} labels "
                  f"({1000 * (time.perf_counter() - t0):.0f} ms)")
        else:
            print("classify: not served")
    except BackendError as exc:
        print(f"backend check failed: {exc}", file=sys.stderr)
        return EXIT_FATAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ibsumm",
        description="Unsupervised extractive summarization of long documents",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="summarize a corpus")
    p.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--limit", type=int, default=None, help="max documents")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel document workers (default 1)")
    _add_config_flags(p)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("evaluate", help="score summaries against references")
    p.add_argument("--summaries", required=True, help="summary JSON-lines file")
    p.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    p.add_argument("--out", default=None, help="metrics CSV path")
    p.add_argument("--system", default="system", help="system name for the CSV")
    p.add_argument("--stemming", action="store_true", help="stem tokens for ROUGE")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("oracle", help="greedy reference-maximizing summaries")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="summary JSON-lines path")
    p.add_argument("--max", type=int, default=10, help="max oracle sentences")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("lead", help="first-k-sentence baseline summaries")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="summary JSON-lines path")
    p.add_argument("--k", type=int, default=3, help="sentences per summary")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_lead)

    p = sub.add_parser("positions", help="summary sentence position histogram")
    p.add_argument("--summaries", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="histogram CSV path (PNG alongside)")
    p.add_argument("--bins", type=int, default=10)
    p.set_defaults(func=cmd_positions)

    p = sub.add_parser("backend-check", help="probe the configured backends")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_backend_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ConfigError, CorpusError, BackendError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
