"""End-to-end orchestration: corpus -> keyphrases -> scoring -> candidate
selection -> realization search -> evaluation artifacts."""

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import __version__
from .backends import BackendConfig, Backends
from .corpus import Document, load_corpus
from .evalsuite import evaluate_corpus, position_histogram, write_histogram_csv, \
    write_metrics_csv
from .keyphrase import load_stopwords, top_keyphrases
from .plots import render_position_histogram
from .realization import beam_search, build_matrix, greedy_search, realize
from .selection import select_top_n, score_sentences

log = logging.getLogger(__name__)

SEARCH_MODES = ("none", "greedy", "beam")
VIEW_SETS = ("keywords", "keywords+category")


class ConfigError(Exception):
    pass


@dataclass
class PipelineConfig:
    """Run configuration.  Defaults mirror the published experiment setup
    wherever it states a value (10 keyphrases, 50 candidates, window 3,
    5 starts, beam 5, 10-sentence summaries)."""

    alpha: float = 1.0
    beta: float = 1.0
    epsilon: float = 1e-2
    num_keyphrases: int = 10
    top_n: int = 50
    window: int = 3
    k_starts: int = 5
    beam_width: int = 5
    summary_len: int = 10
    min_words: int = 8
    max_words: int = 80
    search_mode: str = "beam"
    ranking_mode: str = "eq4"
    views: str = "keywords"
    backend: BackendConfig = field(default_factory=BackendConfig)

    def validate(self) -> "PipelineConfig":
        if self.search_mode not in SEARCH_MODES:
            raise ConfigError(f"search_mode must be one of {SEARCH_MODES}")
        if self.ranking_mode not in ("eq4", "similarity-sum"):
            raise ConfigError("ranking_mode must be 'eq4' or 'similarity-sum'")
        if self.views not in VIEW_SETS:
            raise ConfigError(f"views must be one of {VIEW_SETS}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError("epsilon must lie in (0, 1)")
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be non-negative")
        for name in ("num_keyphrases", "top_n", "window", "k_starts",
                     "beam_width", "summary_len", "min_words", "max_words"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.min_words > self.max_words:
            raise ConfigError("min_words must not exceed max_words")
        cfg = self
        if cfg.views == "keywords" and cfg.alpha != 0.0:
            cfg = replace(cfg, alpha=0.0)  # single view: category weight is inert
        try:
            cfg.backend.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return cfg

    def semantic_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)
             if f.name != "backend"}
        d["backend_mode"] = self.backend.mode
        d["endpoint"] = self.backend.endpoint
        d["embedding_file"] = (
            str(self.backend.embedding_file) if self.backend.embedding_file else None
        )
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.semantic_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


_FIELD_TYPES = {
    "alpha": float, "beta": float, "epsilon": float,
    "num_keyphrases": int, "top_n": int, "window": int, "k_starts": int,
    "beam_width": int, "summary_len": int, "min_words": int, "max_words": int,
    "search_mode": str, "ranking_mode": str, "views": str,
    "backend_mode": str, "endpoint": str, "embedding_file": str,
    "timeout": float, "batch_size": int,
}


def load_config_file(path: str | Path) -> dict:
    """Parse a flat 'key = value' config file; unknown keys are an error."""
    values: dict = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _FIELD_TYPES[key](raw)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return values


def build_config(overrides: dict) -> PipelineConfig:
    """Assemble a validated PipelineConfig from flat key/value overrides."""
    backend_keys = {"backend_mode": "mode", "endpoint": "endpoint",
                    "embedding_file": "embedding_file", "timeout": "timeout",
                    "batch_size": "batch_size"}
    backend_kwargs = {}
    pipeline_kwargs = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in backend_keys:
            backend_kwargs[backend_keys[key]] = value
        elif key in _FIELD_TYPES:
            pipeline_kwargs[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    cfg = PipelineConfig(backend=BackendConfig(**backend_kwargs), **pipeline_kwargs)
    return cfg.validate()


@dataclass(frozen=True)
class SummaryResult:
    article_id: str
    sentence_indices: tuple[int, ...]
    sentences: tuple[str, ...]
    timings: dict[str, float]
    fingerprint: str


def summarize_document(
    document: Document,
    config: PipelineConfig,
    backends: Backends,
) -> SummaryResult | None:
    """Summarize one document; returns None when it has no admissible
    sentences."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    keyphrases = top_keyphrases(document, k=config.num_keyphrases)
    timings["keyphrases"] = time.perf_counter() - t0

    use_category = config.views == "keywords+category"
    classifier = backends.classifier if use_category else None
    if use_category and getattr(classifier, "is_stub", False):
        log.warning("document %r: category view served by the uniform stub; "
                    "scores carry no category signal", document.id)
    labels = getattr(classifier, "labels", None) if classifier else None
    target = document.category if labels and document.category in labels else None

    t0 = time.perf_counter()
    scored = score_sentences(
        document,
        embedder=backends.embedder,
        keyphrases=keyphrases,
        alpha=config.alpha,
        beta=config.beta,
        epsilon=config.epsilon,
        ranking_mode=config.ranking_mode,
        min_words=config.min_words,
        max_words=config.max_words,
        classifier=classifier,
        labels=labels,
        target_label=target,
    )
    timings["scoring"] = time.perf_counter() - t0
    if not scored:
        return None

    t0 = time.perf_counter()
    if config.search_mode == "none":
        candidates = select_top_n(scored, config.summary_len)
        summary = [m.sentence for m in candidates.members]
        timings["search"] = time.perf_counter() - t0
    else:
        candidates = select_top_n(scored, config.top_n)
        matrix = build_matrix(candidates, backends.nsp)
        if config.search_mode == "greedy":
            path = greedy_search(matrix, window=config.window,
                                 target_len=config.summary_len)
        else:
            path = beam_search(matrix, k_starts=config.k_starts,
                               beam_width=config.beam_width,
                               target_len=config.summary_len)
        summary = realize(path, candidates)
        timings["search"] = time.perf_counter() - t0

    return SummaryResult(
        article_id=document.id,
        sentence_indices=tuple(s.index for s in summary),
        sentences=tuple(s.text for s in summary),
        timings=timings,
        fingerprint=config.fingerprint(),
    )


def run_corpus(
    corpus_path: str | Path,
    config: PipelineConfig,
    out_dir: str | Path,
    backends: Backends,
    limit: int | None = None,
    workers: int | None = None,
    bins: int = 10,
) -> dict:
    """Summarize a whole corpus and write summaries, metrics, position
    histogram (CSV + figure), and a run manifest to out_dir."""
    started = time.time()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    documents = load_corpus(corpus_path, limit=limit)

    results: dict[str, SummaryResult] = {}
    failures: dict[str, str] = {}
    skipped: list[str] = []

    def work(doc: Document):
        try:
            return doc.id, summarize_document(doc, config, backends), None
        except Exception as exc:  # per-document failures never abort the run
            log.exception("document %r failed", doc.id)
            return doc.id, None, str(exc)

    max_workers = workers or 1
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(work, documents))
    else:
        outcomes = [work(doc) for doc in documents]

    for doc_id, result, error in outcomes:
        if error is not None:
            failures[doc_id] = error
        elif result is None:
            skipped.append(doc_id)
        else:
            results[doc_id] = result

    summaries_path = out_dir / "summaries.jsonl"
    with summaries_path.open("w", encoding="utf-8") as fh:
        for doc_id in sorted(results):
            r = results[doc_id]
            fh.write(json.dumps({
                "article_id": r.article_id,
                "sentence_indices": list(r.sentence_indices),
                "sentences": list(r.sentences),
            }, ensure_ascii=False) + "\n")

    docs_by_id = {d.id: d for d in documents}
    system = f"ibsumm-{config.search_mode}"
    refs_present = any(d.reference for d in documents)
    if refs_present:
        row = evaluate_corpus(
            documents,
            {i: list(r.sentences) for i, r in results.items()},
            system=system,
        )
        write_metrics_csv([row], out_dir / "metrics.csv")

    hist = position_histogram(
        [(list(r.sentence_indices), len(docs_by_id[i].sentences))
         for i, r in sorted(results.items())],
        bins=bins,
    )
    write_histogram_csv(hist, out_dir / "positions.csv")
    render_position_histogram(hist, out_dir / "positions.png")

    manifest = {
        "version": __version__,
        "config": config.semantic_dict(),
        "fingerprint": config.fingerprint(),
        "corpus": str(corpus_path),
        "documents": len(documents),
        "summarized": len(results),
        "skipped": skipped,
        "failures": failures,
        "wall_time_s": round(time.time() - started, 3),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return manifest
