"""ROUGE-1/2/L F1 scoring, oracle and lead-k reference summarizers, and the
sentence-position histogram."""

from __future__ import annotations

import csv
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import Document, Sentence, tokenize

log = logging.getLogger(__name__)

Tokens = tuple[str, ...]


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def _score(overlap: float, cand_total: int, ref_total: int) -> RougeScore:
    p = overlap / cand_total if cand_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return RougeScore(precision=p, recall=r, f1=f1)


_SUFFIXES = ("ational", "iveness", "fulness", "ousness", "ization", "ations",
             "ingly", "ement", "ments", "edly", "ment", "ness",
             "ions", "ing", "ies", "ed", "es", "s")


def light_stem(token: str) -> str:
    """Cheap suffix stripper used when the stemming flag is on."""
    for suffix in _SUFFIXES:
        if token.endswith(suffix) and len(token) - len(suffix) >= 3:
            return token[:-len(suffix)]
    return token


def _maybe_stem(tokens: Tokens, stemming: bool) -> Tokens:
    return tuple(light_stem(t) for t in tokens) if stemming else tuple(tokens)


def rouge_n(candidate: Tokens, reference: Tokens, n: int,
            stemming: bool = False) -> RougeScore:
    """Clipped n-gram overlap F1 for n in {1, 2}."""
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    candidate = _maybe_stem(candidate, stemming)
    reference = _maybe_stem(reference, stemming)
    cand_grams = Counter(zip(*(candidate[i:] for i in range(n))))
    ref_grams = Counter(zip(*(reference[i:] for i in range(n))))
    overlap = sum((cand_grams & ref_grams).values())
    return _score(overlap, sum(cand_grams.values()), sum(ref_grams.values()))


def _lcs_length(a: Tokens, b: Tokens) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: Tokens, reference: Tokens,
            stemming: bool = False) -> RougeScore:
    """Longest-common-subsequence F1 over the full token sequences."""
    candidate = _maybe_stem(candidate, stemming)
    reference = _maybe_stem(reference, stemming)
    lcs = _lcs_length(candidate, reference)
    return _score(lcs, len(candidate), len(reference))


def _flat_tokens(sentences) -> Tokens:
    out: list[str] = []
    for s in sentences:
        out.extend(s.tokens)
    return tuple(out)


def oracle_extract(document: Document, max_sentences: int = 10) -> list[Sentence]:
    """Greedy extractive upper bound: repeatedly add the sentence that most
    improves mean(ROUGE-1 F1, ROUGE-2 F1) against the reference abstract."""
    if not document.reference:
        raise ValueError(f"document {document.id!r} has no reference")
    ref = _flat_tokens(document.reference)

    def mean_rouge(tokens: Tokens) -> float:
        return (rouge_n(tokens, ref, 1).f1 + rouge_n(tokens, ref, 2).f1) / 2

    chosen: list[Sentence] = []
    best_score = 0.0
    remaining = list(document.sentences)
    while remaining and len(chosen) < max_sentences:
        best_gain = None
        for sentence in remaining:
            trial = sorted(chosen + [sentence], key=lambda s: s.index)
            score = mean_rouge(_flat_tokens(trial))
            if score > best_score and (best_gain is None or score > best_gain[0]):
                best_gain = (score, sentence)
        if best_gain is None:
            break
        best_score, picked = best_gain
        chosen.append(picked)
        remaining.remove(picked)
    return sorted(chosen, key=lambda s: s.index)


def lead_k(document: Document, k: int = 3) -> list[Sentence]:
    """The first min(k, len) sentences of the document."""
    return list(document.sentences[:k])


@dataclass(frozen=True)
class PositionHistogram:
    bins: int
    mass: tuple[float, ...]


def position_histogram(
    summaries: list[tuple[list[int], int]],
    bins: int = 10,
) -> PositionHistogram:
    """Distribution of summary-sentence positions relative to their source
    document length.  Each (indices, doc_length) pair contributes one count
    per sentence to bin floor(bins * index / doc_length), clamped to the
    final bin."""
    if bins < 1:
        raise ValueError("bins must be positive")
    counts = [0] * bins
    total = 0
    for indices, doc_len in summaries:
        if doc_len < 1:
            continue
        for idx in indices:
            b = min(bins * idx // doc_len, bins - 1)
            counts[b] += 1
            total += 1
    if total == 0:
        log.warning("position histogram built from zero sentences")
        return PositionHistogram(bins=bins, mass=tuple(0.0 for _ in counts))
    return PositionHistogram(bins=bins, mass=tuple(c / total for c in counts))


def write_histogram_csv(histogram: PositionHistogram, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin", "mass"])
        for i, mass in enumerate(histogram.mass):
            writer.writerow([i, f"{mass:.6f}"])


@dataclass(frozen=True)
class MetricsRow:
    system: str
    rouge1_f1: float
    rouge2_f1: float
    rougeL_f1: float
    num_docs: int


def evaluate_corpus(
    documents: list[Document],
    summaries: dict[str, list[str]],
    system: str = "system",
    stemming: bool = False,
) -> MetricsRow:
    """Corpus-level mean of per-document ROUGE-1/2/L F1.

    `summaries` maps article id to summary sentence texts.  Documents without
    a reference or without a summary are skipped with a logged count.
    """
    r1 = r2 = rl = 0.0
    n = 0
    skipped = 0
    for doc in sorted(documents, key=lambda d: d.id):
        if not doc.reference or doc.id not in summaries:
            skipped += 1
            continue
        cand = tuple(t for text in summaries[doc.id] for t in tokenize(text))
        ref = _flat_tokens(doc.reference)
        r1 += rouge_n(cand, ref, 1, stemming).f1
        r2 += rouge_n(cand, ref, 2, stemming).f1
        rl += rouge_l(cand, ref, stemming).f1
        n += 1
    if skipped:
        log.warning("evaluation skipped %d documents (missing reference or summary)",
                    skipped)
    if n == 0:
        return MetricsRow(system, 0.0, 0.0, 0.0, 0)
    return MetricsRow(system, r1 / n, r2 / n, rl / n, n)


def write_metrics_csv(rows: list[MetricsRow], path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["system", "rouge1_f1", "rouge2_f1", "rougeL_f1", "num_docs"])
        for row in rows:
            writer.writerow([
                row.system,
                f"{row.rouge1_f1:.4f}",
                f"{row.rouge2_f1:.4f}",
                f"{row.rougeL_f1:.4f}",
                row.num_docs,
            ])
