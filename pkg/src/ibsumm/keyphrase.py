"""Keyphrase extraction via stopword-delimited candidates scored by word
degree over frequency (RAKE-style)."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .corpus import Document

Phrase = tuple[str, ...]


@dataclass(frozen=True)
class Keyphrase:
    words: Phrase
    score: float

    @property
    def text(self) -> str:
        return " ".join(self.words)


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    """Bundled static English stopword list; fixed so extraction is
    byte-for-byte reproducible across machines."""
    data = resources.files("ibsumm.data").joinpath("stopwords.txt").read_text()
    return frozenset(w for w in data.split() if w)


def extract_candidates(
    document_tokens: list[tuple[str, ...]],
    stopwords: frozenset[str] | set[str],
) -> list[Phrase]:
    """Maximal runs of consecutive non-stopword tokens within each sentence.

    Duplicates are preserved for frequency counting.  Purely numeric
    single-token runs are dropped (year-style tokens dominate otherwise).
    """
    if not stopwords:
        raise ValueError("stopword set must be non-empty")
    candidates: list[Phrase] = []
    for tokens in document_tokens:
        run: list[str] = []
        for tok in tokens + ("",):
            if tok and tok not in stopwords:
                run.append(tok)
            elif run:
                if not (len(run) == 1 and run[0].isdigit()):
                    candidates.append(tuple(run))
                run = []
    return candidates


def score_candidates(candidates: list[Phrase]) -> dict[Phrase, float]:
    """Score each distinct phrase as the sum of its word scores deg(w)/freq(w),
    with deg(w) = freq(w) + sum over containing candidates of (len - 1)."""
    freq: Counter[str] = Counter()
    deg: dict[str, int] = defaultdict(int)
    for cand in candidates:
        for word in cand:
            freq[word] += 1
            deg[word] += len(cand)  # freq contribution + (len - 1) extra
    scores: dict[Phrase, float] = {}
    for cand in candidates:
        if cand not in scores:
            scores[cand] = sum(deg[w] / freq[w] for w in cand)
    return scores


def top_keyphrases(
    document: Document,
    k: int = 10,
    stopwords: frozenset[str] | None = None,
    max_phrase_len: int | None = None,
    min_freq: int = 1,
) -> list[Keyphrase]:
    """The k highest-scoring distinct phrases from the article text (the
    reference abstract is excluded).

    Ties break by earlier first occurrence, then lexicographic order, so the
    top-k1 list is always a prefix of the top-k2 list for k1 <= k2.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    candidates = extract_candidates(
        [s.tokens for s in document.sentences], stopwords
    )
    if max_phrase_len is not None:
        candidates = [c for c in candidates if len(c) <= max_phrase_len]
    if not candidates:
        return []
    counts = Counter(candidates)
    first_seen: dict[Phrase, int] = {}
    for pos, cand in enumerate(candidates):
        first_seen.setdefault(cand, pos)
    scores = score_candidates(candidates)
    ranked = sorted(
        (p for p in scores if counts[p] >= min_freq),
        key=lambda p: (-scores[p], first_seen[p], p),
    )
    return [Keyphrase(words=p, score=scores[p]) for p in ranked[:k]]
