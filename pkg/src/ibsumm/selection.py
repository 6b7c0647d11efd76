"""Content selection: score sentences against the signal views and keep the
top N, re-sorted by document position.

The relevance term for a view is p * log(p) with p clamped into [eps, 1]
(cosine affinities can be non-positive and log needs p > 0).  An alternative
"similarity-sum" ranking mode scores the keyword view as the plain sum of
cosine affinities instead; both are exposed because they order sentences
differently (x*log(x) is non-monotonic with its minimum at 1/e).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .backends import cosine
from .corpus import Document, Sentence, filter_by_length
from .keyphrase import Keyphrase

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-2

RANKING_MODES = ("eq4", "similarity-sum")


@dataclass(frozen=True)
class ViewScore:
    view_id: str
    p: float          # clamped probability / mean affinity (diagnostic)
    contribution: float


@dataclass(frozen=True)
class ScoredSentence:
    sentence: Sentence
    view_scores: tuple[ViewScore, ...]
    total: float


@dataclass(frozen=True)
class CandidateSet:
    members: tuple[ScoredSentence, ...]  # sorted by sentence index
    n_requested: int

    @property
    def texts(self) -> list[str]:
        return [m.sentence.text for m in self.members]

    @property
    def indices(self) -> list[int]:
        return [m.sentence.index for m in self.members]


def _clamp(p: float, epsilon: float) -> float:
    return min(max(p, epsilon), 1.0)


def _plogp(p: float) -> float:
    return p * math.log(p)


def keyword_view(
    sentence_vec: np.ndarray,
    keyphrase_vecs: list[np.ndarray],
    epsilon: float = DEFAULT_EPSILON,
    mode: str = "eq4",
) -> ViewScore:
    """Keyword-view score for one sentence.

    Each keyphrase contributes p*log(p) of its clamped cosine affinity
    ("eq4" mode) or the clamped affinity itself ("similarity-sum" mode).
    The stored p is the mean affinity, kept for diagnostics only.
    """
    if not keyphrase_vecs:
        raise ValueError("keyphrase_vecs must be non-empty")
    if mode not in RANKING_MODES:
        raise ValueError(f"unknown ranking mode {mode!r}")
    ps = [_clamp(cosine(sentence_vec, kv), epsilon) for kv in keyphrase_vecs]
    if mode == "eq4":
        contribution = sum(_plogp(p) for p in ps)
    else:
        contribution = sum(ps)
    return ViewScore(view_id="keywords", p=sum(ps) / len(ps), contribution=contribution)


def category_view(
    class_probs: np.ndarray,
    labels: list[str],
    target_label: str | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> ViewScore:
    """Category-view score: p*log(p) of the target label's probability, or of
    the maximum-probability class when no target is given."""
    total = float(np.sum(class_probs))
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"class distribution sums to {total}, not 1")
    if target_label is not None:
        if target_label not in labels:
            raise ValueError(f"target label {target_label!r} not in label set")
        p = float(class_probs[labels.index(target_label)])
    else:
        p = float(np.max(class_probs))
    p = _clamp(p, epsilon)
    return ViewScore(view_id="category", p=p, contribution=_plogp(p))


def score_sentences(
    document: Document,
    embedder,
    keyphrases: list[Keyphrase],
    alpha: float = 0.0,
    beta: float = 1.0,
    epsilon: float = DEFAULT_EPSILON,
    ranking_mode: str = "eq4",
    min_words: int = 8,
    max_words: int = 80,
    classifier=None,
    labels: list[str] | None = None,
    target_label: str | None = None,
) -> list[ScoredSentence]:
    """Score every admissible sentence of the document.

    total = alpha * category contribution + beta * keyword contribution.
    The category view is only evaluated when a classifier is passed.
    """
    admissible = filter_by_length(document.sentences, min_words, max_words)
    if not admissible:
        log.warning("document %r: no admissible sentences", document.id)
        return []
    if not keyphrases:
        log.warning("document %r: empty keyphrase list, keyword view skipped",
                    document.id)

    texts = [s.text for s in admissible]
    phrase_texts = [kp.text for kp in keyphrases]
    vectors = embedder.embed(texts + phrase_texts)
    sentence_vecs = vectors[:len(texts)]
    keyphrase_vecs = vectors[len(texts):]

    category_scores: list[ViewScore] | None = None
    if classifier is not None:
        if labels is None:
            labels = getattr(classifier, "labels", None) or []
        dists = classifier.classify(texts)
        category_scores = [
            category_view(d, labels, target_label, epsilon) for d in dists
        ]

    scored = []
    for i, sentence in enumerate(admissible):
        views = []
        total = 0.0
        if keyphrases:
            kw = keyword_view(sentence_vecs[i], keyphrase_vecs, epsilon, ranking_mode)
            views.append(kw)
            total += beta * kw.contribution
        if category_scores is not None:
            cat = category_scores[i]
            views.append(cat)
            total += alpha * cat.contribution
        scored.append(ScoredSentence(sentence=sentence,
                                     view_scores=tuple(views),
                                     total=total))
    return scored


def select_top_n(scored: list[ScoredSentence], n: int) -> CandidateSet:
    """The n highest-totalling sentences (ties to the smaller index), then
    re-sorted by original document position."""
    if not scored:
        raise ValueError("scored must be non-empty")
    if n < 1:
        raise ValueError("n must be positive")
    by_score = sorted(scored, key=lambda s: (-s.total, s.sentence.index))
    chosen = sorted(by_score[:n], key=lambda s: s.sentence.index)
    return CandidateSet(members=tuple(chosen), n_requested=n)
