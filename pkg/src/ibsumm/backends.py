"""Scoring backends: sentence embeddings, next-sentence probability, and
category classification.

Two implementations per contract: deterministic offline fallbacks (hermetic,
used by the test suite and for laptop-scale runs) and an HTTP client for the
remote model server.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .corpus import tokenize

log = logging.getLogger(__name__)

PROB_FLOOR = 1e-6  # remote probabilities are clamped before any downstream log


class BackendError(Exception):
    """Retriable backend failure (transport, timeout)."""


class ContractViolation(BackendError):
    """The backend returned something that breaks its contract; fatal."""


@dataclass
class BackendConfig:
    mode: str = "offline"  # "offline" or "remote"
    endpoint: str | None = None
    embedding_file: str | Path | None = None
    timeout: float = 30.0
    batch_size: int = 32

    def validate(self) -> None:
        if self.mode not in ("offline", "remote"):
            raise ValueError(f"unknown backend mode {self.mode!r}")
        if self.mode == "remote" and not self.endpoint:
            raise ValueError("remote mode requires an endpoint")
        if self.mode == "offline" and not self.embedding_file:
            raise ValueError("offline mode requires an embedding file")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0.0 when either vector has zero norm."""
    if u.shape != v.shape:
        raise ContractViolation(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def load_word_vectors(path: str | Path) -> tuple[dict[str, np.ndarray], int]:
    """Read a static word-vector file: one line per word, token followed by
    whitespace-separated decimal components."""
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, values = parts[0], parts[1:]
            vec = np.array([float(x) for x in values], dtype=np.float64)
            if dim is None:
                dim = vec.size
            elif vec.size != dim:
                raise ContractViolation(
                    f"{path}:{lineno}: vector dim {vec.size} != {dim}"
                )
            if not np.all(np.isfinite(vec)):
                raise ContractViolation(f"{path}:{lineno}: non-finite component")
            vectors[token] = vec
    if not vectors:
        raise ContractViolation(f"{path}: empty embedding file")
    assert dim is not None
    return vectors, dim


class OfflineEmbeddingBackend:
    """Mean of per-token static vectors; OOV tokens are skipped and an
    all-OOV or empty text maps to the zero vector."""

    def __init__(self, embedding_file: str | Path):
        self.vectors, self.dim = load_word_vectors(embedding_file)

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        if not texts:
            raise ValueError("texts must be non-empty")
        out = []
        for text in texts:
            hits = [self.vectors[t] for t in tokenize(text) if t in self.vectors]
            if hits:
                out.append(np.mean(hits, axis=0))
            else:
                out.append(np.zeros(self.dim, dtype=np.float64))
        return out


class OfflineNspBackend:
    """Next-sentence probability from clamped Jaccard overlap of the two
    sentences' non-stopword token sets: p = clamp(0.01 + 0.98*J, 0.01, 0.99)."""

    def __init__(self, stopwords: frozenset[str]):
        self.stopwords = stopwords

    def _content(self, text: str) -> frozenset[str]:
        return frozenset(t for t in tokenize(text) if t not in self.stopwords)

    def nsp(self, pairs: list[tuple[str, str]]) -> list[float]:
        if not pairs:
            raise ValueError("pairs must be non-empty")
        probs = []
        for a, b in pairs:
            sa, sb = self._content(a), self._content(b)
            union = sa | sb
            j = len(sa & sb) / len(union) if union else 0.0
            probs.append(min(max(0.01 + 0.98 * j, 0.01), 0.99))
        return probs


class OfflineClassifyBackend:
    """Uniform-distribution stub: deterministic but content-free, so
    multi-view runs against it are flagged."""

    is_stub = True

    def __init__(self, labels: list[str]):
        if not labels:
            raise ValueError("label set must be non-empty")
        self.labels = list(labels)

    def classify(self, texts: list[str]) -> list[np.ndarray]:
        if not texts:
            raise ValueError("texts must be non-empty")
        uniform = np.full(len(self.labels), 1.0 / len(self.labels))
        return [uniform.copy() for _ in texts]


class RemoteBackend:
    """HTTP client for the model server (POST /embed, /nsp, /classify).

    Requests are chunked to batch_size and retried twice with exponential
    backoff; probabilities are clamped away from 0 and 1 before use.
    """

    is_stub = False
    RETRIES = 2

    def __init__(self, config: BackendConfig, session: requests.Session | None = None):
        config.validate()
        if config.mode != "remote":
            raise ValueError("RemoteBackend requires mode='remote'")
        self.config = config
        self.session = session or requests.Session()
        self.labels: list[str] | None = None
        self._dim: int | None = None

    def _post(self, route: str, payload: dict) -> dict:
        url = self.config.endpoint.rstrip("/") + route
        delay = 0.5
        for attempt in range(self.RETRIES + 1):
            try:
                resp = self.session.post(url, json=payload, timeout=self.config.timeout)
                resp.raise_for_status()
                return resp.json()
            except (requests.RequestException, ValueError) as exc:
                if attempt == self.RETRIES:
                    raise BackendError(f"{url}: {exc}") from exc
                log.warning("%s failed (%s), retrying", url, exc)
                time.sleep(delay)
                delay *= 2

    def health(self) -> dict:
        url = self.config.endpoint.rstrip("/") + "/health"
        try:
            resp = self.session.get(url, timeout=self.config.timeout)
            resp.raise_for_status()
            return resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise BackendError(f"{url}: {exc}") from exc

    def _batches(self, items: list):
        size = self.config.batch_size
        for i in range(0, len(items), size):
            yield items[i:i + size]

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        if not texts:
            raise ValueError("texts must be non-empty")
        out: list[np.ndarray] = []
        for batch in self._batches(texts):
            body = self._post("/embed", {"texts": batch})
            vectors = body.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(batch):
                raise ContractViolation(
                    f"/embed returned {len(vectors) if isinstance(vectors, list) else '?'}"
                    f" vectors for {len(batch)} texts"
                )
            for vec in vectors:
                arr = np.asarray(vec, dtype=np.float64)
                if self._dim is None:
                    self._dim = arr.size
                elif arr.size != self._dim:
                    raise ContractViolation(
                        f"/embed dim changed: {arr.size} != {self._dim}"
                    )
                if not np.all(np.isfinite(arr)):
                    raise ContractViolation("/embed returned non-finite values")
                out.append(arr)
        return out

    def nsp(self, pairs: list[tuple[str, str]]) -> list[float]:
        if not pairs:
            raise ValueError("pairs must be non-empty")
        out: list[float] = []
        for batch in self._batches(list(pairs)):
            body = self._post("/nsp", {"pairs": [list(p) for p in batch]})
            probs = body.get("probs")
            if not isinstance(probs, list) or len(probs) != len(batch):
                raise ContractViolation("/nsp response length mismatch")
            out.extend(min(max(float(p), PROB_FLOOR), 1.0 - PROB_FLOOR) for p in probs)
        return out

    def classify(self, texts: list[str]) -> list[np.ndarray]:
        if not texts:
            raise ValueError("texts must be non-empty")
        out: list[np.ndarray] = []
        for batch in self._batches(texts):
            body = self._post("/classify", {"texts": batch})
            probs = body.get("probs")
            labels = body.get("labels")
            if not isinstance(probs, list) or len(probs) != len(batch):
                raise ContractViolation("/classify response length mismatch")
            if self.labels is None:
                self.labels = list(labels or [])
            elif labels and list(labels) != self.labels:
                raise ContractViolation("/classify label set changed between calls")
            for dist in probs:
                arr = np.asarray(dist, dtype=np.float64)
                if abs(float(arr.sum()) - 1.0) > 1e-6:
                    raise ContractViolation("/classify distribution does not sum to 1")
                out.append(arr)
        return out


@dataclass
class Backends:
    """The three scoring services a pipeline run needs."""
    embedder: OfflineEmbeddingBackend | RemoteBackend
    nsp: OfflineNspBackend | RemoteBackend
    classifier: OfflineClassifyBackend | RemoteBackend


def make_backends(
    config: BackendConfig,
    stopwords: frozenset[str],
    labels: list[str] | None = None,
) -> Backends:
    config.validate()
    if config.mode == "offline":
        return Backends(
            embedder=OfflineEmbeddingBackend(config.embedding_file),
            nsp=OfflineNspBackend(stopwords),
            classifier=OfflineClassifyBackend(labels or ["unknown"]),
        )
    remote = RemoteBackend(config)
    return Backends(embedder=remote, nsp=remote, classifier=remote)
