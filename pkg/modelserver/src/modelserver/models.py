"""Checkpoint loading and batched inference.

Embeddings are the mean of all final-layer token representations, special
tokens included ("mean-all-tokens", reported via /health).  Inputs longer
than the encoder's maximum length are truncated; the truncation count is
reported in response metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from transformers import (
    AutoModel,
    AutoModelForNextSentencePrediction,
    AutoModelForSequenceClassification,
    AutoTokenizer,
)

POOLING = "mean-all-tokens"
PROB_EPS = 1e-6


@dataclass
class ServerConfig:
    embed_model: str
    nsp_model: str
    classifier: str | None = None
    device: str = "cpu"
    max_batch: int = 64
    port: int = 8500


class ModelBundle:
    """Loaded checkpoints plus their tokenizers; refuses to construct if the
    embedding or NSP model cannot be loaded."""

    def __init__(self, config: ServerConfig):
        self.config = config
        self.device = torch.device(config.device)
        self.embed_tokenizer = AutoTokenizer.from_pretrained(config.embed_model)
        self.embed_model = AutoModel.from_pretrained(config.embed_model)
        self.embed_model.to(self.device).eval()
        self.nsp_tokenizer = AutoTokenizer.from_pretrained(config.nsp_model)
        self.nsp_model = AutoModelForNextSentencePrediction.from_pretrained(
            config.nsp_model
        )
        self.nsp_model.to(self.device).eval()

        self.classify_tokenizer = None
        self.classify_model = None
        self.labels: list[str] = []
        if config.classifier:
            self.classify_tokenizer = AutoTokenizer.from_pretrained(config.classifier)
            self.classify_model = AutoModelForSequenceClassification.from_pretrained(
                config.classifier
            )
            self.classify_model.to(self.device).eval()
            id2label = self.classify_model.config.id2label
            self.labels = [id2label[i] for i in sorted(id2label)]

    @property
    def embed_dim(self) -> int:
        return int(self.embed_model.config.hidden_size)

    @property
    def has_classifier(self) -> bool:
        return self.classify_model is not None

    def _count_truncated(self, tokenizer, texts, pairs=None) -> int:
        limit = tokenizer.model_max_length
        if pairs is None:
            lengths = [len(ids) for ids in tokenizer(list(texts))["input_ids"]]
        else:
            a, b = zip(*pairs)
            lengths = [len(ids) for ids in tokenizer(list(a), list(b))["input_ids"]]
        return sum(1 for n in lengths if n > limit)

    @torch.no_grad()
    def embed(self, texts: list[str]) -> tuple[list[list[float]], int]:
        truncated = self._count_truncated(self.embed_tokenizer, texts)
        enc = self.embed_tokenizer(
            texts, padding=True, truncation=True, return_tensors="pt"
        ).to(self.device)
        hidden = self.embed_model(**enc).last_hidden_state
        mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
        pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
        return pooled.cpu().tolist(), truncated

    @torch.no_grad()
    def nsp(self, pairs: list[tuple[str, str]]) -> tuple[list[float], int]:
        truncated = self._count_truncated(self.nsp_tokenizer, None, pairs=pairs)
        first = [a for a, _ in pairs]
        second = [b for _, b in pairs]
        enc = self.nsp_tokenizer(
            first, second, padding=True, truncation=True, return_tensors="pt"
        ).to(self.device)
        logits = self.nsp_model(**enc).logits
        # class 0 is the "is next sentence" label
        probs = torch.softmax(logits, dim=-1)[:, 0]
        probs = probs.clamp(PROB_EPS, 1.0 - PROB_EPS)
        return probs.cpu().tolist(), truncated

    @torch.no_grad()
    def classify(self, texts: list[str]) -> tuple[list[list[float]], int]:
        assert self.classify_model is not None
        truncated = self._count_truncated(self.classify_tokenizer, texts)
        enc = self.classify_tokenizer(
            texts, padding=True, truncation=True, return_tensors="pt"
        ).to(self.device)
        logits = self.classify_model(**enc).logits
        probs = torch.softmax(logits, dim=-1)
        return probs.cpu().tolist(), truncated
