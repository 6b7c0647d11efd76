"""FastAPI application exposing /embed, /nsp, /classify, and /health."""

from __future__ import annotations

import logging

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .models import POOLING, ModelBundle, ServerConfig

log = logging.getLogger(__name__)


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class NspRequest(BaseModel):
    pairs: list[tuple[str, str]] = Field(min_length=1)


class ClassifyRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


def create_app(config: ServerConfig) -> FastAPI:
    bundle = ModelBundle(config)
    app = FastAPI(title="ibsumm model server")

    def check_batch(n: int) -> None:
        if n > config.max_batch:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {n} exceeds max_batch={config.max_batch}",
            )

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "embed_dim": bundle.embed_dim,
            "nsp": True,
            "classify": bundle.has_classifier,
            "pooling": POOLING,
        }

    @app.post("/embed")
    def embed(req: EmbedRequest):
        check_batch(len(req.texts))
        try:
            vectors, truncated = bundle.embed(req.texts)
        except Exception as exc:
            log.exception("/embed failed")
            raise HTTPException(status_code=500, detail=str(exc))
        return {"vectors": vectors, "dim": bundle.embed_dim,
                "truncated": truncated}

    @app.post("/nsp")
    def nsp(req: NspRequest):
        check_batch(len(req.pairs))
        try:
            probs, truncated = bundle.nsp(req.pairs)
        except Exception as exc:
            log.exception("/nsp failed")
            raise HTTPException(status_code=500, detail=str(exc))
        return {"probs": probs, "truncated": truncated}

    @app.post("/classify")
    def classify(req: ClassifyRequest):
        if not bundle.has_classifier:
            raise HTTPException(status_code=501, detail="no classifier loaded")
        check_batch(len(req.texts))
        try:
            probs, truncated = bundle.classify(req.texts)
        except Exception as exc:
            log.exception("/classify failed")
            raise HTTPException(status_code=500, detail=str(exc))
        return {"probs": probs, "labels": bundle.labels, "truncated": truncated}

    return app
