"""Launch the inference server."""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .models import ServerConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ibsumm-modelserver")
    parser.add_argument("--embed-model", required=True,
                        help="encoder checkpoint id or path for /embed")
    parser.add_argument("--nsp-model", required=True,
                        help="next-sentence-prediction checkpoint id or path")
    parser.add_argument("--classifier", default=None,
                        help="sequence-classification checkpoint (optional; "
                             "/classify returns 501 without it)")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--max-batch", type=int, default=64)
    parser.add_argument("--port", type=int, default=8500)
    parser.add_argument("--host", default="127.0.0.1")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = ServerConfig(
        embed_model=args.embed_model,
        nsp_model=args.nsp_model,
        classifier=args.classifier,
        device=args.device,
        max_batch=args.max_batch,
        port=args.port,
    )
    uvicorn.run(create_app(config), host=args.host, port=config.port,
                log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
