"""Entry point: ``monolog-server --port 8422 [--stub | --embed-model ...]``.

Models load once at startup; a load failure refuses to start with a nonzero
exit so /health never lies about readiness.
"""

from __future__ import annotations

import argparse
import sys

import uvicorn

from .app import ServerConfig, create_app


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monolog-server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8422)
    p.add_argument("--stub", action="store_true", help="serve the deterministic offline backend")
    p.add_argument("--embed-model", default=None, help="sentence-transformers model id/path")
    p.add_argument("--paraphrase-model", default=None, help="transformers text-classification model id/path")
    p.add_argument("--parse-model", default=None, help="stanza package name for dependency parsing")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--device", default="cpu")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ServerConfig(
        host=args.host,
        port=args.port,
        stub=args.stub,
        embed_model=args.embed_model,
        paraphrase_model=args.paraphrase_model,
        parse_model=args.parse_model,
        batch_size=args.batch_size,
        device=args.device,
    )
    if not cfg.stub and not (cfg.embed_model or cfg.paraphrase_model or cfg.parse_model):
        print("error: configure at least one model or pass --stub", file=sys.stderr)
        return 2
    try:
        app = create_app(cfg)
    except Exception as exc:  # model load failure: refuse to start
        print(f"error: model load failed: {exc}", file=sys.stderr)
        return 1
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
