"""FastAPI application implementing the scoring wire protocol.

Endpoints: POST /embed, /word-similarity, /paraphrase, /parse and GET
/health.  Each model is optional; /health reports which are loaded and
returns 503 until at least one is.  In ``--stub`` mode the deterministic
offline scorer (and a naive projective parser) serve the same protocol,
byte-compatible with the in-process backend, so integration tests need no
model downloads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from monolog.kb import load_bundled_kb
from monolog.scoring import OfflineScorer

STUB_DETS = {"a", "an", "the", "every", "all", "each", "some", "no", "most", "many", "several", "few"}


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8422
    stub: bool = False
    embed_model: str | None = None
    paraphrase_model: str | None = None
    parse_model: str | None = None
    batch_size: int = 32
    device: str = "cpu"


@dataclass
class ModelRegistry:
    """Loaded callables; anything left as None is reported unavailable."""

    embed: object | None = None           # list[str] -> list[list[float]]
    word_similarity: object | None = None  # list[pair] -> list[float]
    paraphrase: object | None = None       # list[pair] -> list[float]
    parse: object | None = None            # list[str] -> list[str]
    names: dict = field(default_factory=dict)

    def loaded(self) -> dict:
        return {
            "embed": self.names.get("embed") if self.embed else None,
            "word-similarity": self.names.get("word-similarity") if self.word_similarity else None,
            "paraphrase": self.names.get("paraphrase") if self.paraphrase else None,
            "parse": self.names.get("parse") if self.parse else None,
        }

    def any_loaded(self) -> bool:
        return any((self.embed, self.word_similarity, self.paraphrase, self.parse))


def _stub_parse_one(text: str) -> str:
    """Deterministic flat parse: last token is the root, the first token is
    its subject.  Valid for the engine's CoNLL-U ingestion contract."""
    words = text.split()
    lines = [f"# text = {text}"]
    n = len(words)
    for i, w in enumerate(words, start=1):
        lemma = w.lower()
        if i == n:
            upos, head, rel = "VERB", 0, "root"
        elif lemma in STUB_DETS:
            upos, head, rel = "DET", min(i + 1, n), "det"
        elif i == 1:
            upos, head, rel = "NOUN", n, "nsubj"
        else:
            upos, head, rel = "NOUN", n, "dep"
        lines.append("\t".join([str(i), w, lemma, upos, "_", "_", str(head), rel, "_", "_"]))
    return "\n".join(lines) + "\n"


def build_stub_registry() -> ModelRegistry:
    scorer = OfflineScorer(kb=load_bundled_kb())

    def embed(texts):
        return [[float(x) for x in scorer.embed(t)] for t in texts]

    def wsim(pairs):
        return [float(scorer.word_similarity(a, b)) for a, b in pairs]

    def para(pairs):
        return [float(scorer.paraphrase_prob(a, b)) for a, b in pairs]

    def parse(texts):
        return [_stub_parse_one(t) for t in texts]

    return ModelRegistry(
        embed=embed,
        word_similarity=wsim,
        paraphrase=para,
        parse=parse,
        names={k: "offline-deterministic-stub" for k in ("embed", "word-similarity", "paraphrase", "parse")},
    )


def build_model_registry(cfg: ServerConfig) -> ModelRegistry:
    """Load the configured pretrained models eagerly; failures abort startup."""
    reg = ModelRegistry()
    if cfg.embed_model:
        from sentence_transformers import SentenceTransformer  # deferred heavy import

        model = SentenceTransformer(cfg.embed_model, device=cfg.device)

        def embed(texts, model=model):
            vecs = model.encode(texts, batch_size=cfg.batch_size, convert_to_numpy=True)
            return [[float(x) for x in v] for v in vecs]

        def wsim(pairs, model=model):
            import numpy as np

            out = []
            for a, b in pairs:
                va, vb = model.encode([a, b], convert_to_numpy=True)
                denom = float(np.linalg.norm(va) * np.linalg.norm(vb)) or 1.0
                cos = float(va @ vb) / denom
                out.append(max(0.0, min(1.0, (cos + 1.0) / 2.0)))
            return out

        reg.embed = embed
        reg.word_similarity = wsim
        reg.names["embed"] = cfg.embed_model
        reg.names["word-similarity"] = cfg.embed_model
    if cfg.paraphrase_model:
        from transformers import pipeline  # deferred heavy import

        clf = pipeline("text-classification", model=cfg.paraphrase_model, device=-1, top_k=None)

        def para(pairs, clf=clf):
            probs = []
            for a, b in pairs:
                scores = clf({"text": a, "text_pair": b})
                by_label = {s["label"].lower(): s["score"] for s in scores}
                prob = by_label.get("label_1", by_label.get("equivalent", by_label.get("paraphrase")))
                probs.append(float(prob if prob is not None else max(by_label.values())))
            return probs

        reg.paraphrase = para
        reg.names["paraphrase"] = cfg.paraphrase_model
    if cfg.parse_model:
        import stanza  # deferred heavy import

        nlp = stanza.Pipeline(lang="en", package=cfg.parse_model, processors="tokenize,pos,lemma,depparse")

        def parse(texts, nlp=nlp):
            from stanza.utils.conll import CoNLL

            return ["{}\n".format(CoNLL.doc2conll_text(nlp(t)).strip()) for t in texts]

        reg.parse = parse
        reg.names["parse"] = cfg.parse_model
    return reg


def _json(payload, status: int = 200) -> JSONResponse:
    return JSONResponse(content=payload, status_code=status)


def _bad_request(message: str) -> JSONResponse:
    return _json({"error": message}, status=400)


async def _read_list(request: Request, key: str, pair: bool):
    try:
        body = await request.json()
    except Exception:
        return None, _bad_request("body is not valid JSON")
    if not isinstance(body, dict) or key not in body or not isinstance(body[key], list):
        return None, _bad_request(f"body must be an object with a {key!r} list")
    items = body[key]
    if pair:
        if not all(isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in items):
            return None, _bad_request(f"{key!r} must be a list of [string, string] pairs")
        items = [tuple(p) for p in items]
    else:
        if not all(isinstance(t, str) for t in items):
            return None, _bad_request(f"{key!r} must be a list of strings")
    return items, None


def _batched(fn, items, batch_size):
    out = []
    for i in range(0, len(items), batch_size):
        out.extend(fn(items[i : i + batch_size]))
    return out


def create_app(cfg: ServerConfig, registry: ModelRegistry | None = None) -> FastAPI:
    app = FastAPI(title="monolog-server")
    if registry is None:
        registry = build_stub_registry() if cfg.stub else build_model_registry(cfg)
    app.state.registry = registry
    app.state.config = cfg

    @app.get("/health")
    async def health():
        if not registry.any_loaded():
            return _json({"status": "loading", "models": registry.loaded()}, status=503)
        return _json({"status": "ok", "models": registry.loaded()})

    @app.post("/embed")
    async def embed(request: Request):
        if registry.embed is None:
            return _json({"error": "no embedding model loaded"}, status=503)
        texts, err = await _read_list(request, "texts", pair=False)
        if err is not None:
            return err
        vectors = _batched(registry.embed, texts, cfg.batch_size)
        dim = len(vectors[0]) if vectors else 0
        return _json({"vectors": vectors, "dim": dim})

    @app.post("/word-similarity")
    async def word_similarity(request: Request):
        if registry.word_similarity is None:
            return _json({"error": "no word-similarity model loaded"}, status=503)
        pairs, err = await _read_list(request, "pairs", pair=True)
        if err is not None:
            return err
        return _json({"scores": _batched(registry.word_similarity, pairs, cfg.batch_size)})

    @app.post("/paraphrase")
    async def paraphrase(request: Request):
        if registry.paraphrase is None:
            return _json({"error": "no paraphrase model loaded"}, status=503)
        pairs, err = await _read_list(request, "pairs", pair=True)
        if err is not None:
            return err
        return _json({"probs": _batched(registry.paraphrase, pairs, cfg.batch_size)})

    @app.post("/parse")
    async def parse(request: Request):
        if registry.parse is None:
            return _json({"error": "no parser loaded"}, status=503)
        texts, err = await _read_list(request, "texts", pair=False)
        if err is not None:
            return err
        out = []
        for t in texts:
            if not t.strip():
                out.append("")  # per-item error entry: empty input has no parse
                continue
            out.extend(registry.parse([t]))
        return _json({"conllu": out})

    return app
