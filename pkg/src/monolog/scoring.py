"""Scorer backends: sentence embeddings, word similarity, paraphrase probability.

The offline backend is deterministic and network-free so the whole engine
can be tested hermetically; the remote backend speaks a small JSON/HTTP
protocol to a model server.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field

import numpy as np
import requests

from .kb import KnowledgeBase


class ScoringError(RuntimeError):
    """A backend could not produce a score (network failure, bad response)."""


EMBED_DIM = 256


def _stable_hash(word: str) -> int:
    return int.from_bytes(hashlib.sha1(word.encode("utf-8")).digest()[:8], "big")


@dataclass
class OfflineScorer:
    """Deterministic lexical scorer.

    Embeddings are L2-normalized signed bag-of-words hashes (dimension 256),
    so distances satisfy the metric axioms but word order is invisible.
    Paraphrase scores use synonym-matched Jaccard overlap, with an optional
    pinned table for fixture pairs.
    """

    kb: KnowledgeBase | None = None
    paraphrase_table: dict[tuple[str, str], float] = field(default_factory=dict)
    dim: int = EMBED_DIM

    @property
    def kind(self) -> str:
        return "offline-deterministic"

    def embed(self, text: str) -> np.ndarray:
        words = text.lower().split()
        if not words:
            raise ValueError("cannot embed empty text")
        vec = np.zeros(self.dim, dtype=np.float64)
        for w in words:
            h = _stable_hash(w)
            idx = h % self.dim
            sign = 1.0 if (h >> 20) & 1 else -1.0
            vec[idx] += sign
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec /= norm
        return vec

    def word_similarity(self, w1: str, w2: str, pos1: str | None = None, pos2: str | None = None) -> float:
        a, b = w1.lower(), w2.lower()
        if a == b:
            return 1.0
        if self.kb is not None and self.kb.are_synonyms(a, b):
            return 0.9
        if pos1 is not None and pos2 is not None and pos1 == pos2:
            return 0.2
        return 0.0

    def _synonym_match(self, a: str, b: str) -> bool:
        return a == b or (self.kb is not None and self.kb.are_synonyms(a, b))

    def paraphrase_prob(self, a: str, b: str) -> float:
        if not a or not b:
            raise ValueError("cannot score empty chunks")
        ka, kb_ = a.lower().strip(), b.lower().strip()
        pinned = self.paraphrase_table.get((ka, kb_), self.paraphrase_table.get((kb_, ka)))
        if pinned is not None:
            return float(pinned)
        set_a = set(ka.split())
        set_b = set(kb_.split())
        matched = 0
        remaining = set(set_b)
        for wa in set_a:
            hit = next((wb for wb in remaining if self._synonym_match(wa, wb)), None)
            if hit is not None:
                matched += 1
                remaining.discard(hit)
        union = len(set_a) + len(set_b) - matched
        return matched / union if union else 1.0


class RemoteScorer:
    """Client for the JSON/HTTP scoring protocol.

    Calls are batched per request, cached per (operation, inputs) within the
    run, bounded to a fixed number of in-flight requests, and retried once
    on timeout.  Failures raise ScoringError; callers decide whether to
    degrade or abort.
    """

    def __init__(self, base_url: str, timeout_ms: int = 5000, max_inflight: int = 8):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout_ms / 1000.0
        self._sem = threading.BoundedSemaphore(max_inflight)
        self._cache: dict[tuple, object] = {}
        self._lock = threading.Lock()
        self._session = requests.Session()

    @property
    def kind(self) -> str:
        return "remote"

    def _post(self, endpoint: str, body: dict) -> dict:
        url = f"{self.base_url}{endpoint}"
        for attempt in (0, 1):
            try:
                with self._sem:
                    resp = self._session.post(url, json=body, timeout=self.timeout)
                if resp.status_code != 200:
                    raise ScoringError(f"{endpoint} returned HTTP {resp.status_code}")
                return resp.json()
            except requests.Timeout:
                if attempt == 1:
                    raise ScoringError(f"{endpoint} timed out twice") from None
            except requests.RequestException as exc:
                raise ScoringError(f"{endpoint} failed: {exc}") from None
        raise ScoringError(f"{endpoint} failed")  # pragma: no cover

    def _cached(self, key: tuple, compute):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            self._cache[key] = value
        return value

    def embed(self, text: str) -> np.ndarray:
        return self.embed_many([text])[0]

    def embed_many(self, texts: list[str]) -> list[np.ndarray]:
        def compute():
            data = self._post("/embed", {"texts": texts})
            return [np.asarray(v, dtype=np.float64) for v in data["vectors"]]

        return self._cached(("embed", tuple(texts)), compute)

    def word_similarity(self, w1: str, w2: str, pos1: str | None = None, pos2: str | None = None) -> float:
        def compute():
            data = self._post("/word-similarity", {"pairs": [[w1, w2]]})
            return float(data["scores"][0])

        return self._cached(("word-similarity", w1, w2), compute)

    def paraphrase_prob(self, a: str, b: str) -> float:
        def compute():
            data = self._post("/paraphrase", {"pairs": [[a, b]]})
            return float(data["probs"][0])

        return self._cached(("paraphrase", a, b), compute)

    def parse(self, texts: list[str]) -> list[str]:
        def compute():
            data = self._post("/parse", {"texts": texts})
            return [str(c) for c in data["conllu"]]

        return self._cached(("parse", tuple(texts)), compute)

    def health(self) -> dict:
        try:
            resp = self._session.get(f"{self.base_url}/health", timeout=self.timeout)
        except requests.RequestException as exc:
            raise ScoringError(f"/health failed: {exc}") from None
        if resp.status_code != 200:
            raise ScoringError(f"/health returned HTTP {resp.status_code}")
        return resp.json()


Scorer = OfflineScorer | RemoteScorer


def sentence_distance(scorer: Scorer, a: str, b: str) -> float:
    """Euclidean distance between the two sentence embeddings."""
    va, vb = scorer.embed(a), scorer.embed(b)
    if va.shape != vb.shape:
        raise ScoringError(f"embedding dimensions disagree: {va.shape} vs {vb.shape}")
    return float(np.linalg.norm(va - vb))
