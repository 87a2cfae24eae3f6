"""Phrase chunks composed from a sentence graph by contiguity-filtered
modifier attachment, plus verb-phrase composition with paired objects."""

from __future__ import annotations

from dataclasses import dataclass

from .conllu import UDToken
from .graph import SentenceGraph


@dataclass(frozen=True)
class Chunk:
    anchor_id: int
    span: tuple[int, ...]  # token ids, strictly increasing
    text: str


def join_forms(tokens: list[UDToken]) -> str:
    """Detokenize: no space before punctuation."""
    out = ""
    for t in tokens:
        if out and not (t.upos == "PUNCT" or t.form in {",", ".", "!", "?", ";", ":"}):
            out += " "
        out += t.form
    return out


def _contiguous(ids: set[int], punct_ids: set[int]) -> bool:
    """Connected chain in surface order; punctuation tokens are transparent."""
    lo, hi = min(ids), max(ids)
    return all(i in ids or i in punct_ids for i in range(lo, hi + 1))


def chunks_for(g: SentenceGraph, tokens: list[UDToken] | tuple[UDToken, ...]) -> list[Chunk]:
    """One chunk per content vertex: the anchor plus every modifier whose
    span keeps the chain connected; modifiers that would disconnect it are
    discarded.  A modifier that is itself a content vertex contributes its
    whole chunk (chained modification)."""
    toks = list(tokens)
    by_id = {t.id: t for t in toks}
    punct_ids = {t.id for t in toks if t.upos == "PUNCT"}
    span_cache: dict[int, set[int]] = {}

    def span_of(anchor: int) -> set[int]:
        if anchor in span_cache:
            return span_cache[anchor]
        span_cache[anchor] = {anchor}  # cycle guard; dependency edges cannot loop back
        span = {anchor}
        mods = sorted(g.children(anchor), key=lambda m: (abs(m - anchor), m))
        for m in mods:
            m_span = span_of(m) if g.children(m) else {m}
            if _contiguous(span | m_span, punct_ids):
                span |= m_span
        span_cache[anchor] = span
        return span

    chunks: list[Chunk] = []
    for anchor in g.content_ids():
        span = span_of(anchor)
        full = sorted(span | {p for p in punct_ids if min(span) < p < max(span)})
        text = join_forms([by_id[i] for i in full])
        chunks.append(Chunk(anchor_id=anchor, span=tuple(full), text=text))
    return chunks


def verb_phrase_chunks(
    g: SentenceGraph, base: list[Chunk], tokens: list[UDToken] | tuple[UDToken, ...]
) -> list[Chunk]:
    """For each verb with a paired object, the union of their chunks when
    it stays contiguous."""
    by_id = {t.id: t for t in tokens}
    punct_ids = {t.id for t in tokens if t.upos == "PUNCT"}
    by_anchor = {c.anchor_id: c for c in base}
    out: list[Chunk] = []
    for verb_id, obj_id in g.verb_object_pairs:
        vc, oc = by_anchor.get(verb_id), by_anchor.get(obj_id)
        if vc is None or oc is None:
            continue
        union = set(vc.span) | set(oc.span)
        if not _contiguous(union, punct_ids):
            continue
        full = sorted(union)
        text = join_forms([by_id[i] for i in full])
        out.append(Chunk(anchor_id=verb_id, span=tuple(full), text=text))
    return out


def all_chunks(g: SentenceGraph, tokens: list[UDToken] | tuple[UDToken, ...]) -> list[Chunk]:
    base = chunks_for(g, tokens)
    vps = verb_phrase_chunks(g, base, tokens)
    seen: set[tuple[int, ...]] = set()
    out: list[Chunk] = []
    for c in base + vps:
        if c.span not in seen:
            seen.add(c.span)
            out.append(c)
    return out
