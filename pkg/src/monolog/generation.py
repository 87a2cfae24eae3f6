"""The three inference generators: lexical substitution, phrasal modifier
deletion/insertion, and chunk-level syntactic-variation substitution.

Each generator maps a sentence state to a finite set of rewritten states;
every output differs from its parent in exactly one edit site and carries
its provenance.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .chunker import all_chunks
from .conllu import UDToken
from .graph import build_graph
from .kb import KnowledgeBase, LexicalRelationKind, QuantifierScale, restrict_to_hypothesis
from .polarity import (
    NEGATION_LEMMAS,
    Polarity,
    PolarizedTree,
    QuantifierLexicon,
    binarize,
    polarize,
)

PARAPHRASE_THRESHOLD = 0.85

DELETABLE_RELS = {
    "amod",
    "advmod",
    "nmod",
    "obl",
    "acl",
    "acl:relcl",
    "advcl",
    "nummod",
    "appos",
    "compound",
}

MODIFIER_MAP_RELS = DELETABLE_RELS


class EditKind(Enum):
    LEX_SUB = "LEX_SUB"
    PHRASAL_DEL = "PHRASAL_DEL"
    PHRASAL_INS = "PHRASAL_INS"
    SYN_VAR = "SYN_VAR"


@dataclass(frozen=True)
class Edit:
    kind: EditKind
    site: tuple[int, ...]       # token ids in the parent state; for insertions,
                                # the 1-based position where the new text starts
    replacement: str            # inserted/substituted surface text ("" for deletions)
    detail: str = ""            # relation or score that licensed the edit


@dataclass(frozen=True)
class GeneratedSentence:
    tokens: tuple[UDToken, ...]
    ptree: PolarizedTree
    edit: Edit | None
    depth: int

    def surface(self) -> str:
        return " ".join(t.form for t in self.tokens)

    def lemmas(self) -> tuple[str, ...]:
        return tuple(t.lemma.lower() for t in self.tokens)


def make_state(
    tokens: list[UDToken] | tuple[UDToken, ...],
    lexicon: QuantifierLexicon | None = None,
    edit: Edit | None = None,
    depth: int = 0,
) -> GeneratedSentence:
    toks = tuple(tokens)
    ptree = polarize(binarize(toks), lexicon)
    return GeneratedSentence(tokens=toks, ptree=ptree, edit=edit, depth=depth)


def subtree_ids(tokens: tuple[UDToken, ...], root_id: int) -> set[int]:
    children = defaultdict(list)
    for t in tokens:
        children[t.head].append(t.id)
    out: set[int] = set()
    stack = [root_id]
    while stack:
        cur = stack.pop()
        if cur in out:
            continue
        out.add(cur)
        stack.extend(children[cur])
    return out


def _renumber(ordered: list[UDToken]) -> tuple[UDToken, ...]:
    """Reassign ids 1..n by list order; heads are remapped, dangling heads go to 0."""
    idmap = {t.id: i + 1 for i, t in enumerate(ordered)}
    out = []
    for t in ordered:
        head = idmap.get(t.head, 0) if t.head else 0
        out.append(UDToken(id=idmap[t.id], form=t.form, lemma=t.lemma, upos=t.upos, head=head, deprel=t.deprel))
    return tuple(out)


def _delete_span(tokens: tuple[UDToken, ...], span: set[int]) -> tuple[UDToken, ...]:
    return _renumber([t for t in tokens if t.id not in span])


_TEMP_BASE = 10_000


def _insert_tokens(
    tokens: tuple[UDToken, ...],
    insert_at: int,                 # position index in the token list
    new_tokens: list[UDToken],      # carry temp ids and consistent heads
) -> tuple[UDToken, ...]:
    ordered = list(tokens[:insert_at]) + new_tokens + list(tokens[insert_at:])
    return _renumber(ordered)


def _retag(span_tokens: list[UDToken], anchor_id: int, anchor_head: int, anchor_deprel: str) -> list[UDToken]:
    """Copy a hypothesis span under temp ids, re-rooting its anchor."""
    temp = {t.id: _TEMP_BASE + i for i, t in enumerate(span_tokens)}
    out = []
    for t in span_tokens:
        if t.id == anchor_id:
            head, deprel = anchor_head, anchor_deprel
        elif t.head in temp:
            head, deprel = temp[t.head], t.deprel
        else:
            head, deprel = temp[anchor_id], t.deprel  # orphaned: hang off the anchor
        out.append(UDToken(id=temp[t.id], form=t.form, lemma=t.lemma, upos=t.upos, head=head, deprel=deprel))
    return out


def lexical_infer(
    state: GeneratedSentence,
    kb: KnowledgeBase,
    scale: QuantifierScale,
    hyp_tokens: tuple[UDToken, ...],
    lexicon: QuantifierLexicon | None = None,
) -> list[GeneratedSentence]:
    """Polarity-directed word replacement for nouns, verbs, numbers, and quantifiers.

    Upward tokens take hypernyms and synonyms, downward tokens take hyponyms
    and synonyms, quantifiers move along the scale in the licensed direction;
    candidates are restricted to lemmas that occur in the hypothesis.
    """
    hyp_lemmas = {t.lemma.lower() for t in hyp_tokens}
    hyp_by_lemma: dict[str, UDToken] = {}
    for t in hyp_tokens:
        hyp_by_lemma.setdefault(t.lemma.lower(), t)

    out: list[GeneratedSentence] = []
    seen: set[tuple[int, str]] = set()

    def substitute(tok: UDToken, candidate: str, detail: str) -> None:
        if (tok.id, candidate) in seen or candidate == tok.lemma.lower():
            return
        seen.add((tok.id, candidate))
        model = hyp_by_lemma.get(candidate)
        form = model.form if model is not None else candidate
        upos = model.upos if model is not None else tok.upos
        new_tok = UDToken(id=tok.id, form=form, lemma=candidate, upos=upos, head=tok.head, deprel=tok.deprel)
        toks = tuple(new_tok if t.id == tok.id else t for t in state.tokens)
        edit = Edit(kind=EditKind.LEX_SUB, site=(tok.id,), replacement=form, detail=detail)
        out.append(make_state(toks, lexicon, edit, state.depth + 1))

    for tok in state.tokens:
        mark = state.ptree.leaf_marks.get(tok.id)
        if mark is None or mark is Polarity.FLAT:
            continue
        lemma = tok.lemma.lower()
        is_quant = (tok.upos == "DET" or tok.deprel == "det") and scale.class_index(lemma) is not None
        if is_quant:
            pool = scale.members_leq(lemma) if mark is Polarity.UP else scale.members_geq(lemma)
            for cand in sorted(restrict_to_hypothesis(set(pool), hyp_lemmas)):
                substitute(tok, cand, "scale")
            continue
        if tok.upos not in ("NOUN", "VERB", "NUM"):
            continue
        if mark is Polarity.UP:
            relations = (LexicalRelationKind.HYPERNYM, LexicalRelationKind.SYNONYM)
        else:
            relations = (LexicalRelationKind.HYPONYM, LexicalRelationKind.SYNONYM)
        for rel in relations:
            cands = kb.query(lemma, tok.upos, rel)
            for cand in sorted(restrict_to_hypothesis(set(cands), hyp_lemmas)):
                substitute(tok, cand, rel.value)
    return out


@dataclass(frozen=True)
class ModifierEntry:
    head_lemma: str
    tokens: tuple[UDToken, ...]  # hypothesis tokens of the span, surface order
    root_id: int                 # id of the span's top token (the modifier itself)
    before_head: bool


@dataclass(frozen=True)
class ModifierMap:
    entries: dict[str, tuple[ModifierEntry, ...]] = field(default_factory=dict)

    def for_head(self, lemma: str) -> list[tuple[str, ModifierEntry]]:
        found = []
        for rel in sorted(self.entries):
            for e in self.entries[rel]:
                if e.head_lemma == lemma.lower():
                    found.append((rel, e))
        return found


def build_modifier_map(hyp_tokens: tuple[UDToken, ...] | list[UDToken]) -> ModifierMap:
    """Hypothesis-derived table of (relation, head lemma, modifier span)."""
    toks = tuple(hyp_tokens)
    by_id = {t.id: t for t in toks}
    entries: dict[str, list[ModifierEntry]] = defaultdict(list)
    for t in toks:
        if t.deprel not in MODIFIER_MAP_RELS or t.head == 0:
            continue
        if t.lemma.lower() in NEGATION_LEMMAS:
            continue
        head = by_id[t.head]
        span = sorted(subtree_ids(toks, t.id))
        entries[t.deprel].append(
            ModifierEntry(
                head_lemma=head.lemma.lower(),
                tokens=tuple(by_id[i] for i in span),
                root_id=t.id,
                before_head=max(span) < head.id,
            )
        )
    return ModifierMap(entries={rel: tuple(es) for rel, es in entries.items()})


def phrasal_infer(
    state: GeneratedSentence,
    mm: ModifierMap,
    lexicon: QuantifierLexicon | None = None,
) -> list[GeneratedSentence]:
    """Delete each modifier subtree under an upward node; insert hypothesis
    modifiers (matched by head lemma) under downward nodes.  Flat nodes are
    untouched."""
    out: list[GeneratedSentence] = []
    children = defaultdict(list)
    for t in state.tokens:
        children[t.head].append(t)
    pos_of = {t.id: i for i, t in enumerate(state.tokens)}

    for tok in state.tokens:
        mark = state.ptree.leaf_marks.get(tok.id)
        if mark is Polarity.UP:
            for dep in children[tok.id]:
                if dep.deprel not in DELETABLE_RELS or dep.lemma.lower() in NEGATION_LEMMAS:
                    continue
                span = subtree_ids(state.tokens, dep.id)
                toks = _delete_span(state.tokens, span)
                edit = Edit(
                    kind=EditKind.PHRASAL_DEL,
                    site=tuple(sorted(span)),
                    replacement="",
                    detail=dep.deprel,
                )
                out.append(make_state(toks, lexicon, edit, state.depth + 1))
        elif mark is Polarity.DOWN:
            by_id = {t2.id: t2 for t2 in state.tokens}
            existing = {
                tuple(by_id[i].lemma.lower() for i in sorted(subtree_ids(state.tokens, d.id)))
                for d in children[tok.id]
            }
            for rel, entry in mm.for_head(tok.lemma):
                lemmas = tuple(t2.lemma.lower() for t2 in entry.tokens)
                if lemmas in existing:
                    continue
                new_toks = _retag(list(entry.tokens), entry.root_id, tok.id, rel)
                at = pos_of[tok.id] + (0 if entry.before_head else 1)
                toks = _insert_tokens(state.tokens, at, new_toks)
                edit = Edit(
                    kind=EditKind.PHRASAL_INS,
                    site=(at + 1,),
                    replacement=" ".join(t2.form for t2 in entry.tokens),
                    detail=rel,
                )
                out.append(make_state(toks, lexicon, edit, state.depth + 1))
    return out


def syntactic_variation_infer(
    state: GeneratedSentence,
    hyp_tokens: tuple[UDToken, ...],
    scorer,
    lexicon: QuantifierLexicon | None = None,
    threshold: float = PARAPHRASE_THRESHOLD,
) -> list[GeneratedSentence]:
    """Substitute premise chunks with hypothesis chunks whose paraphrase
    probability exceeds the threshold (strictly).  Scorer failures propagate
    as scoring errors for the caller to handle."""
    s_graph = build_graph(state.tokens)
    h_graph = build_graph(hyp_tokens)
    chunks_s = all_chunks(s_graph, state.tokens)
    chunks_h = all_chunks(h_graph, hyp_tokens)
    s_by_id = {t.id: t for t in state.tokens}
    h_by_id = {t.id: t for t in hyp_tokens}

    out: list[GeneratedSentence] = []
    for cs in sorted(chunks_s, key=lambda c: (c.span[0], c.span)):
        cs_lemmas = tuple(s_by_id[i].lemma.lower() for i in cs.span)
        for ch in sorted(chunks_h, key=lambda c: (c.span[0], c.span)):
            ch_lemmas = tuple(h_by_id[i].lemma.lower() for i in ch.span)
            if cs_lemmas == ch_lemmas:
                continue
            alpha = scorer.paraphrase_prob(cs.text, ch.text)
            if not alpha > threshold:
                continue
            anchor = s_by_id[cs.anchor_id]
            new_span = _retag(
                [h_by_id[i] for i in ch.span],
                ch.anchor_id,
                anchor.head,
                anchor.deprel,
            )
            temp_anchor = next(t.id for t, orig in zip(new_span, ch.span) if orig == ch.anchor_id)
            span_set = set(cs.span)
            remaining = []
            for t in state.tokens:
                if t.id in span_set:
                    continue
                if t.head in span_set:
                    t = UDToken(id=t.id, form=t.form, lemma=t.lemma, upos=t.upos, head=temp_anchor, deprel=t.deprel)
                remaining.append(t)
            insert_pos = sum(1 for t in remaining if t.id < cs.span[0])
            ordered = remaining[:insert_pos] + new_span + remaining[insert_pos:]
            toks = _renumber(ordered)
            edit = Edit(
                kind=EditKind.SYN_VAR,
                site=cs.span,
                replacement=ch.text,
                detail=f"alpha={alpha:.2f}",
            )
            out.append(make_state(toks, lexicon, edit, state.depth + 1))
    return out
