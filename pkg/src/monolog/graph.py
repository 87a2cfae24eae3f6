"""Sentence representation graphs, premise/hypothesis alignment, and the
generation-module recommendation derived from the aligned pair."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .conllu import UDToken

# Similarity below which even a maximal pair is left unaligned.
ALIGN_THRESHOLD = 0.1

SUBJECT_RELS = {"nsubj", "nsubj:pass", "csubj"}
OBJECT_RELS = {"obj", "iobj"}


@dataclass
class SentenceGraph:
    """Directed content-word -> modifier graph.

    Content vertices are tokens that modify nothing or are being modified;
    edges point from a content vertex to each of its modifiers.  The root
    verb, its subject, and its object(s) hang off a virtual root and carry
    component tags used for alignment seeding.  A vertex may be content and
    modifier at the same time (chained modification).
    """

    tokens: tuple[UDToken, ...]
    edges: dict[int, tuple[int, ...]]          # content id -> modifier ids
    component: dict[int, str]                  # token id -> subject|verb|object|other
    root_id: int
    top_ids: tuple[int, ...]                   # vertices hanging off the virtual root
    verb_object_pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        self._by_id = {t.id: t for t in self.tokens}

    def token(self, token_id: int) -> UDToken:
        return self._by_id[token_id]

    def content_ids(self) -> list[int]:
        return sorted(self.edges.keys() | set(self.top_ids))

    def modifier_ids(self) -> list[int]:
        return sorted({m for ms in self.edges.values() for m in ms})

    def component_ids(self) -> list[int]:
        return [i for i in sorted(self.component) if self.component[i] in ("subject", "verb", "object")]

    def children(self, token_id: int) -> tuple[int, ...]:
        return self.edges.get(token_id, ())

    def descendants(self, token_id: int) -> set[int]:
        out: set[int] = set()
        stack = list(self.children(token_id))
        while stack:
            cur = stack.pop()
            if cur in out:
                continue
            out.add(cur)
            stack.extend(self.children(cur))
        return out


def build_graph(tokens: list[UDToken] | tuple[UDToken, ...]) -> SentenceGraph:
    toks = tuple(tokens)
    root = next(t for t in toks if t.head == 0)
    edges: dict[int, list[int]] = {}
    component: dict[int, str] = {root.id: "verb"}
    top: list[int] = [root.id]
    vo_pairs: list[tuple[int, int]] = []

    for t in toks:
        if t.head == 0:
            continue
        if t.head == root.id and t.deprel in SUBJECT_RELS:
            component[t.id] = "subject"
            top.append(t.id)
            continue
        if t.head == root.id and t.deprel in OBJECT_RELS:
            component[t.id] = "object"
            top.append(t.id)
            vo_pairs.append((root.id, t.id))
            continue
        edges.setdefault(t.head, []).append(t.id)
        if t.deprel.startswith("obl"):
            component.setdefault(t.id, "object")
        # objects of embedded verbs still pair with them for verb phrases
        if t.deprel in OBJECT_RELS:
            vo_pairs.append((t.head, t.id))

    for t in toks:
        component.setdefault(t.id, "other")

    return SentenceGraph(
        tokens=toks,
        edges={h: tuple(sorted(ms)) for h, ms in edges.items()},
        component=component,
        root_id=root.id,
        top_ids=tuple(top),
        verb_object_pairs=tuple(vo_pairs),
    )


@dataclass(frozen=True)
class AlignmentSet:
    """Finalized one-to-one partial matching with similarity scores."""

    pairs: tuple[tuple[int, int, float], ...]

    def premise_partner(self, p_id: int) -> int | None:
        for p, h, _s in self.pairs:
            if p == p_id:
                return h
        return None

    def hypothesis_partner(self, h_id: int) -> int | None:
        for p, h, _s in self.pairs:
            if h == h_id:
                return p
        return None

    def score(self, p_id: int, h_id: int) -> float | None:
        for p, h, s in self.pairs:
            if p == p_id and h == h_id:
                return s
        return None

    def aligned_premise_ids(self) -> set[int]:
        return {p for p, _h, _s in self.pairs}

    def aligned_hypothesis_ids(self) -> set[int]:
        return {h for _p, h, _s in self.pairs}


def _best_partner(p_tok: UDToken, candidates: list[UDToken], wsim) -> tuple[UDToken | None, float]:
    best: UDToken | None = None
    best_score = -1.0
    for h_tok in candidates:
        s = wsim(p_tok.lemma, h_tok.lemma, p_tok.upos, h_tok.upos)
        if s > best_score or (
            s == best_score
            and best is not None
            and abs(h_tok.id - p_tok.id) < abs(best.id - p_tok.id)
        ):
            best, best_score = h_tok, s
    return best, best_score


def align(gp: SentenceGraph, gh: SentenceGraph, wsim) -> AlignmentSet:
    """Three-round bidirectional alignment.

    Round 1 pairs component-level vertices and recursively their children,
    keeping the maximum-similarity hypothesis partner per premise vertex.
    Round 2 keeps only the maximum pair per hypothesis vertex; round 3
    repeats the check per premise vertex.
    """
    candidates: list[tuple[int, int, float]] = []
    seen_premise: set[int] = set()

    def pair_children(p_id: int, h_id: int) -> None:
        h_children = [gh.token(c) for c in gh.children(h_id)]
        for pc in gp.children(p_id):
            if pc in seen_premise:
                continue
            p_tok = gp.token(pc)
            best, score = _best_partner(p_tok, h_children, wsim)
            if best is not None and score >= ALIGN_THRESHOLD:
                seen_premise.add(pc)
                candidates.append((pc, best.id, score))
                pair_children(pc, best.id)

    comp_h = [gh.token(c) for c in gh.component_ids()]
    for p_id in gp.component_ids():
        p_tok = gp.token(p_id)
        best, score = _best_partner(p_tok, comp_h, wsim)
        if best is not None and score >= ALIGN_THRESHOLD:
            seen_premise.add(p_id)
            candidates.append((p_id, best.id, score))
            pair_children(p_id, best.id)

    # round 2: one premise partner per hypothesis vertex
    by_h: dict[int, tuple[int, int, float]] = {}
    for p, h, s in candidates:
        cur = by_h.get(h)
        if cur is None or s > cur[2] or (s == cur[2] and p < cur[0]):
            by_h[h] = (p, h, s)
    # round 3: one hypothesis partner per premise vertex
    by_p: dict[int, tuple[int, int, float]] = {}
    for p, h, s in by_h.values():
        cur = by_p.get(p)
        if cur is None or s > cur[2] or (s == cur[2] and h < cur[1]):
            by_p[p] = (p, h, s)
    pairs = tuple(sorted(by_p.values()))
    return AlignmentSet(pairs=pairs)


class Directive(Enum):
    LEXICAL = "lexical"
    PHRASAL_DELETE = "phrasal_delete"
    PHRASAL_INSERT = "phrasal_insert"
    SYNTACTIC_VARIATION = "syntactic_variation"
    NONE = "none"


@dataclass(frozen=True)
class Recommendation:
    premise: dict[int, Directive] = field(default_factory=dict)
    hypothesis: dict[int, Directive] = field(default_factory=dict)

    def modules(self) -> set[str]:
        """Generator modules implied by the directives."""
        out: set[str] = set()
        for d in list(self.premise.values()) + list(self.hypothesis.values()):
            if d is Directive.LEXICAL:
                out.add("lexical")
            elif d in (Directive.PHRASAL_DELETE, Directive.PHRASAL_INSERT):
                out.add("phrasal")
            elif d is Directive.SYNTACTIC_VARIATION:
                out.add("synvar")
        return out

    def all_none(self) -> bool:
        return not self.modules()


def recommend(gp: SentenceGraph, gh: SentenceGraph, a: AlignmentSet) -> Recommendation:
    """Per-vertex directives: deletions for unaligned premise vertices,
    insertions for unaligned hypothesis vertices, lexical for aligned pairs
    with different lemmas, and a syntactic variation wherever several
    differences cluster beneath one aligned pair (suppressing the nested
    directives)."""
    premise: dict[int, Directive] = {}
    hypothesis: dict[int, Directive] = {}
    aligned_p = a.aligned_premise_ids()
    aligned_h = a.aligned_hypothesis_ids()

    for t in gp.tokens:
        if t.id not in aligned_p:
            premise[t.id] = Directive.PHRASAL_DELETE
        else:
            h_id = a.premise_partner(t.id)
            h_tok = gh.token(h_id)
            if h_tok.lemma.lower() != t.lemma.lower():
                premise[t.id] = Directive.LEXICAL
            else:
                premise[t.id] = Directive.NONE
    for t in gh.tokens:
        hypothesis[t.id] = Directive.NONE if t.id in aligned_h else Directive.PHRASAL_INSERT

    # outermost aligned pairs claim the variation first, so nested directives
    # are suppressed under the highest vertex that covers them
    by_size = sorted(a.pairs, key=lambda pair: -len(gp.descendants(pair[0])))
    for p, h, _s in by_size:
        below_p = gp.descendants(p)
        below_h = gh.descendants(h)
        events = sum(1 for d in below_p if premise.get(d) in (Directive.PHRASAL_DELETE, Directive.LEXICAL))
        events += sum(1 for d in below_h if hypothesis.get(d) is Directive.PHRASAL_INSERT)
        own = premise.get(p) is Directive.LEXICAL
        if (own and events >= 1) or events >= 2:
            premise[p] = Directive.SYNTACTIC_VARIATION
            for d in below_p:
                premise[d] = Directive.NONE
            for d in below_h:
                hypothesis[d] = Directive.NONE

    return Recommendation(premise=premise, hypothesis=hypothesis)
