"""Contradiction signatures between aligned sentence graphs, cancellation of
co-sited negation evidence, and the meaning-preservation check on the
remaining transitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .conllu import UDToken
from .graph import AlignmentSet, SentenceGraph, align, build_graph
from .kb import Comparison, KnowledgeBase, LexicalRelationKind, QuantifierScale, quantifier_compare
from .polarity import (
    NEGATION_LEMMAS,
    NEGATIVE_PRONOUNS,
    Polarity,
    PolarizedTree,
    QuantifierLexicon,
    binarize,
    polarize,
)

NEGATIVE_DETS = {"no", "neither"}

# Both argument crossings must be near-certain matches before a direction
# contradiction fires; this blocks spurious crossings on unrelated arguments.
DIRECTION_MIN_SIMILARITY = 0.9


class SignatureKind(Enum):
    QUANTIFIER_NEGATION = "quantifier_negation"
    VERB_NEGATION = "verb_negation"
    NOUN_NEGATION = "noun_negation"
    ACTION_CONTRADICTION = "action_contradiction"
    DIRECTION_CONTRADICTION = "direction_contradiction"


@dataclass
class Signature:
    kind: SignatureKind
    premise_site: int
    hypothesis_site: int
    cancelled: bool = False
    note: str = ""


def _det_lemma(g: SentenceGraph, vertex_id: int) -> str | None:
    for c in g.children(vertex_id):
        tok = g.token(c)
        if tok.deprel == "det":
            return tok.lemma.lower()
    return None


def _negation_count(g: SentenceGraph, vertex_id: int) -> int:
    return sum(
        1
        for c in g.children(vertex_id)
        if g.token(c).deprel.startswith("advmod") and g.token(c).lemma.lower() in NEGATION_LEMMAS
    )


def _component_head(g: SentenceGraph, tag: str) -> int | None:
    for i in g.top_ids:
        if g.component.get(i) == tag:
            return i
    return None


def detect_signatures(
    gp: SentenceGraph,
    gh: SentenceGraph,
    a: AlignmentSet,
    kb: KnowledgeBase,
    scale: QuantifierScale,
) -> list[Signature]:
    sigs: list[Signature] = []

    for p, h, _s in a.pairs:
        tp, th = gp.token(p), gh.token(h)

        if gp.component.get(p) == "subject" and gh.component.get(h) == "subject":
            qp, qh = _det_lemma(gp, p), _det_lemma(gh, h)
            neg_p = qp in NEGATIVE_DETS
            neg_h = qh in NEGATIVE_DETS
            if neg_p != neg_h:
                sigs.append(
                    Signature(SignatureKind.QUANTIFIER_NEGATION, p, h, note=f"{qp or '-'} -> {qh or '-'}")
                )
            elif qp and qh and quantifier_compare(scale, qp, qh) is Comparison.PERP:
                sigs.append(Signature(SignatureKind.QUANTIFIER_NEGATION, p, h, note=f"{qp} perp {qh}"))

        is_verbish = tp.upos == "VERB" or p == gp.root_id
        if is_verbish and (th.upos == "VERB" or h == gh.root_id):
            np_, nh = _negation_count(gp, p), _negation_count(gh, h)
            for _ in range(abs(np_ - nh)):
                sigs.append(
                    Signature(SignatureKind.VERB_NEGATION, p, h, note=f"negations {np_} -> {nh}")
                )
            if tp.lemma.lower() != th.lemma.lower() and kb.are_antonyms(tp.lemma, th.lemma):
                both_negated = np_ > 0 and nh > 0
                if not both_negated:
                    sigs.append(
                        Signature(
                            SignatureKind.ACTION_CONTRADICTION,
                            p,
                            h,
                            note=f"{tp.lemma} vs {th.lemma}",
                        )
                    )

    # negative-noun swaps may leave the pair unaligned, so check component heads
    for tag in ("subject", "object"):
        p_head, h_head = _component_head(gp, tag), _component_head(gh, tag)
        if p_head is None or h_head is None:
            continue
        neg_p = gp.token(p_head).lemma.lower() in NEGATIVE_PRONOUNS
        neg_h = gh.token(h_head).lemma.lower() in NEGATIVE_PRONOUNS
        if neg_p != neg_h:
            sigs.append(
                Signature(
                    SignatureKind.NOUN_NEGATION,
                    p_head,
                    h_head,
                    note=f"{gp.token(p_head).lemma} -> {gh.token(h_head).lemma}",
                )
            )

    subj_p, obj_p = _component_head(gp, "subject"), _component_head(gp, "object")
    subj_h, obj_h = _component_head(gh, "subject"), _component_head(gh, "object")
    if None not in (subj_p, obj_p, subj_h, obj_h):
        cross_1 = a.premise_partner(subj_p) == obj_h and (a.score(subj_p, obj_h) or 0) >= DIRECTION_MIN_SIMILARITY
        cross_2 = a.premise_partner(obj_p) == subj_h and (a.score(obj_p, subj_h) or 0) >= DIRECTION_MIN_SIMILARITY
        verbs_same = gp.token(gp.root_id).lemma.lower() == gh.token(gh.root_id).lemma.lower()
        if cross_1 and cross_2 and verbs_same:
            sigs.append(
                Signature(
                    SignatureKind.DIRECTION_CONTRADICTION,
                    subj_p,
                    subj_h,
                    note=f"{gp.token(subj_p).lemma}/{gp.token(obj_p).lemma} swapped",
                )
            )
    return sigs


def cancel(signatures: list[Signature]) -> list[Signature]:
    """Annihilate co-sited negation evidence.

    At one verb site, an action contradiction cancels against one verb
    negation, and remaining verb negations cancel in pairs (double negation).
    Flags are set on the input signatures; the surviving list is returned.
    """
    by_site: dict[int, list[Signature]] = {}
    for s in signatures:
        if s.kind in (SignatureKind.VERB_NEGATION, SignatureKind.ACTION_CONTRADICTION):
            by_site.setdefault(s.premise_site, []).append(s)
    for site_sigs in by_site.values():
        negs = [s for s in site_sigs if s.kind is SignatureKind.VERB_NEGATION]
        actions = [s for s in site_sigs if s.kind is SignatureKind.ACTION_CONTRADICTION]
        while negs and actions:
            negs.pop().cancelled = True
            actions.pop().cancelled = True
        while len(negs) >= 2:
            negs.pop().cancelled = True
            negs.pop().cancelled = True
    return [s for s in signatures if not s.cancelled]


def _excluded_sites(
    gp: SentenceGraph, gh: SentenceGraph, signatures: list[Signature]
) -> tuple[set[int], set[int]]:
    ex_p: set[int] = set()
    ex_h: set[int] = set()
    for s in signatures:
        ex_p.add(s.premise_site)
        ex_h.add(s.hypothesis_site)
        for c in gp.children(s.premise_site):
            tok = gp.token(c)
            if tok.deprel == "det" or (
                tok.deprel.startswith("advmod") and tok.lemma.lower() in NEGATION_LEMMAS
            ):
                ex_p.add(c)
        for c in gh.children(s.hypothesis_site):
            tok = gh.token(c)
            if tok.deprel == "det" or (
                tok.deprel.startswith("advmod") and tok.lemma.lower() in NEGATION_LEMMAS
            ):
                ex_h.add(c)
    return ex_p, ex_h


def verify_meaning_preserved(
    gp: SentenceGraph,
    gh: SentenceGraph,
    a: AlignmentSet,
    pt: PolarizedTree,
    signatures: list[Signature],
    kb: KnowledgeBase,
    scale: QuantifierScale,
) -> bool:
    """True iff every transition outside the signature sites is licensed by
    the premise-side polarity: deletions only at upward marks, insertions
    only where the premise attachment point is downward, lexical changes
    only along knowledge-base directions."""
    ex_p, ex_h = _excluded_sites(gp, gh, signatures)
    aligned_p = a.aligned_premise_ids()
    aligned_h = a.aligned_hypothesis_ids()

    for t in gp.tokens:
        if t.id in ex_p or t.id in aligned_p:
            continue
        if pt.leaf_marks.get(t.id) is not Polarity.UP:
            return False  # unlicensed deletion

    hyp_by_id = {t.id: t for t in gh.tokens}
    for t in gh.tokens:
        if t.id in ex_h or t.id in aligned_h:
            continue
        cur = t
        while cur.head != 0 and cur.head not in aligned_h:
            cur = hyp_by_id[cur.head]
        if cur.head == 0:
            return False  # insertion with no aligned attachment point
        vp = a.hypothesis_partner(cur.head)
        if pt.leaf_marks.get(vp) is not Polarity.DOWN:
            return False  # unlicensed insertion

    for p, h, _s in a.pairs:
        if p in ex_p or h in ex_h:
            continue
        tp, th = gp.token(p), gh.token(h)
        lp, lh = tp.lemma.lower(), th.lemma.lower()
        if lp == lh:
            continue
        mark = pt.leaf_marks.get(p)
        if mark is Polarity.FLAT or mark is None:
            return False
        if scale.class_index(lp) is not None and scale.class_index(lh) is not None:
            cmp_ = quantifier_compare(scale, lp, lh)
            ok = cmp_ is Comparison.EQ or (
                cmp_ is Comparison.LEQ if mark is Polarity.UP else cmp_ is Comparison.GEQ
            )
            if not ok:
                return False
            continue
        if mark is Polarity.UP:
            licensed = kb.query(lp, tp.upos, LexicalRelationKind.HYPERNYM) | kb.query(
                lp, tp.upos, LexicalRelationKind.SYNONYM
            )
        else:
            licensed = kb.query(lp, tp.upos, LexicalRelationKind.HYPONYM) | kb.query(
                lp, tp.upos, LexicalRelationKind.SYNONYM
            )
        if lh not in licensed:
            return False
    return True


@dataclass
class ContradictionAnalysis:
    signatures: list[Signature] = field(default_factory=list)
    survivors: list[Signature] = field(default_factory=list)
    meaning_preserved: bool | None = None
    verdict: bool = False


def analyze(
    premise_tokens: tuple[UDToken, ...],
    hyp_tokens: tuple[UDToken, ...],
    kb: KnowledgeBase,
    scale: QuantifierScale,
    wsim,
    lexicon: QuantifierLexicon | None = None,
) -> ContradictionAnalysis:
    gp, gh = build_graph(premise_tokens), build_graph(hyp_tokens)
    a = align(gp, gh, wsim)
    pt = polarize(binarize(premise_tokens), lexicon)
    sigs = detect_signatures(gp, gh, a, kb, scale)
    survivors = cancel(sigs)
    out = ContradictionAnalysis(signatures=sigs, survivors=survivors)
    if survivors:
        out.meaning_preserved = verify_meaning_preserved(gp, gh, a, pt, sigs, kb, scale)
        out.verdict = out.meaning_preserved
    return out


def is_contradiction(
    premise_tokens: tuple[UDToken, ...],
    hyp_tokens: tuple[UDToken, ...],
    kb: KnowledgeBase,
    scale: QuantifierScale,
    wsim,
    lexicon: QuantifierLexicon | None = None,
) -> bool:
    """Entailment search is assumed to have failed already."""
    return analyze(premise_tokens, hyp_tokens, kb, scale, wsim, lexicon).verdict
