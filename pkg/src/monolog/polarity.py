"""Binarized dependency trees with recursive monotonicity-polarity marking.

Every token receives one of three marks: upward (replaceable by something
more general), downward (replaceable by something more specific), or flat
(no licensed direction).  Marks start upward at the root and are rewritten
top-down by quantifiers, negation, and downward determiners.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .conllu import TreeStructureError, UDToken


class Polarity(Enum):
    UP = "↑"
    DOWN = "↓"
    FLAT = "="

    def __str__(self) -> str:
        return self.value


class Effect(Enum):
    """How an operator rewrites the polarity of material in its scope."""

    PRESERVE = "preserve"
    FLIP = "flip"
    FLATTEN = "flatten"


def apply_effect(effect: Effect, p: Polarity) -> Polarity:
    if effect is Effect.PRESERVE:
        return p
    if effect is Effect.FLATTEN:
        return Polarity.FLAT
    if p is Polarity.UP:
        return Polarity.DOWN
    if p is Polarity.DOWN:
        return Polarity.UP
    return Polarity.FLAT  # flat absorbs flips


def compose_effects(first: Effect, second: Effect) -> Effect:
    if Effect.FLATTEN in (first, second):
        return Effect.FLATTEN
    if first is second:
        return Effect.PRESERVE if first is Effect.FLIP else first
    if Effect.PRESERVE in (first, second):
        return first if second is Effect.PRESERVE else second
    return Effect.PRESERVE


@dataclass(frozen=True)
class Leaf:
    token: UDToken


@dataclass(frozen=True)
class Node:
    relation: str
    left: "BinaryDepTree"
    right: "BinaryDepTree"
    dep_is_left: bool = field(compare=False, default=False)


BinaryDepTree = Leaf | Node


def leaves(tree: BinaryDepTree) -> list[Leaf]:
    """In-order leaves; their token order is the surface order."""
    if isinstance(tree, Leaf):
        return [tree]
    return leaves(tree.left) + leaves(tree.right)


# Determiners and numerals combine after a head's other dependents so that
# the whole noun phrase (relative clauses included) sits inside their
# restrictor; case markers attach outside the determiner.
_LATE_RELS = {"det": 1, "nummod": 1, "case": 2, "mark": 2}


def binarize(tokens: list[UDToken] | tuple[UDToken, ...]) -> BinaryDepTree:
    """Combine each head with its dependents one at a time, nearest dependent first.

    Ties in distance combine the earlier dependent first.  Projective input
    keeps the in-order leaf sequence equal to the surface order.
    """
    toks = list(tokens)
    roots = [t for t in toks if t.head == 0]
    if len(roots) != 1:
        raise TreeStructureError(f"expected exactly one root, found {len(roots)}")
    pos = {t.id: i for i, t in enumerate(toks)}
    children: dict[int, list[UDToken]] = {t.id: [] for t in toks}
    for t in toks:
        if t.head:
            children[t.head].append(t)

    def build(tok: UDToken) -> BinaryDepTree:
        tree: BinaryDepTree = Leaf(tok)
        deps = sorted(
            children[tok.id],
            key=lambda d: (_LATE_RELS.get(d.deprel, 0), abs(pos[d.id] - pos[tok.id]), pos[d.id]),
        )
        for d in deps:
            sub = build(d)
            if pos[d.id] < pos[tok.id]:
                tree = Node(relation=d.deprel, left=sub, right=tree, dep_is_left=True)
            else:
                tree = Node(relation=d.deprel, left=tree, right=sub, dep_is_left=False)
        return tree

    tree = build(roots[0])
    if [l.token.id for l in leaves(tree)] != [t.id for t in toks]:
        raise TreeStructureError("binarization broke surface order (non-projective parse?)")
    return tree


# Dependents in these relations are arguments of their head: a quantifier
# inside them takes scope over the rest of the clause.  Pendings escaping
# any other (modifier-like) dependent stay local to that modifier.
ARGUMENT_RELS = {"nsubj", "nsubj:pass", "csubj", "csubj:pass", "obj", "iobj", "ccomp", "xcomp"}

NEGATION_LEMMAS = {"not", "never", "n't"}
NEGATIVE_PRONOUNS = {"nobody", "noone", "no-one", "nothing", "none"}


@dataclass(frozen=True)
class QuantifierLexicon:
    """Per-quantifier (restrictor effect, scope effect) pairs.

    Unknown determiners default to (preserve, preserve) so coverage gaps
    degrade toward upward inference.
    """

    effects: dict[str, tuple[Effect, Effect]]

    def effects_for(self, lemma: str) -> tuple[Effect, Effect]:
        return self.effects.get(lemma.lower(), (Effect.PRESERVE, Effect.PRESERVE))

    def numeric_effects(self, phrase_lemmas: list[str]) -> tuple[Effect, Effect]:
        """Effects for a numeral phrase; 'at most N' / 'at least N' detected by lemma bigram."""
        if len(phrase_lemmas) >= 2 and phrase_lemmas[0] == "at":
            if phrase_lemmas[1] == "most":
                return (Effect.FLIP, Effect.FLIP)
            if phrase_lemmas[1] == "least":
                return (Effect.PRESERVE, Effect.PRESERVE)
        return (Effect.PRESERVE, Effect.PRESERVE)


_P = Effect.PRESERVE
_F = Effect.FLIP
_Z = Effect.FLATTEN


def default_lexicon() -> QuantifierLexicon:
    effects: dict[str, tuple[Effect, Effect]] = {}
    for q in ("every", "all", "each"):
        effects[q] = (_F, _P)
    for q in ("some", "a", "an", "several", "many"):
        effects[q] = (_P, _P)
    effects["most"] = (_Z, _P)
    for q in ("no", "few", "neither", "nobody"):
        effects[q] = (_F, _F)
    for q in ("the", "this", "that", "these", "those"):
        effects[q] = (_Z, _P)
    effects["not"] = (_F, _F)
    effects["at most"] = (_F, _F)
    effects["at least"] = (_P, _P)
    return QuantifierLexicon(effects=effects)


@dataclass(frozen=True)
class PolarizedTree:
    tree: BinaryDepTree
    marks: dict[BinaryDepTree, Polarity]
    leaf_marks: dict[int, Polarity]

    def __hash__(self) -> int:  # identity is fine: trees are built once
        return id(self)


def polarize(tree: BinaryDepTree, lexicon: QuantifierLexicon | None = None) -> PolarizedTree:
    """Mark every node; the root enters upward.

    Determiner combinations apply their restrictor effect to the noun side
    and emit their scope effect; an emitted effect rewrites everything to
    the right of the phrase within its clause.  Negation flips its head's
    subtree and everything after it.  Two flips compose to preserve; flat
    absorbs everything.
    """
    lex = lexicon or default_lexicon()
    marks: dict[BinaryDepTree, Polarity] = {}

    def mark_function_words(sub: BinaryDepTree, p: Polarity) -> None:
        marks[sub] = p
        if isinstance(sub, Node):
            mark_function_words(sub.left, p)
            mark_function_words(sub.right, p)

    def visit(node: BinaryDepTree, p: Polarity) -> Effect:
        marks[node] = p
        if isinstance(node, Leaf):
            if node.token.lemma.lower() in NEGATIVE_PRONOUNS:
                return Effect.FLIP
            return Effect.PRESERVE

        dep = node.left if node.dep_is_left else node.right
        head = node.right if node.dep_is_left else node.left

        if node.relation == "det" and isinstance(dep, Leaf):
            restr, scope = lex.effects_for(dep.token.lemma)
            marks[dep] = p
            visit(head, apply_effect(restr, p))
            return scope

        if node.relation == "nummod":
            phrase = [leaf.token.lemma.lower() for leaf in leaves(dep)]
            restr, scope = lex.numeric_effects(phrase)
            mark_function_words(dep, p)
            visit(head, apply_effect(restr, p))
            return scope

        if (
            node.relation == "advmod"
            and isinstance(dep, Leaf)
            and dep.token.lemma.lower() in NEGATION_LEMMAS
        ):
            marks[dep] = p
            pend = visit(head, apply_effect(Effect.FLIP, p))
            return compose_effects(Effect.FLIP, pend)

        pend_left = visit(node.left, p)
        if node.dep_is_left and node.relation not in ARGUMENT_RELS:
            pend_left = Effect.PRESERVE
        pend_right = visit(node.right, apply_effect(pend_left, p))
        if not node.dep_is_left and node.relation not in ARGUMENT_RELS:
            pend_right = Effect.PRESERVE
        return compose_effects(pend_left, pend_right)

    visit(tree, Polarity.UP)
    leaf_marks = {leaf.token.id: marks[leaf] for leaf in leaves(tree)}
    return PolarizedTree(tree=tree, marks=marks, leaf_marks=leaf_marks)


def polarity_of(pt: PolarizedTree, token_id: int) -> Polarity:
    try:
        return pt.leaf_marks[token_id]
    except KeyError:
        raise LookupError(f"no token with id {token_id} in polarized tree") from None


def annotate(tokens: list[UDToken] | tuple[UDToken, ...], lexicon: QuantifierLexicon | None = None) -> str:
    """Render a sentence as ``form^mark`` words, e.g. ``Every^↑ healthy^↓ ...``."""
    pt = polarize(binarize(tokens), lexicon)
    return " ".join(f"{t.form}^{pt.leaf_marks[t.id]}" for t in tokens)
