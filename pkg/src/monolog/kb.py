"""Lexical knowledge base: hypernym/hyponym/synonym/antonym sets plus quantifier scales.

The store is loaded from flat TSV dumps (``lemma<TAB>pos<TAB>relation<TAB>lemma``)
so the engine stays hermetic; a bundled mini-dump covers the test corpus.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class KBLoadError(ValueError):
    """Bad dump line; message carries the 1-based line number."""


class LexicalRelationKind(Enum):
    HYPERNYM = "hypernym"
    HYPONYM = "hyponym"
    SYNONYM = "synonym"
    ANTONYM = "antonym"


_INVERSE = {
    LexicalRelationKind.HYPERNYM: LexicalRelationKind.HYPONYM,
    LexicalRelationKind.HYPONYM: LexicalRelationKind.HYPERNYM,
    LexicalRelationKind.SYNONYM: LexicalRelationKind.SYNONYM,
    LexicalRelationKind.ANTONYM: LexicalRelationKind.ANTONYM,
}

Key = tuple[str, str, LexicalRelationKind]


@dataclass
class KnowledgeBase:
    """POS-qualified relation store with closure invariants.

    Hypernym/hyponym entries are kept mutually inverse; synonymy and
    antonymy are kept symmetric.  Queries on unknown lemmas return the
    empty set, never an error.
    """

    store: dict[Key, set[str]] = field(default_factory=dict)
    provenance: dict[tuple[Key, str], str] = field(default_factory=dict)

    def add(self, lemma: str, pos: str, kind: LexicalRelationKind, other: str, provenance: str) -> None:
        lemma, pos, other = lemma.lower(), pos.upper(), other.lower()
        if kind in (LexicalRelationKind.HYPERNYM, LexicalRelationKind.HYPONYM) and lemma == other:
            return  # no lemma is its own hypernym
        self.store.setdefault((lemma, pos, kind), set()).add(other)
        self.provenance[((lemma, pos, kind), other)] = provenance
        inv = _INVERSE[kind]
        self.store.setdefault((other, pos, inv), set()).add(lemma)
        self.provenance[((other, pos, inv), lemma)] = provenance

    def query(self, lemma: str, pos: str, kind: LexicalRelationKind) -> frozenset[str]:
        return frozenset(self.store.get((lemma.lower(), pos.upper(), kind), ()))

    def query_any_pos(self, lemma: str, kind: LexicalRelationKind) -> frozenset[str]:
        out: set[str] = set()
        for (lem, _pos, k), vals in self.store.items():
            if lem == lemma.lower() and k is kind:
                out |= vals
        return frozenset(out)

    def are_synonyms(self, a: str, b: str) -> bool:
        return b.lower() in self.query_any_pos(a, LexicalRelationKind.SYNONYM)

    def are_antonyms(self, a: str, b: str) -> bool:
        return b.lower() in self.query_any_pos(a, LexicalRelationKind.ANTONYM)


def load_dump(path: str | Path, provenance: str, into: KnowledgeBase | None = None) -> KnowledgeBase:
    """Load a TSV dump, applying inverse/symmetric closure per relation kind."""
    kb = into or KnowledgeBase()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise KBLoadError(f"line {line_no}: expected 4 tab-separated columns, got {len(cols)}")
        lemma, pos, rel, other = cols
        try:
            kind = LexicalRelationKind(rel.lower())
        except ValueError:
            raise KBLoadError(f"line {line_no}: unknown relation {rel!r}") from None
        kb.add(lemma, pos, kind, other, provenance)
    return kb


def load_bundled_kb() -> KnowledgeBase:
    """The mini-dump shipped with the package (covers the test corpus)."""
    kb = KnowledgeBase()
    for name, prov in (("kb_core.tsv", "wordnet-dump"), ("kb_handcrafted.tsv", "handcrafted")):
        ref = importlib.resources.files("monolog").joinpath(f"data/{name}")
        with importlib.resources.as_file(ref) as p:
            load_dump(p, provenance=prov, into=kb)
    return kb


def restrict_to_hypothesis(candidates: set[str] | frozenset[str], hypothesis_lemmas: set[str] | frozenset[str]) -> set[str]:
    """Drop candidate words that do not appear in the hypothesis."""
    return {c for c in candidates if c in hypothesis_lemmas}


class Comparison(Enum):
    LEQ = "leq"
    GEQ = "geq"
    EQ = "eq"
    PERP = "perp"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class QuantifierScale:
    """Ordered chain of quantifier equivalence classes plus orthogonal pairs."""

    classes: tuple[frozenset[str], ...]
    perp_pairs: frozenset[frozenset[str]]
    provenance: dict[str, str] = field(default_factory=dict, compare=False)

    def class_index(self, q: str) -> int | None:
        q = q.lower()
        for i, cls in enumerate(self.classes):
            if q in cls:
                return i
        return None

    def members_leq(self, q: str) -> frozenset[str]:
        """All lemmas weakly above q on the chain (q's class included)."""
        i = self.class_index(q)
        if i is None:
            return frozenset()
        out: set[str] = set()
        for cls in self.classes[i:]:
            out |= cls
        return frozenset(out)

    def members_geq(self, q: str) -> frozenset[str]:
        i = self.class_index(q)
        if i is None:
            return frozenset()
        out: set[str] = set()
        for cls in self.classes[: i + 1]:
            out |= cls
        return frozenset(out)


def quantifier_compare(scale: QuantifierScale, q1: str, q2: str) -> Comparison:
    q1, q2 = q1.lower(), q2.lower()
    if frozenset((q1, q2)) in scale.perp_pairs:
        return Comparison.PERP
    i, j = scale.class_index(q1), scale.class_index(q2)
    if i is None or j is None:
        return Comparison.INCOMPARABLE
    if i == j:
        return Comparison.EQ
    return Comparison.LEQ if i < j else Comparison.GEQ


def default_scale() -> QuantifierScale:
    """The handcrafted chain all = every = each <= most <= many <= several <= some = a."""
    classes = (
        frozenset({"all", "every", "each"}),
        frozenset({"most"}),
        frozenset({"many"}),
        frozenset({"several"}),
        frozenset({"some", "a", "an"}),
    )
    perp = frozenset(
        {
            frozenset({"up", "down"}),
            frozenset({"above", "below"}),
            frozenset({"inside", "outside"}),
        }
    )
    provenance = {q: "handcrafted" for cls in classes for q in cls}
    provenance["an"] = "handcrafted-extra"
    return QuantifierScale(classes=classes, perp_pairs=perp, provenance=provenance)
