"""CoNLL-U ingestion: 10-column tab-separated blocks, one sentence per blank-line-delimited block."""

from __future__ import annotations

from dataclasses import dataclass


class ConlluParseError(ValueError):
    """Malformed CoNLL-U input; message carries the 1-based line number."""


class TreeStructureError(ValueError):
    """Head indices do not form a single well-rooted tree."""


@dataclass(frozen=True)
class UDToken:
    id: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[UDToken, ...]


def _check_heads(tokens: list[UDToken], line_no: int) -> None:
    n = len(tokens)
    ids = {t.id for t in tokens}
    if len(ids) != n:
        raise ConlluParseError(f"line {line_no}: duplicate token id in sentence block")
    for t in tokens:
        if not (0 <= t.head <= n):
            raise ConlluParseError(f"line {line_no}: head {t.head} out of range for token {t.id}")
        if t.head == t.id:
            raise ConlluParseError(f"line {line_no}: token {t.id} is its own head")
    by_id = {t.id: t for t in tokens}
    for t in tokens:
        seen = set()
        cur = t
        while cur.head != 0:
            if cur.id in seen:
                raise TreeStructureError(f"cyclic head chain through token {t.id}")
            seen.add(cur.id)
            cur = by_id[cur.head]


def parse_conllu(text: str) -> list[Sentence]:
    """Parse a CoNLL-U document into sentences.

    Multiword-token ranges (ids like ``3-4``) and empty nodes (``3.1``) are
    skipped in favor of their parts.  ``# text = ...`` comments become the
    sentence text; otherwise the surface forms are joined.
    """
    sentences: list[Sentence] = []
    tokens: list[UDToken] = []
    sent_text: str | None = None
    block_end_line = 0

    def flush(line_no: int) -> None:
        nonlocal tokens, sent_text
        if tokens:
            _check_heads(tokens, line_no)
            text_out = sent_text if sent_text is not None else " ".join(t.form for t in tokens)
            sentences.append(Sentence(text=text_out, tokens=tuple(tokens)))
        tokens = []
        sent_text = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush(line_no)
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("text") and "=" in comment:
                sent_text = comment.split("=", 1)[1].strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluParseError(f"line {line_no}: expected 10 tab-separated columns, got {len(cols)}")
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword range / empty node: use the parts instead
        try:
            idx = int(tok_id)
        except ValueError:
            raise ConlluParseError(f"line {line_no}: bad token id {tok_id!r}") from None
        try:
            head = int(cols[6])
        except ValueError:
            raise ConlluParseError(f"line {line_no}: bad head index {cols[6]!r}") from None
        tokens.append(
            UDToken(id=idx, form=cols[1], lemma=cols[2], upos=cols[3], head=head, deprel=cols[7])
        )
        block_end_line = line_no
    flush(block_end_line + 1)
    return sentences


def to_conllu(tokens: tuple[UDToken, ...] | list[UDToken], text: str | None = None) -> str:
    """Render tokens back to a CoNLL-U block (unused columns as ``_``)."""
    lines = []
    if text is not None:
        lines.append(f"# text = {text}")
    for t in tokens:
        lines.append(
            "\t".join([str(t.id), t.form, t.lemma, t.upos, "_", "_", str(t.head), t.deprel, "_", "_"])
        )
    return "\n".join(lines) + "\n"
