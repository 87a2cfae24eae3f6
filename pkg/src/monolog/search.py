"""Beam-search driver: expands rewrite states guided by the controller's
recommendations, ranks them by embedding distance to the hypothesis, and
falls back to contradiction detection when no rewrite path exists."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .contradiction import analyze as analyze_contradiction
from .conllu import UDToken
from .generation import (
    Edit,
    GeneratedSentence,
    build_modifier_map,
    lexical_infer,
    make_state,
    phrasal_infer,
    syntactic_variation_infer,
)
from .graph import align, build_graph, recommend
from .kb import KnowledgeBase, QuantifierScale
from .polarity import QuantifierLexicon
from .scoring import OfflineScorer, ScoringError, sentence_distance


class Label(Enum):
    ENTAIL = "ENTAIL"
    CONTRADICT = "CONTRADICT"
    NEUTRAL = "NEUTRAL"


@dataclass(frozen=True)
class SearchConfig:
    beam_width: int = 10
    max_depth: int = 7
    use_monotonicity: bool = True   # lexical + phrasal generators
    use_synvar: bool = True
    paraphrase_threshold: float = 0.85
    strict_scoring: bool = False    # propagate scorer failures instead of degrading

    def __post_init__(self) -> None:
        if self.beam_width < 1 or self.max_depth < 1:
            raise ValueError("beam_width and max_depth must be positive")

    def enabled_modules(self) -> tuple[str, ...]:
        mods: list[str] = []
        if self.use_monotonicity:
            mods += ["lexical", "phrasal"]
        if self.use_synvar:
            mods.append("synvar")
        return tuple(mods)


@dataclass
class BeamState:
    sentence: GeneratedSentence
    dist: float
    parent: "BeamState | None"
    order: int  # insertion counter; breaks distance ties deterministically

    def trace(self) -> tuple[Edit, ...]:
        edits: list[Edit] = []
        cur: BeamState | None = self
        while cur is not None:
            if cur.sentence.edit is not None:
                edits.append(cur.sentence.edit)
            cur = cur.parent
        return tuple(reversed(edits))


@dataclass(frozen=True)
class InferenceResult:
    label: Label
    trace: tuple[Edit, ...] = ()
    warnings: tuple[str, ...] = ()


@dataclass
class EngineContext:
    """Read-only dependencies shared across searches."""

    kb: KnowledgeBase
    scale: QuantifierScale
    scorer: object
    lexicon: QuantifierLexicon | None = None


class DegradingScorer:
    """Falls back to the deterministic backend once the remote one fails."""

    def __init__(self, primary, fallback: OfflineScorer):
        self._primary = primary
        self._fallback = fallback
        self.degraded = False
        self.warnings: list[str] = []

    @property
    def kind(self) -> str:
        return self._fallback.kind if self.degraded else self._primary.kind

    def _call(self, name: str, *args, **kwargs):
        backend = self._fallback if self.degraded else self._primary
        try:
            return getattr(backend, name)(*args, **kwargs)
        except ScoringError as exc:
            if self.degraded:
                raise
            self.degraded = True
            self.warnings.append(f"scorer degraded to offline backend: {exc}")
            return getattr(self._fallback, name)(*args, **kwargs)

    def embed(self, text):
        return self._call("embed", text)

    def word_similarity(self, w1, w2, pos1=None, pos2=None):
        return self._call("word_similarity", w1, w2, pos1, pos2)

    def paraphrase_prob(self, a, b):
        return self._call("paraphrase_prob", a, b)


def _strip_punct(tokens: tuple[UDToken, ...]) -> tuple[UDToken, ...]:
    return tuple(t for t in tokens if t.upos != "PUNCT")


def normalized_lemmas(tokens: tuple[UDToken, ...]) -> tuple[str, ...]:
    return tuple(t.lemma.lower() for t in _strip_punct(tokens))


def is_goal(tokens: tuple[UDToken, ...], hyp_tokens: tuple[UDToken, ...]) -> bool:
    """Lowercased lemma sequences equal after punctuation stripping."""
    return normalized_lemmas(tokens) == normalized_lemmas(hyp_tokens)


def dist(tokens: tuple[UDToken, ...], hyp_tokens: tuple[UDToken, ...], scorer) -> float:
    """Euclidean distance between the two sentences' embeddings (on lemmas)."""
    return sentence_distance(
        scorer, " ".join(normalized_lemmas(tokens)), " ".join(normalized_lemmas(hyp_tokens))
    )


def _expand_state(
    state: BeamState,
    hyp_tokens: tuple[UDToken, ...],
    cfg: SearchConfig,
    ctx: EngineContext,
    scorer,
    modifier_map,
    warnings: list[str],
) -> list[GeneratedSentence]:
    enabled = set(cfg.enabled_modules())
    if not enabled:
        return []
    gp = build_graph(state.sentence.tokens)
    gh = build_graph(hyp_tokens)
    alignment = align(gp, gh, scorer.word_similarity)
    rec = recommend(gp, gh, alignment)
    recommended = rec.modules() & enabled

    def run(modules: set[str]) -> list[GeneratedSentence]:
        children: list[GeneratedSentence] = []
        if "lexical" in modules:
            children += lexical_infer(state.sentence, ctx.kb, ctx.scale, hyp_tokens, ctx.lexicon)
        if "phrasal" in modules:
            children += phrasal_infer(state.sentence, modifier_map, ctx.lexicon)
        if "synvar" in modules:
            try:
                children += syntactic_variation_infer(
                    state.sentence, hyp_tokens, scorer, ctx.lexicon, cfg.paraphrase_threshold
                )
            except ScoringError as exc:
                if cfg.strict_scoring:
                    raise
                warnings.append(f"syntactic variation skipped: {exc}")
        return children

    children = run(recommended) if recommended else []
    if not children:
        # recommendations may be wrong or empty: run everything once as fallback
        children = run(enabled)
    return children


def beam_step(
    queue: list[BeamState],
    hyp_tokens: tuple[UDToken, ...],
    cfg: SearchConfig,
    ctx: EngineContext,
    scorer,
    modifier_map,
    visited: set[tuple[str, ...]],
    counter: list[int],
    warnings: list[str],
) -> tuple[list[BeamState], BeamState | None]:
    """Expand the top beam_width states; return the next queue (pruned to
    beam_width) and the goal state if one was generated."""
    children: list[BeamState] = []
    for state in queue[: cfg.beam_width]:
        if state.sentence.depth >= cfg.max_depth:
            continue
        for child in _expand_state(state, hyp_tokens, cfg, ctx, scorer, modifier_map, warnings):
            key = normalized_lemmas(child.tokens)
            if key in visited:
                continue
            visited.add(key)
            counter[0] += 1
            bs = BeamState(
                sentence=child,
                dist=dist(child.tokens, hyp_tokens, scorer),
                parent=state,
                order=counter[0],
            )
            if is_goal(child.tokens, hyp_tokens):
                return [], bs
            children.append(bs)
    children.sort(key=lambda s: (s.dist, s.order))
    return children[: cfg.beam_width], None


def classify(
    premise_tokens: tuple[UDToken, ...],
    hyp_tokens: tuple[UDToken, ...],
    cfg: SearchConfig,
    ctx: EngineContext,
) -> InferenceResult:
    """Search for a rewrite path premise -> hypothesis; on exhaustion fall
    back to contradiction detection, else neutral."""
    warnings: list[str] = []
    scorer = ctx.scorer
    if not cfg.strict_scoring and not isinstance(scorer, (OfflineScorer, DegradingScorer)):
        scorer = DegradingScorer(scorer, OfflineScorer(kb=ctx.kb))

    root = make_state(premise_tokens, ctx.lexicon)
    if is_goal(root.tokens, hyp_tokens):
        return InferenceResult(label=Label.ENTAIL, trace=(), warnings=tuple(warnings))

    modifier_map = build_modifier_map(hyp_tokens)
    visited: set[tuple[str, ...]] = {normalized_lemmas(root.tokens)}
    counter = [0]
    queue = [BeamState(sentence=root, dist=dist(root.tokens, hyp_tokens, scorer), parent=None, order=0)]

    for _depth in range(cfg.max_depth):
        queue, goal = beam_step(
            queue, hyp_tokens, cfg, ctx, scorer, modifier_map, visited, counter, warnings
        )
        if isinstance(scorer, DegradingScorer):
            for w in scorer.warnings:
                if w not in warnings:
                    warnings.append(w)
        if goal is not None:
            return InferenceResult(label=Label.ENTAIL, trace=goal.trace(), warnings=tuple(warnings))
        if not queue:
            break

    verdict = analyze_contradiction(
        premise_tokens, hyp_tokens, ctx.kb, ctx.scale, scorer.word_similarity, ctx.lexicon
    )
    if verdict.verdict:
        return InferenceResult(label=Label.CONTRADICT, trace=(), warnings=tuple(warnings))
    return InferenceResult(label=Label.NEUTRAL, trace=(), warnings=tuple(warnings))
