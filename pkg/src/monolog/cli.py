"""Single entry point wiring all modules.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 strict-mode
scorer failure.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .chunker import all_chunks
from .conllu import ConlluParseError, TreeStructureError, parse_conllu
from .contradiction import analyze as analyze_contradiction
from .evaluation import DatasetLoadError, evaluate, load_med, load_sick
from .generation import (
    build_modifier_map,
    lexical_infer,
    make_state,
    phrasal_infer,
    syntactic_variation_infer,
)
from .graph import align, build_graph
from .kb import (
    KBLoadError,
    KnowledgeBase,
    LexicalRelationKind,
    default_scale,
    load_bundled_kb,
    load_dump,
)
from .polarity import annotate, default_lexicon
from .scoring import OfflineScorer, RemoteScorer, ScoringError
from .search import EngineContext, SearchConfig, classify


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise UsageError(message)


def _load_config_file(path: str | None) -> dict[str, str]:
    """Flat TOML-style ``key = value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    out: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip().strip('"')
    return out


def _resolve(args, file_cfg: dict[str, str], key: str, builtin, cast=str):
    flag_val = getattr(args, key, None)
    if flag_val is not None:
        return flag_val
    if key in file_cfg:
        return cast(file_cfg[key])
    return builtin


def _build_kb(args) -> KnowledgeBase:
    paths = getattr(args, "kb", None)
    if not paths:
        return load_bundled_kb()
    kb = KnowledgeBase()
    for p in paths:
        load_dump(p, provenance="user-dump", into=kb)
    return kb


def _load_paraphrase_table(path: str | None) -> dict[tuple[str, str], float]:
    if not path:
        return {}
    table: dict[tuple[str, str], float] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        a, b, alpha = raw.split("\t")
        table[(a.strip().lower(), b.strip().lower())] = float(alpha)
    return table


def _build_scorer(args, file_cfg: dict[str, str], kb: KnowledgeBase):
    kind = _resolve(args, file_cfg, "scorer", "offline")
    url = getattr(args, "scorer_url", None) or file_cfg.get("scorer_url") or os.environ.get("MONOLOG_SCORER_URL")
    timeout = int(_resolve(args, file_cfg, "scorer_timeout_ms", 5000, int))
    if kind == "remote":
        if not url:
            raise UsageError("remote scorer requires --scorer-url or MONOLOG_SCORER_URL")
        return RemoteScorer(url, timeout_ms=timeout)
    table = _load_paraphrase_table(getattr(args, "paraphrase_table", None))
    return OfflineScorer(kb=kb, paraphrase_table=table)


def _search_config(args, file_cfg: dict[str, str]) -> SearchConfig:
    return SearchConfig(
        beam_width=int(_resolve(args, file_cfg, "beam_width", 10, int)),
        max_depth=int(_resolve(args, file_cfg, "max_depth", 7, int)),
        use_monotonicity=not getattr(args, "no_monotonicity", False),
        use_synvar=not getattr(args, "no_synvar", False),
        strict_scoring=bool(getattr(args, "strict", False)),
    )


def _read_sentences(path: str):
    sents = parse_conllu(Path(path).read_text(encoding="utf-8"))
    if not sents:
        raise ConlluParseError(f"{path}: no sentences found")
    return sents


def _pair_tokens(args, scorer):
    if getattr(args, "premise_conllu", None) and getattr(args, "hypothesis_conllu", None):
        prem = _read_sentences(args.premise_conllu)[0].tokens
        hyp = _read_sentences(args.hypothesis_conllu)[0].tokens
        return prem, hyp
    if getattr(args, "premise", None) and getattr(args, "hypothesis", None):
        if not hasattr(scorer, "parse"):
            raise UsageError("raw-text input needs the remote scorer's /parse endpoint")
        blocks = parse_conllu("\n".join(scorer.parse([args.premise, args.hypothesis])))
        return blocks[0].tokens, blocks[1].tokens
    raise UsageError("provide --premise-conllu/--hypothesis-conllu (or --premise/--hypothesis with a remote scorer)")


def cmd_annotate(args, file_cfg) -> int:
    lexicon = default_lexicon()
    for sent in _read_sentences(args.conllu):
        print(annotate(sent.tokens, lexicon))
    return 0


def cmd_chunk(args, file_cfg) -> int:
    first = True
    for sent in _read_sentences(args.conllu):
        if not first:
            print()
        first = False
        g = build_graph(sent.tokens)
        for c in sorted(all_chunks(g, sent.tokens), key=lambda c: c.span):
            print(c.text)
    return 0


def cmd_align(args, file_cfg) -> int:
    kb = _build_kb(args)
    scorer = _build_scorer(args, file_cfg, kb)
    prem, hyp = _pair_tokens(args, scorer)
    gp, gh = build_graph(prem), build_graph(hyp)
    alignment = align(gp, gh, scorer.word_similarity)
    p_by_id = {t.id: t for t in prem}
    h_by_id = {t.id: t for t in hyp}
    for p, h, s in alignment.pairs:
        print(f"{p_by_id[p].form} -> {h_by_id[h].form}\t{s:.2f}")
    return 0


def cmd_generate(args, file_cfg) -> int:
    kb = _build_kb(args)
    scorer = _build_scorer(args, file_cfg, kb)
    prem, hyp = _pair_tokens(args, scorer)
    lexicon = default_lexicon()
    state = make_state(prem, lexicon)
    if args.module == "lexical":
        outs = lexical_infer(state, kb, default_scale(), hyp, lexicon)
    elif args.module == "phrasal":
        outs = phrasal_infer(state, build_modifier_map(hyp), lexicon)
    else:
        outs = syntactic_variation_infer(state, hyp, scorer, lexicon)
    for o in outs:
        print(o.surface())
    return 0


def cmd_contradict(args, file_cfg) -> int:
    kb = _build_kb(args)
    scorer = _build_scorer(args, file_cfg, kb)
    prem, hyp = _pair_tokens(args, scorer)
    analysis = analyze_contradiction(prem, hyp, kb, default_scale(), scorer.word_similarity)
    for s in analysis.signatures:
        status = "cancelled" if s.cancelled else "active"
        print(f"signature\t{s.kind.value}\t{s.note}\t{status}")
    if analysis.meaning_preserved is not None:
        print(f"meaning_preserved\t{str(analysis.meaning_preserved).lower()}")
    print(f"verdict\t{'CONTRADICT' if analysis.verdict else 'not-CONTRADICT'}")
    return 0


def cmd_infer(args, file_cfg) -> int:
    kb = _build_kb(args)
    scorer = _build_scorer(args, file_cfg, kb)
    prem, hyp = _pair_tokens(args, scorer)
    cfg = _search_config(args, file_cfg)
    ctx = EngineContext(kb=kb, scale=default_scale(), scorer=scorer, lexicon=default_lexicon())
    result = classify(prem, hyp, cfg, ctx)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(result.label.value)
    for e in result.trace:
        print(f"step\t{e.kind.value}\tsite={','.join(map(str, e.site))}\t{e.replacement}\t{e.detail}")
    return 0


def cmd_eval(args, file_cfg) -> int:
    kb = _build_kb(args)
    scorer = _build_scorer(args, file_cfg, kb)
    loader = load_sick if args.dataset == "sick" else load_med
    pairs = loader(args.file)
    cfg = _search_config(args, file_cfg)
    ctx = EngineContext(kb=kb, scale=default_scale(), scorer=scorer, lexicon=default_lexicon())
    workers = int(_resolve(args, file_cfg, "workers", 1, int))
    report = evaluate(
        pairs,
        cfg,
        ctx,
        parses_dir=args.parses,
        workers=workers,
        config_note={
            "dataset": args.dataset,
            "beam_width": cfg.beam_width,
            "max_depth": cfg.max_depth,
            "use_monotonicity": cfg.use_monotonicity,
            "use_synvar": cfg.use_synvar,
            "scorer": getattr(scorer, "kind", "offline-deterministic"),
        },
    )
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n", encoding="utf-8")
        print(f"report written to {args.out}", file=sys.stderr)
    print(report.summary())
    return 0


def cmd_kb(args, file_cfg) -> int:
    kb = _build_kb(args)
    try:
        kind = LexicalRelationKind(args.relation.lower())
    except ValueError:
        raise UsageError(f"unknown relation {args.relation!r}") from None
    for lemma in sorted(kb.query(args.lemma, args.pos, kind)):
        print(lemma)
    return 0


def _add_scorer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scorer", choices=["offline", "remote"], default=None)
    p.add_argument("--scorer-url", default=None)
    p.add_argument("--scorer-timeout-ms", type=int, default=None)
    p.add_argument("--strict", action="store_true", help="scorer failures abort with exit 3")
    p.add_argument("--kb", action="append", default=None, help="TSV dump path (repeatable; default: bundled)")
    p.add_argument("--paraphrase-table", default=None, help="TSV of pinned paraphrase scores (offline scorer)")


def _add_pair_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--premise-conllu")
    p.add_argument("--hypothesis-conllu")
    p.add_argument("--premise")
    p.add_argument("--hypothesis")


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beam", dest="beam_width", type=int, default=None)
    p.add_argument("--max-depth", dest="max_depth", type=int, default=None)
    p.add_argument("--no-synvar", action="store_true")
    p.add_argument("--no-monotonicity", action="store_true")


def build_parser() -> _Parser:
    parser = _Parser(prog="monolog", description="Monotonicity + neural NLI engine")
    parser.add_argument("--config", default=None, help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="print polarity-annotated sentences")
    p.add_argument("--conllu", required=True)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("chunk", help="print phrase chunks, grouped per sentence")
    p.add_argument("--conllu", required=True)
    p.set_defaults(func=cmd_chunk)

    p = sub.add_parser("align", help="print aligned vertex pairs with scores")
    _add_pair_flags(p)
    _add_scorer_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("generate", help="run one inference generator")
    p.add_argument("--module", choices=["lexical", "phrasal", "synvar"], required=True)
    _add_pair_flags(p)
    _add_scorer_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("contradict", help="print contradiction signatures and verdict")
    _add_pair_flags(p)
    _add_scorer_flags(p)
    p.set_defaults(func=cmd_contradict)

    p = sub.add_parser("infer", help="classify a premise/hypothesis pair")
    _add_pair_flags(p)
    _add_scorer_flags(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("eval", help="evaluate a dataset file")
    p.add_argument("--dataset", choices=["sick", "med"], required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--parses", default=None, help="directory of per-pair CoNLL-U files")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("--workers", type=int, default=None)
    _add_scorer_flags(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("kb", help="query the knowledge base")
    kb_sub = p.add_subparsers(dest="kb_command", required=True)
    q = kb_sub.add_parser("query")
    q.add_argument("lemma")
    q.add_argument("pos")
    q.add_argument("relation")
    q.add_argument("--kb", action="append", default=None)
    q.set_defaults(func=cmd_kb)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        file_cfg = _load_config_file(args.config)
        return args.func(args, file_cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ScoringError as exc:
        print(f"scorer failure: {exc}", file=sys.stderr)
        return 3
    except (ConlluParseError, TreeStructureError, KBLoadError, DatasetLoadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
