#!/usr/bin/env python3
"""Walk through one inference end to end: polarity marks, chunking, and the
beam-search rewrite path for the motorcyclist example pair.

Run from the repository root:  python scripts/demo_inference.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from corpus_def import FIG_HYPOTHESIS, FIG_PARAPHRASE_TABLE, FIG_PREMISE  # noqa: E402

from monolog.chunker import all_chunks  # noqa: E402
from monolog.graph import build_graph  # noqa: E402
from monolog.kb import KnowledgeBase, default_scale  # noqa: E402
from monolog.polarity import annotate, default_lexicon  # noqa: E402
from monolog.scoring import OfflineScorer  # noqa: E402
from monolog.search import EngineContext, SearchConfig, classify  # noqa: E402


def main() -> None:
    lexicon = default_lexicon()
    print("premise:   ", " ".join(t.form for t in FIG_PREMISE))
    print("hypothesis:", " ".join(t.form for t in FIG_HYPOTHESIS))
    print()
    print("premise polarity:")
    print(" ", annotate(FIG_PREMISE, lexicon))
    print()
    print("premise chunks:")
    for c in all_chunks(build_graph(FIG_PREMISE), FIG_PREMISE):
        print(f"  {c.text}")
    print()

    kb = KnowledgeBase()
    scorer = OfflineScorer(kb=kb, paraphrase_table=dict(FIG_PARAPHRASE_TABLE))
    ctx = EngineContext(kb=kb, scale=default_scale(), scorer=scorer, lexicon=lexicon)
    result = classify(FIG_PREMISE, FIG_HYPOTHESIS, SearchConfig(), ctx)
    print(f"label: {result.label.value}")
    print("rewrite path:")
    for i, edit in enumerate(result.trace, start=1):
        what = edit.replacement or "(deleted)"
        print(f"  {i}. {edit.kind.value:12s} site={edit.site} -> {what}  [{edit.detail}]")


if __name__ == "__main__":
    main()
