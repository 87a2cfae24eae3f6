#!/usr/bin/env python3
"""Evaluate the hermetic 60-pair corpus with the offline scorer and print
the metrics table, optionally with the two ablations for comparison.

Run from the repository root:  python scripts/run_minicorpus.py [--ablations]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from monolog.evaluation import evaluate, load_sick
from monolog.kb import default_scale, load_bundled_kb
from monolog.polarity import default_lexicon
from monolog.scoring import OfflineScorer
from monolog.search import EngineContext, SearchConfig

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "tests" / "data" / "minicorpus"


def run(cfg: SearchConfig, ctx: EngineContext, tag: str) -> None:
    pairs = load_sick(CORPUS / "pairs.tsv")
    report = evaluate(pairs, cfg, ctx, parses_dir=CORPUS / "parses")
    print(f"=== {tag} ===")
    print(report.summary())
    print()


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--ablations", action="store_true", help="also run the two ablated systems")
    args = parser.parse_args()

    kb = load_bundled_kb()
    ctx = EngineContext(kb=kb, scale=default_scale(), scorer=OfflineScorer(kb=kb), lexicon=default_lexicon())
    run(SearchConfig(), ctx, "full system (offline scorer)")
    if args.ablations:
        run(SearchConfig(use_synvar=False), ctx, "- syntactic variation")
        run(SearchConfig(use_monotonicity=False), ctx, "- monotonicity")


if __name__ == "__main__":
    main()
