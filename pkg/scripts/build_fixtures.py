#!/usr/bin/env python3
"""Regenerate the committed test fixtures under tests/data/ from the
hand-written definitions in tests/corpus_def.py.

Run from the repository root:  python scripts/build_fixtures.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from corpus_def import (  # noqa: E402
    CORPUS,
    FIG_HYPOTHESIS,
    FIG_PARAPHRASE_TABLE,
    FIG_PREMISE,
    POLARITY_GOLD,
    to_conllu_block,
    toks,
)

DATA = ROOT / "tests" / "data"


def write_polarity_golden() -> None:
    out = DATA / "polarity"
    out.mkdir(parents=True, exist_ok=True)
    golden_lines = []
    for name, spec, expected in POLARITY_GOLD:
        (out / f"{name}.conllu").write_text(to_conllu_block(toks(spec)), encoding="utf-8")
        golden_lines.append(f"{name}\t{expected}")
    (out / "golden.tsv").write_text("\n".join(golden_lines) + "\n", encoding="utf-8")


def write_minicorpus() -> None:
    out = DATA / "minicorpus"
    parses = out / "parses"
    parses.mkdir(parents=True, exist_ok=True)
    rows = ["pair_ID\tsentence_A\tsentence_B\tentailment_judgment"]
    for pid, label, prem_spec, hyp_spec in CORPUS:
        prem, hyp = toks(prem_spec), toks(hyp_spec)
        rows.append(
            "\t".join(
                [
                    pid,
                    " ".join(t.form for t in prem),
                    " ".join(t.form for t in hyp),
                    label,
                ]
            )
        )
        (parses / f"{pid}.conllu").write_text(
            to_conllu_block(prem) + "\n" + to_conllu_block(hyp), encoding="utf-8"
        )
    (out / "pairs.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_cli_fixtures() -> None:
    out = DATA / "cli"
    out.mkdir(parents=True, exist_ok=True)
    every = next(spec for name, spec, _ in POLARITY_GOLD if name == "every-healthy-person")
    (out / "every.conllu").write_text(to_conllu_block(toks(every)), encoding="utf-8")
    dress = (
        "The|the|DET|2|det woman|-|NOUN|8|nsubj in|-|ADP|6|case a|a|DET|6|det pink|-|ADJ|6|amod "
        "dress|-|NOUN|2|nmod is|be|AUX|8|aux dancing|dance|VERB|0|root"
    )
    (out / "pink_dress.conllu").write_text(to_conllu_block(toks(dress)), encoding="utf-8")
    (out / "fig_premise.conllu").write_text(to_conllu_block(FIG_PREMISE), encoding="utf-8")
    (out / "fig_hypothesis.conllu").write_text(to_conllu_block(FIG_HYPOTHESIS), encoding="utf-8")
    table_lines = [f"{a}\t{b}\t{alpha}" for (a, b), alpha in sorted(FIG_PARAPHRASE_TABLE.items())]
    (out / "fig_table.tsv").write_text("\n".join(table_lines) + "\n", encoding="utf-8")


def write_loader_toys() -> None:
    out = DATA / "loaders"
    out.mkdir(parents=True, exist_ok=True)
    sick = [
        "pair_ID\tsentence_A\tsentence_B\tentailment_judgment",
        "1\tA dog swims\tA dog moves\tENTAILMENT",
        "2\tNo dogs are barking\tSome dogs are barking\tCONTRADICTION",
        "3\tA man is reading a book\tA man is reading a letter\tNEUTRAL",
        "4\tA man is running\tA man is running\tENTAILMENT",
    ]
    (out / "sick_toy.tsv").write_text("\n".join(sick) + "\n", encoding="utf-8")
    bad = sick[:2] + ["9\tA dog swims\tA dog moves\tMAYBE"]
    (out / "sick_bad_label.tsv").write_text("\n".join(bad) + "\n", encoding="utf-8")
    med = [
        "index\tgenre\tsentence1\tsentence2\tgold_label",
        "m1\tupward_monotone\tA dog swims\tA dog moves\tentailment",
        "m2\tupward_monotone\tA dog swims\tA cat moves\tneutral",
        "m3\tdownward_monotone\tNo flower is blooming\tNo rose is blooming\tentailment",
        "m4\tdownward_monotone\tNo dog is barking\tNo animal is barking\tneutral",
        "m5\tnpi\tA man is running\tA man is running\tentailment",
    ]
    (out / "med_toy.tsv").write_text("\n".join(med) + "\n", encoding="utf-8")
    (out / "med_missing_col.tsv").write_text(
        "index\tsentence1\tsentence2\tgold_label\nm1\ta\tb\tentailment\n", encoding="utf-8"
    )


def main() -> None:
    write_polarity_golden()
    write_minicorpus()
    write_cli_fixtures()
    write_loader_toys()
    print(f"fixtures written under {DATA}")


if __name__ == "__main__":
    main()
