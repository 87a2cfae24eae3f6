import json

import pytest

from monolog.evaluation import (
    DatasetLoadError,
    evaluate,
    load_med,
    load_sick,
)
from monolog.search import Label, SearchConfig


def test_load_sick_toy(data_dir):
    pairs = load_sick(data_dir / "loaders" / "sick_toy.tsv")
    assert len(pairs) == 4
    assert pairs[0].gold is Label.ENTAIL
    assert pairs[1].gold is Label.CONTRADICT
    assert pairs[2].gold is Label.NEUTRAL
    assert pairs[0].premise == "A dog swims"


def test_load_sick_header_only(tmp_path):
    p = tmp_path / "empty.tsv"
    p.write_text("pair_ID\tsentence_A\tsentence_B\tentailment_judgment\n", encoding="utf-8")
    assert load_sick(p) == []


def test_load_sick_unknown_label(data_dir):
    with pytest.raises(DatasetLoadError) as err:
        load_sick(data_dir / "loaders" / "sick_bad_label.tsv")
    assert "row 3" in str(err.value)


def test_load_med_toy(data_dir):
    pairs = load_med(data_dir / "loaders" / "med_toy.tsv")
    assert len(pairs) == 5
    assert [p.monotonicity for p in pairs] == ["upward", "upward", "downward", "downward", "none"]
    assert pairs[0].gold is Label.ENTAIL
    assert pairs[1].gold is Label.NEUTRAL


def test_load_med_missing_column(data_dir):
    with pytest.raises(DatasetLoadError):
        load_med(data_dir / "loaders" / "med_missing_col.tsv")


def test_load_med_all_upward(tmp_path):
    p = tmp_path / "med.tsv"
    p.write_text(
        "index\tgenre\tsentence1\tsentence2\tgold_label\n"
        "1\tupward_monotone\ta\tb\tentailment\n"
        "2\tupward_monotone\tc\td\tneutral\n",
        encoding="utf-8",
    )
    assert all(pair.monotonicity == "upward" for pair in load_med(p))


# ------------------------------------------------------------ evaluate

def test_evaluate_minicorpus_subset(ctx, data_dir):
    pairs = load_sick(data_dir / "minicorpus" / "pairs.tsv")[:8]
    report = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    assert report.total == 8
    assert report.accuracy == 1.0
    names = ["ENTAIL", "CONTRADICT", "NEUTRAL"]
    diag = sum(report.confusion[n][n] for n in names)
    assert diag == 8


def test_metrics_arithmetic(ctx, data_dir):
    # 4-pair toy set with one forced miss -> accuracy 0.75
    pairs = load_sick(data_dir / "minicorpus" / "pairs.tsv")[:4]
    flipped = [pairs[0], pairs[1], pairs[2], pairs[3]]
    import dataclasses

    flipped[3] = dataclasses.replace(flipped[3], gold=Label.CONTRADICT)  # engine will say ENTAIL
    report = evaluate(flipped, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    assert report.total == 4
    assert report.accuracy == 0.75


def test_confusion_consistency(ctx, data_dir):
    pairs = load_sick(data_dir / "minicorpus" / "pairs.tsv")[:10]
    report = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    names = ["ENTAIL", "CONTRADICT", "NEUTRAL"]
    total = sum(report.confusion[g][p] for g in names for p in names)
    assert total == report.total
    diag = sum(report.confusion[n][n] for n in names)
    assert report.accuracy == diag / report.total
    for n in names:
        pred_n = sum(report.confusion[g][n] for g in names)
        gold_n = sum(report.confusion[n][p] for p in names)
        if pred_n:
            assert report.precision[n] == report.confusion[n][n] / pred_n
        if gold_n:
            assert report.recall[n] == report.confusion[n][n] / gold_n


def test_unparseable_pair_flagged_not_fatal(ctx, tmp_path, data_dir):
    import shutil

    parses = tmp_path / "parses"
    parses.mkdir()
    shutil.copy(data_dir / "minicorpus" / "parses" / "E01.conllu", parses / "E01.conllu")
    pairs = load_sick(data_dir / "minicorpus" / "pairs.tsv")[:2]  # E02 parse missing
    report = evaluate(pairs, SearchConfig(), ctx, parses_dir=parses)
    assert report.total == 2
    flagged = [r for r in report.records if r["parse_failed"]]
    assert len(flagged) == 1
    assert flagged[0]["predicted"] == "NEUTRAL"


def test_report_deterministic_bytes(ctx, data_dir):
    pairs = load_sick(data_dir / "minicorpus" / "pairs.tsv")[:6]
    r1 = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    r2 = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    assert r1.to_json().encode() == r2.to_json().encode()
    json.loads(r1.to_json())  # valid JSON


def test_parallel_matches_serial(ctx, data_dir):
    pairs = load_sick(data_dir / "minicorpus" / "pairs.tsv")[:10]
    r1 = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses", workers=1)
    r4 = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses", workers=4)
    assert r1.to_json() == r4.to_json()


def test_med_breakdown_rows(ctx, tmp_path, data_dir):
    med = tmp_path / "med.tsv"
    med.write_text(
        "index\tgenre\tsentence1\tsentence2\tgold_label\n"
        "E03\tupward_monotone\tA dog swims\tA dog moves\tentailment\n"
        "E05\tdownward_monotone\tNo flower is blooming\tNo rose is blooming\tentailment\n"
        "N07\tdownward_monotone\tNo dog is barking\tNo animal is barking\tneutral\n",
        encoding="utf-8",
    )
    pairs = load_med(med)
    report = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    assert report.med_breakdown is not None
    assert set(report.med_breakdown) >= {"upward", "downward", "all"}
    assert report.med_breakdown["all"] == report.accuracy
    assert "monotonicity breakdown" in report.summary()


def test_med_contradict_counts_as_nonentailment(ctx, tmp_path, data_dir):
    med = tmp_path / "med.tsv"
    med.write_text(
        "index\tgenre\tsentence1\tsentence2\tgold_label\n"
        "C01\tdownward_monotone\tNo dogs are barking\tSome dogs are barking\tneutral\n",
        encoding="utf-8",
    )
    pairs = load_med(med)
    report = evaluate(pairs, SearchConfig(), ctx, parses_dir=data_dir / "minicorpus" / "parses")
    # the engine says CONTRADICT; on the two-way benchmark that scores as NEUTRAL
    assert report.accuracy == 1.0
