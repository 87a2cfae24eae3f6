import json

import pytest

from monolog.cli import main


@pytest.fixture()
def cli(data_dir, capsys):
    def run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


def test_help_exits_zero(cli):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_missing_subcommand_is_usage_error(cli):
    code, out, err = cli()
    assert code == 1
    assert out == ""


def test_annotate_paper_sentence(cli, data_dir):
    code, out, err = cli("annotate", "--conllu", str(data_dir / "cli" / "every.conllu"))
    assert code == 0
    assert out.strip() == "Every^↑ healthy^↓ person^↓ plays^↑ sports^↑"


def test_annotate_missing_file_exit_2(cli, tmp_path):
    code, out, err = cli("annotate", "--conllu", str(tmp_path / "nope.conllu"))
    assert code == 2
    assert "error" in err
    assert out == ""


def test_chunk_pink_dress(cli, data_dir):
    code, out, err = cli("chunk", "--conllu", str(data_dir / "cli" / "pink_dress.conllu"))
    assert code == 0
    lines = out.strip().splitlines()
    assert "in a pink dress" in lines
    assert "The woman in a pink dress" in lines


def test_align_outputs_pairs(cli, data_dir):
    code, out, err = cli(
        "align",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
    )
    assert code == 0
    assert "motorcyclist -> motorcyclist\t1.00" in out
    assert "riding -> riding\t1.00" in out


def test_infer_fig1a_with_table(cli, data_dir):
    code, out, err = cli(
        "infer",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
        "--paraphrase-table", str(data_dir / "cli" / "fig_table.tsv"),
        "--kb", "/dev/null",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "ENTAIL"
    kinds = [l.split("\t")[1] for l in lines[1:]]
    assert kinds.count("PHRASAL_DEL") == 2
    assert kinds.count("SYN_VAR") == 1


def test_infer_ablation_no_synvar(cli, data_dir):
    code, out, err = cli(
        "infer",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
        "--paraphrase-table", str(data_dir / "cli" / "fig_table.tsv"),
        "--kb", "/dev/null",
        "--no-synvar",
    )
    assert code == 0
    assert out.strip().splitlines()[0] == "NEUTRAL"


def test_infer_missing_files_exit_2(cli, tmp_path):
    code, out, err = cli(
        "infer",
        "--premise-conllu", str(tmp_path / "a.conllu"),
        "--hypothesis-conllu", str(tmp_path / "b.conllu"),
    )
    assert code == 2


def test_infer_without_inputs_usage_error(cli):
    code, out, err = cli("infer")
    assert code == 1
    assert "usage error" in err


def test_remote_requires_url(cli, data_dir, monkeypatch):
    monkeypatch.delenv("MONOLOG_SCORER_URL", raising=False)
    code, out, err = cli(
        "infer",
        "--scorer", "remote",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
    )
    assert code == 1


def test_strict_scorer_failure_exit_3(cli, data_dir):
    code, out, err = cli(
        "infer",
        "--scorer", "remote",
        "--scorer-url", "http://127.0.0.1:1",
        "--scorer-timeout-ms", "100",
        "--strict",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
    )
    assert code == 3
    assert "scorer failure" in err


def test_kb_query(cli):
    code, out, err = cli("kb", "query", "swim", "VERB", "hypernym")
    assert code == 0
    assert "move" in out.splitlines()


def test_kb_query_unknown_relation(cli):
    code, out, err = cli("kb", "query", "swim", "VERB", "bogus")
    assert code == 1


def test_contradict_command(cli, tmp_path, data_dir):
    from corpus_def import corpus_pair, to_conllu_block

    prem, hyp, _ = corpus_pair("C01")
    p = tmp_path / "p.conllu"
    h = tmp_path / "h.conllu"
    p.write_text(to_conllu_block(prem), encoding="utf-8")
    h.write_text(to_conllu_block(hyp), encoding="utf-8")
    code, out, err = cli("contradict", "--premise-conllu", str(p), "--hypothesis-conllu", str(h))
    assert code == 0
    assert "quantifier_negation" in out
    assert out.strip().endswith("verdict\tCONTRADICT")


def test_generate_command(cli, tmp_path):
    from corpus_def import corpus_pair, to_conllu_block

    prem, hyp, _ = corpus_pair("E03")
    p, h = tmp_path / "p.conllu", tmp_path / "h.conllu"
    p.write_text(to_conllu_block(prem), encoding="utf-8")
    h.write_text(to_conllu_block(hyp), encoding="utf-8")
    code, out, err = cli(
        "generate", "--module", "lexical", "--premise-conllu", str(p), "--hypothesis-conllu", str(h)
    )
    assert code == 0
    assert "A dog moves" in out.splitlines()


def test_eval_minicorpus_deterministic(cli, data_dir, tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for out_path in (out1, out2):
        code, out, err = cli(
            "eval",
            "--dataset", "sick",
            "--file", str(data_dir / "minicorpus" / "pairs.tsv"),
            "--parses", str(data_dir / "minicorpus" / "parses"),
            "--out", str(out_path),
        )
        assert code == 0
        assert "accuracy: 1.0000" in out
        assert "report written" in err  # diagnostics on stderr only
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["accuracy"] == 1.0
    assert report["total"] == 60


def test_stdout_identical_across_runs(cli, data_dir):
    args = ("annotate", "--conllu", str(data_dir / "cli" / "every.conllu"))
    _, out1, _ = cli(*args)
    _, out2, _ = cli(*args)
    assert out1 == out2


def test_config_file_precedence(cli, data_dir, tmp_path):
    cfg = tmp_path / "monolog.cfg"
    cfg.write_text("beam_width = 3\nmax_depth = 2\n", encoding="utf-8")
    # config max_depth 2 is hit before the 3-step figure path unless the flag overrides it
    code, out, err = cli(
        "--config", str(cfg),
        "infer",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
        "--paraphrase-table", str(data_dir / "cli" / "fig_table.tsv"),
        "--kb", "/dev/null",
    )
    assert code == 0
    assert out.strip().splitlines()[0] == "NEUTRAL"
    code, out, err = cli(
        "--config", str(cfg),
        "infer",
        "--premise-conllu", str(data_dir / "cli" / "fig_premise.conllu"),
        "--hypothesis-conllu", str(data_dir / "cli" / "fig_hypothesis.conllu"),
        "--paraphrase-table", str(data_dir / "cli" / "fig_table.tsv"),
        "--kb", "/dev/null",
        "--max-depth", "7",
    )
    assert code == 0
    assert out.strip().splitlines()[0] == "ENTAIL"
