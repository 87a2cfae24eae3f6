import pytest

from monolog.conllu import ConlluParseError, TreeStructureError, parse_conllu, to_conllu
from corpus_def import toks

FIVE_TOKENS = """\
# text = A dog swims today .
1\tA\ta\tDET\t_\t_\t2\tdet\t_\t_
2\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tswims\tswim\tVERB\t_\t_\t0\troot\t_\t_
4\ttoday\ttoday\tNOUN\t_\t_\t3\tobl:tmod\t_\t_
5\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_
"""


def test_single_sentence_block():
    sents = parse_conllu(FIVE_TOKENS)
    assert len(sents) == 1
    assert len(sents[0].tokens) == 5
    assert sents[0].text == "A dog swims today ."
    assert sents[0].tokens[1].lemma == "dog"
    assert sents[0].tokens[2].head == 0


def test_empty_document():
    assert parse_conllu("") == []
    assert parse_conllu("\n\n") == []


def test_cyclic_heads_rejected():
    doc = "1\ta\ta\tDET\t_\t_\t2\tdet\t_\t_\n2\tb\tb\tNOUN\t_\t_\t1\tnsubj\t_\t_\n"
    with pytest.raises(TreeStructureError):
        parse_conllu(doc)


def test_malformed_line_reports_line_number():
    doc = "1\ta\ta\tDET\t2\tdet\n"
    with pytest.raises(ConlluParseError) as err:
        parse_conllu(doc)
    assert "line 1" in str(err.value)


def test_bad_head_index():
    doc = "1\ta\ta\tDET\t_\t_\tx\tdet\t_\t_\n"
    with pytest.raises(ConlluParseError):
        parse_conllu(doc)
    doc2 = "1\ta\ta\tDET\t_\t_\t9\tdet\t_\t_\n"
    with pytest.raises(ConlluParseError):
        parse_conllu(doc2)


def test_multiword_ranges_skipped():
    doc = (
        "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
        "2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n"
        "3\trun\trun\tVERB\t_\t_\t0\troot\t_\t_\n"
    )
    sents = parse_conllu(doc)
    assert [t.form for t in sents[0].tokens] == ["do", "n't", "run"]


def test_two_blocks_and_comments():
    doc = FIVE_TOKENS + "\n# text = Dogs run\n1\tDogs\tdog\tNOUN\t_\t_\t2\tnsubj\t_\t_\n2\trun\trun\tVERB\t_\t_\t0\troot\t_\t_\n"
    sents = parse_conllu(doc)
    assert len(sents) == 2
    assert sents[1].text == "Dogs run"


def test_roundtrip_through_renderer():
    tokens = toks("A|a|DET|2|det dog|-|NOUN|3|nsubj swims|swim|VERB|0|root")
    again = parse_conllu(to_conllu(tokens, text="A dog swims"))
    assert again[0].tokens == tokens
