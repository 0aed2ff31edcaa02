import datetime
import io

import pytest

from fncnl.corpus import (NONE, BioError, FrameAnnotation, FrameElement, Sentence, Token, decode_bio,
                          detokenize, encode_bio, extract_fe_window, extract_window, format_corpus,
                          load_corpus, parse_corpus_text, rel_pos_bucket, write_corpus)
from fncnl.errors import FormatError

TWO_SENTENCES = (
    "# doc_id=leta-1\n"
    "# date=2012-05-15\n"
    "Sveiki\tsveiki\tUH\tO\t#NONE#\tO\tO\n"
    "\n"
    "# doc_id=leta-1\n"
    "Ieva\tieva\tNNP\tPERSON\t#NONE#\tO\tB-Employee\n"
    "Akuratere\takuratere\tNNP\tPERSON\t#NONE#\tO\tI-Employee\n"
    "bija\tbūt\tVBD\tO\t#NONE#\tO\tO\n"
    "solista\tsolists\tNN\tO\tsinger.n.01\tO\tB-Position\n"
    "amatā\tamats\tNN\tO\temploy.v.01\tT:Being_employed\tO\n"
)


def toks(*lemmas):
    return tuple(Token(w, w, "NN", "O", f"{w}.n.01") for w in lemmas)


def test_two_sentence_fixture():
    sents = parse_corpus_text(TWO_SENTENCES)
    assert len(sents) == 2
    first, second = sents
    assert first.pub_date == datetime.date(2012, 5, 15) and first.gold_annotations == ()
    assert second.pub_date is None
    (ann,) = second.gold_annotations
    assert ann.frame == "Being_employed" and ann.target == (4, 5)
    assert [(e.fe, e.span) for e in ann.elements] == [("Employee", (0, 2)), ("Position", (3, 4))]
    assert second.span_text((0, 2)) == "Ieva Akuratere"


def test_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("")
    assert load_corpus(path) == []


def test_dangling_inside_tag_reports_line():
    text = "# doc_id=x\na\ta\tDT\tO\t#NONE#\tO\tO\nb\tb\tNN\tO\t#NONE#\tT:Attack\tI-Employer\n"
    with pytest.raises(FormatError, match=r"<string>:3: dangling I-Employer"):
        parse_corpus_text(text)


@pytest.mark.parametrize("text,message", [
    ("a\ta\tDT\tO\t#NONE#\tO\n", r":1: expected 7 tab-separated columns, found 6"),
    ("# date=2012-13-01\na\ta\tDT\tO\t#NONE#\tO\tO\n", r":1: unparseable date header"),
    ("a\ta\tDT\tO\t#NONE#\tO\tB-Time\n", r":1: ROLE tags in a block without a target"),
    ("a\ta\tDT\tO\t#NONE#\tT:Attack\tO\nb\tb\tDT\tO\t#NONE#\tO\tO\nc\tc\tDT\tO\t#NONE#\tT:Attack\tO\n",
     r"one contiguous target"),
])
def test_malformed_input(text, message):
    with pytest.raises(FormatError, match=message):
        parse_corpus_text(text)


def test_hash_surface_is_a_token_not_a_header():
    text = "#riga\t#riga\tNN\tO\t#NONE#\tO\tO\n"
    (s,) = parse_corpus_text(text)
    assert s.tokens[0].surface == "#riga"


def test_layers_round_trip():
    t = toks("he", "attacked", "and", "hired", "them")
    s = Sentence(t, "d1", datetime.date(2001, 2, 3), (
        FrameAnnotation("Attack", (1, 2), (FrameElement("Assailant", (0, 1)),)),
        FrameAnnotation("Hiring", (3, 4), (FrameElement("Employee", (4, 5)),)),
    ))
    text = format_corpus([s])
    assert "# layer=1" in text
    assert parse_corpus_text(text) == [s]
    buf = io.StringIO()
    write_corpus([s], buf)
    assert buf.getvalue() == text


def test_layer_must_repeat_sentence():
    text = ("# doc_id=a\nx\tx\tNN\tO\t#NONE#\tT:Attack\tO\n\n"
            "# doc_id=a\n# layer=1\ny\ty\tNN\tO\t#NONE#\tT:Attack\tO\n")
    with pytest.raises(FormatError, match="does not repeat"):
        parse_corpus_text(text)


def test_window_boundaries():
    s = Sentence(toks("a", "b", "c"))
    assert extract_window(s, 0)[:3] == (NONE, NONE, NONE)
    assert extract_window(s, 2)[7:] == (NONE, NONE, NONE)


def test_window_middle_token_hand_read():
    s = Sentence((Token("A", "a", "DT", "O"),
                  Token("stint", "stint", "NN", "O", "employment.n.01"),
                  Token("UCL", "ucl", "NNP", "ORGANIZATION")))
    assert extract_window(s, 1) == ("a", "DT", "O", "stint", "employment.n.01", "NN", "O",
                                    "ucl", "NNP", "ORGANIZATION")


def test_fe_window():
    s = Sentence(toks("a", "b", "c", "d", "e", "f", "g"))
    assert extract_fe_window(s, 3, 3)[10] == "0"
    assert extract_fe_window(s, 1, 3)[10:] == ("-2", "d")
    assert extract_fe_window(Sentence(toks(*"abcdefgh")), 6, 1)[10] == "+3+"
    assert [rel_pos_bucket(d) for d in (-7, -3, -2, -1, 0, 1, 2, 3, 9)] == \
        ["-3+", "-3+", "-2", "-1", "0", "+1", "+2", "+3+", "+3+"]
    with pytest.raises(IndexError):
        extract_window(s, 7)


def test_bio_helpers():
    assert encode_bio([("A", (0, 2)), ("B", (2, 3))], 4) == ["B-A", "I-A", "B-B", "O"]
    with pytest.raises(BioError) as info:
        decode_bio(["O", "I-Employer"])
    assert info.value.position == 1
    with pytest.raises(ValueError):
        encode_bio([("A", (0, 2)), ("B", (1, 3))], 4)


def test_token_invariants():
    with pytest.raises(ValueError):
        Token("", "x", "NN")
    with pytest.raises(ValueError):
        Token("two words", "x", "NN")


def test_annotation_invariants():
    with pytest.raises(ValueError):
        FrameAnnotation("Attack", (1, 2), (FrameElement("Victim", (1, 3)),))
    with pytest.raises(ValueError):
        FrameAnnotation("Attack", (0, 1), (FrameElement("A", (1, 3)), FrameElement("B", (2, 4))))
    with pytest.raises(ValueError):
        Sentence(toks("a"), "", None, (FrameAnnotation("Attack", (0, 2)),))


def test_detokenize():
    assert detokenize(["Hello", ",", "world", "(", "x", ")", "."]) == "Hello, world (x)."
