import pytest
from hypothesis import given
from hypothesis import strategies as st

from fncnl.corpus import FrameAnnotation, FrameElement
from fncnl.evaluation import (MetricsReport, f1, per_frame_report, render_per_frame, render_table,
                              score_frame_elements, score_targets)


def ann(frame, i, *fes):
    return FrameAnnotation(frame, (i, i + 1), tuple(FrameElement(fe, span) for fe, span in fes))


LTH_TARGET = pytest.param(0.662, 0.506, 0.573, marks=pytest.mark.xfail(
    strict=True, reason="2PR/(P+R) of the printed P/R is 0.5736; the printed cell is 0.573"))


@pytest.mark.parametrize("p,r,expected", [LTH_TARGET, (0.771, 0.537, 0.633), (0.659, 0.768, 0.709)])
def test_f1_against_printed_cells(p, r, expected):
    assert f1(p, r) == pytest.approx(expected, abs=0.0005)


def test_f1_edges():
    assert f1(0.4, 0.4) == pytest.approx(0.4)
    assert f1(0, 0) == 0.0
    with pytest.raises(ValueError):
        f1(1.2, 0.5)
    with pytest.raises(ValueError):
        f1(0.5, -0.1)


ratios = st.floats(0, 1, allow_nan=False)


@given(ratios, ratios)
def test_f1_is_a_symmetric_mean(p, r):
    v = f1(p, r)
    assert v == pytest.approx(f1(r, p))
    assert min(p, r) - 1e-12 <= v <= max(p, r) + 1e-12
    assert v <= (p + r) / 2 + 1e-12


def test_perfect_and_two_thirds():
    gold = [[ann("Attack", 0), ann("Hiring", 2)], [ann("Giving", 1)]]
    assert score_targets(gold, gold).f1 == 1.0
    pred = [[ann("Attack", 0), ann("Hiring", 2)], [ann("Giving", 3)]]
    rep = score_targets(gold, pred)
    assert (rep.tp, rep.fp, rep.fn) == (2, 1, 1)
    assert rep.precision == rep.recall == rep.f1 == pytest.approx(2 / 3)


def test_same_span_wrong_frame_is_a_miss():
    rep = score_targets([[ann("Attack", 0)]], [[ann("Revenge", 0)]])
    assert (rep.tp, rep.fp, rep.fn) == (0, 1, 1)


def test_empty_predictions():
    rep = score_targets([[ann("Attack", 0)]], [[]])
    assert rep.precision == rep.recall == rep.f1 == 0.0


def test_sentence_mismatch():
    with pytest.raises(ValueError):
        score_targets([[], []], [[]])
    with pytest.raises(ValueError):
        score_frame_elements([[]], [])


def test_fe_scoring():
    gold = [[ann("Being_employed", 2, ("Duration", (1, 2)), ("Position", (3, 6)), ("Employer", (6, 10)))]]
    assert (score_frame_elements(gold, gold).tp, score_frame_elements(gold, gold).f1) == (3, 1.0)
    shifted = [[ann("Being_employed", 2, ("Duration", (1, 2)), ("Position", (4, 6)), ("Employer", (6, 10)))]]
    rep = score_frame_elements(gold, shifted)
    assert (rep.tp, rep.fp, rep.fn) == (2, 1, 1)


def test_fe_scoring_is_conditioned_on_target_match():
    gold = [[ann("Being_employed", 2, ("Duration", (1, 2)))]]
    wrong = [[ann("Hiring", 2, ("Duration", (1, 2)))]]
    assert score_frame_elements(gold, wrong) == MetricsReport(0, 0, 0)
    assert score_targets(gold, wrong).fp == 1


def test_per_frame_ordering():
    gold = [[ann("Attack", 0), ann("Hiring", 2)]]
    pred = [[ann("Hiring", 2)]]
    report = per_frame_report(gold, pred)
    assert list(report.items()) == [("Hiring", 1.0), ("Attack", 0.0)]
    assert render_per_frame(report).splitlines()[0].startswith("Hiring")


def test_per_frame_hand_counts():
    gold = [[ann("Attack", 0), ann("Attack", 3), ann("Giving", 5)], [ann("Giving", 0)]]
    pred = [[ann("Attack", 0), ann("Giving", 3), ann("Giving", 5)], [ann("Giving", 0), ann("Attack", 1)]]
    # Attack: tp 1, fp 1, fn 1 -> 0.5; Giving: tp 2, fp 1, fn 0 -> P 2/3, R 1 -> 0.8
    report = per_frame_report(gold, pred)
    assert report == pytest.approx({"Giving": 0.8, "Attack": 0.5})
    assert list(report) == ["Giving", "Attack"]


def test_table_rendering():
    text = render_table([("Target", MetricsReport(2, 1, 1))])
    header, row = text.splitlines()
    assert header.split() == ["Precision", "Recall", "F1", "tp", "fp", "fn"]
    assert row.split()[:4] == ["Target", "0.667", "0.667", "0.667"]


frames = st.sampled_from(["Attack", "Hiring", "Giving"])
annotation = st.builds(lambda f, i, j: ann(f, i, ("Victim", (j, j + 1))), frames, st.integers(0, 4), st.integers(5, 7))
sentences = st.lists(st.lists(annotation, max_size=3), min_size=1, max_size=4)


@given(sentences, sentences)
def test_counts_add_up(gold, pred):
    pred = (pred * len(gold))[:len(gold)]
    rep = score_targets(gold, pred)
    assert rep.tp + rep.fp == sum(map(len, pred))
    assert rep.tp + rep.fn == sum(map(len, gold))
    fes = score_frame_elements(gold, pred)
    assert fes.tp <= rep.tp
