"""Precision / recall / F1 for target and frame-element identification.

Both stages use exact matching.  Frame elements are only scored under
targets that were identified correctly (same span and frame), because an FE
layer under a spurious target has no gold counterpart.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass


def f1(p: float, r: float) -> float:
    if not (0 <= p <= 1 and 0 <= r <= 1):
        raise ValueError(f"precision and recall must lie in [0, 1], got {p}, {r}")
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self):
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self):
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self):
        return f1(self.precision, self.recall)

    def as_dict(self):
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1,
                "tp": self.tp, "fp": self.fp, "fn": self.fn}


def _check_aligned(gold, predicted):
    if len(gold) != len(predicted):
        raise ValueError(f"gold covers {len(gold)} sentences, predictions cover {len(predicted)}")


def _target_key(ann):
    return (tuple(ann.target), ann.frame)


def _match_targets(gold_anns, pred_anns):
    """Pairs of (gold, predicted) annotations with identical target and frame."""
    remaining = {}
    for g in gold_anns:
        remaining.setdefault(_target_key(g), []).append(g)
    pairs, unmatched = [], []
    for p in pred_anns:
        bucket = remaining.get(_target_key(p))
        if bucket:
            pairs.append((bucket.pop(0), p))
        else:
            unmatched.append(p)
    return pairs, unmatched


def score_targets(gold, predicted, frame=None) -> MetricsReport:
    """``gold`` and ``predicted`` are per-sentence lists of annotations."""
    _check_aligned(gold, predicted)
    tp = fp = fn = 0
    for g_anns, p_anns in zip(gold, predicted):
        if frame is not None:
            g_anns = [a for a in g_anns if a.frame == frame]
            p_anns = [a for a in p_anns if a.frame == frame]
        pairs, unmatched = _match_targets(g_anns, p_anns)
        tp += len(pairs)
        fp += len(unmatched)
        fn += len(g_anns) - len(pairs)
    return MetricsReport(tp, fp, fn)


def score_frame_elements(gold, predicted) -> MetricsReport:
    _check_aligned(gold, predicted)
    tp = fp = fn = 0
    for g_anns, p_anns in zip(gold, predicted):
        for g, p in _match_targets(g_anns, p_anns)[0]:
            g_fes = Counter((e.fe, tuple(e.span)) for e in g.elements)
            p_fes = Counter((e.fe, tuple(e.span)) for e in p.elements)
            hit = sum((g_fes & p_fes).values())
            tp += hit
            fp += sum(p_fes.values()) - hit
            fn += sum(g_fes.values()) - hit
    return MetricsReport(tp, fp, fn)


def per_frame_report(gold, predicted) -> dict:
    """Target F1 per frame, ordered best first."""
    frames = {a.frame for anns in list(gold) + list(predicted) for a in anns}
    scores = {f: score_targets(gold, predicted, frame=f).f1 for f in frames}
    return dict(sorted(scores.items(), key=lambda kv: (-kv[1], kv[0])))


def render_table(rows) -> str:
    """Plain-text table: ``rows`` is ``[(name, MetricsReport)]``."""
    width = max([len(n) for n, _ in rows] + [5])
    lines = [f"{'':<{width}}  Precision  Recall     F1     tp     fp     fn"]
    for name, rep in rows:
        lines.append(f"{name:<{width}}  {rep.precision:9.3f}  {rep.recall:6.3f}  {rep.f1:5.3f}  "
                     f"{rep.tp:5d}  {rep.fp:5d}  {rep.fn:5d}")
    return "\n".join(lines) + "\n"


def render_per_frame(scores: dict) -> str:
    width = max([len(f) for f in scores] + [5])
    return "".join(f"{f.replace('_', ' '):<{width}}  {v:5.3f}\n" for f, v in scores.items())
