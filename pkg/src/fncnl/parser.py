"""Two-stage frame-semantic parsing with learned rule sets.

Stage one classifies every token window against each frame's target rule
set; stage two labels the tokens around each target with frame elements and
merges same-label runs into spans.  Confidences are always the Laplace ratio
of the best matching rule, never a combination of rules.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import c60
from .c60 import LearnerConfig, WindowIndex, classify, learn_from_index
from .corpus import (FE_SCHEMA, TARGET_SCHEMA, FrameAnnotation, FrameElement, Sentence,
                     extract_fe_window, extract_window)
from .errors import FormatError, IntegrityError
from .registry import FrameRegistry

__all__ = ["FrameAnnotation", "FrameElement", "ParserModel", "identify_targets",
           "identify_frame_elements", "parse_sentence", "parse_corpus"]

FE_LABEL_SEP = ":"


def fe_label(frame, fe):
    return f"{frame}{FE_LABEL_SEP}{fe}"


@dataclass(frozen=True)
class ParserModel:
    target_rulesets: dict = field(default_factory=dict)
    fe_rulesets: dict = field(default_factory=dict)   # (frame, fe) -> RuleSet
    registry: Optional[FrameRegistry] = None

    def __post_init__(self):
        for frame, rs in self.target_rulesets.items():
            if rs.label != frame or rs.schema != TARGET_SCHEMA:
                raise IntegrityError(f"target ruleset {rs.label!r} does not fit key {frame!r}")
            if self.registry is not None:
                self.registry[frame]
        for (frame, fe), rs in self.fe_rulesets.items():
            if rs.label != fe_label(frame, fe) or rs.schema != FE_SCHEMA:
                raise IntegrityError(f"FE ruleset {rs.label!r} does not fit key {(frame, fe)!r}")
            if self.registry is not None:
                self.registry[frame].fe(fe)

    def frame_element_rulesets(self, frame):
        return sorted(((fe, rs) for (f, fe), rs in self.fe_rulesets.items() if f == frame))


def identify_targets(sentence: Sentence, model: ParserModel):
    """``[(index, frame, confidence)]`` with at most one frame per token."""
    out = []
    frames = sorted(model.target_rulesets)
    for i in range(len(sentence)):
        fv = extract_window(sentence, i)
        best = None
        for frame in frames:
            rs = model.target_rulesets[frame]
            conf = classify(rs, fv)  # rules never sit below their set's threshold
            if conf is not None and (best is None or conf > best[1]):
                best = (frame, conf)
        if best is not None:
            out.append((i, best[0], best[1]))
    return out


def identify_frame_elements(sentence: Sentence, target, model: ParserModel, target_end=None):
    """Frame-element spans ``[FrameElement]`` for the target ``(index, frame)``."""
    index, frame = target
    if model.registry is not None:
        model.registry[frame]
    if frame not in model.target_rulesets and not model.frame_element_rulesets(frame):
        raise IntegrityError(f"frame {frame!r} is not in the model")
    target_end = index + 1 if target_end is None else target_end
    rulesets = model.frame_element_rulesets(frame)
    labels = [None] * len(sentence)
    for i in range(len(sentence)):
        if index <= i < target_end:
            continue
        fv = extract_fe_window(sentence, i, index)
        best = None
        for fe, rs in rulesets:
            conf = classify(rs, fv)
            if conf is not None and (best is None or conf > best[1]):
                best = (fe, conf)
        labels[i] = best
    spans = []
    i = 0
    while i < len(labels):
        if labels[i] is None:
            i += 1
            continue
        fe, conf = labels[i]
        j = i + 1
        while j < len(labels) and labels[j] is not None and labels[j][0] == fe:
            conf = max(conf, labels[j][1])
            j += 1
        spans.append(FrameElement(fe, (i, j), float(conf)))
        i = j
    return spans


def parse_sentence(sentence: Sentence, model: ParserModel):
    out = []
    for index, frame, conf in identify_targets(sentence, model):
        elements = identify_frame_elements(sentence, (index, frame), model)
        out.append(FrameAnnotation(frame, (index, index + 1), tuple(elements), float(conf)))
    return out


def _parse_chunk(args):
    sentences, model = args
    return [parse_sentence(s, model) for s in sentences]


def parse_corpus(sentences, model: ParserModel, jobs: int = 1, executor: Optional[Executor] = None):
    """Parse many sentences; output order and content do not depend on ``jobs``."""
    sentences = list(sentences)
    if jobs <= 1 and executor is None:
        return [parse_sentence(s, model) for s in sentences]
    jobs = max(jobs, 1)
    size = -(-len(sentences) // jobs) or 1
    chunks = [(sentences[k:k + size], model) for k in range(0, len(sentences), size)]
    if executor is not None:
        results = list(executor.map(_parse_chunk, chunks))
    else:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_parse_chunk, chunks))
    return [ann for chunk in results for ann in chunk]


# ---------------------------------------------------------------------------
# training

def target_training_labels(sentences, frames):
    """Windows of every token plus, per frame, which of them head a gold target."""
    windows = []
    heads = {}
    for s in sentences:
        base = len(windows)
        windows.extend(extract_window(s, i) for i in range(len(s)))
        for ann in s.gold_annotations:
            heads.setdefault(ann.frame, set()).add(base + ann.target[0])
    labels = {}
    for frame in frames:
        pos = heads.get(frame, set())
        if pos:
            labels[frame] = [i in pos for i in range(len(windows))]
    return windows, labels


def fe_training_data(sentences, frame):
    """FE windows around each gold target of ``frame`` and their FE labels."""
    windows, gold = [], []
    for s in sentences:
        for ann in s.gold_annotations:
            if ann.frame != frame:
                continue
            start, end = ann.target
            tags = [None] * len(s)
            for el in ann.elements:
                for i in range(*el.span):
                    tags[i] = el.fe
            for i in range(len(s)):
                if start <= i < end:
                    continue
                windows.append(extract_fe_window(s, i, start))
                gold.append(tags[i])
    return windows, gold


def _learn_job(args):
    windows, labels, config = args
    index = WindowIndex(windows)
    return {key: learn_from_index(index, lab, lab_name, config)
            for key, (lab, lab_name) in labels.items()}


def train_target_rulesets(sentences, frames, config: LearnerConfig = LearnerConfig(), jobs: int = 1):
    """Learn a target rule set for every frame with gold targets.

    Returns ``{frame: (ruleset, uncovered_positives)}``.
    """
    windows, labels = target_training_labels(sentences, frames)
    if not labels:
        return {}
    if jobs <= 1:
        index = WindowIndex(windows)
        return {f: learn_from_index(index, lab, f, config) for f, lab in sorted(labels.items())}
    frames = sorted(labels)
    groups = [frames[k::jobs] for k in range(jobs)]
    jobs_args = [(windows, {f: (labels[f], f) for f in g}, config) for g in groups if g]
    out = {}
    with ProcessPoolExecutor(jobs) as pool:
        for part in pool.map(_learn_job, jobs_args):
            out.update(part)
    return dict(sorted(out.items()))


def train_fe_rulesets(sentences, frames, config: LearnerConfig = LearnerConfig(), jobs: int = 1):
    """Learn one rule set per (frame, FE) seen in gold annotations.

    Returns ``{(frame, fe): (ruleset, uncovered_positives)}``.
    """
    tasks = []
    for frame in sorted(frames):
        windows, gold = fe_training_data(sentences, frame)
        fes = sorted({g for g in gold if g is not None})
        if fes:
            tasks.append((windows, {(frame, fe): ([g == fe for g in gold], fe_label(frame, fe)) for fe in fes},
                          config))
    out = {}
    if jobs <= 1:
        for t in tasks:
            out.update(_learn_job(t))
    else:
        with ProcessPoolExecutor(jobs) as pool:
            for part in pool.map(_learn_job, tasks):
                out.update(part)
    return dict(sorted(out.items()))


def train_model(sentences, registry: FrameRegistry, config: LearnerConfig = LearnerConfig(), jobs: int = 1):
    sentences = list(sentences)
    for s in sentences:
        for ann in s.gold_annotations:
            registry.check_annotation(ann)
    frames = registry.frame_names()
    targets = train_target_rulesets(sentences, frames, config, jobs)
    fes = train_fe_rulesets(sentences, frames, config, jobs)
    model = ParserModel({f: rs for f, (rs, _) in targets.items()},
                        {k: rs for k, (rs, _) in fes.items()}, registry)
    uncovered = {**{f: u for f, (_, u) in targets.items()},
                 **{fe_label(*k): u for k, (_, u) in fes.items()}}
    return model, uncovered


# ---------------------------------------------------------------------------
# model directories

def _fe_filename(frame, fe):
    return f"{frame}__{fe}.rules"


def save_model(model: ParserModel, directory) -> None:
    directory = Path(directory)
    (directory / "target").mkdir(parents=True, exist_ok=True)
    (directory / "fe").mkdir(parents=True, exist_ok=True)
    for frame, rs in model.target_rulesets.items():
        c60.save_ruleset(rs, directory / "target" / f"{frame}.rules")
    for (frame, fe), rs in model.fe_rulesets.items():
        c60.save_ruleset(rs, directory / "fe" / _fe_filename(frame, fe))


def load_model(directory, registry: Optional[FrameRegistry] = None) -> ParserModel:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"model directory {directory} does not exist")
    targets, fes = {}, {}
    for path in sorted((directory / "target").glob("*.rules")):
        rs = c60.load_ruleset(path)
        targets[rs.label] = rs
    for path in sorted((directory / "fe").glob("*.rules")):
        rs = c60.load_ruleset(path)
        frame, sep, fe = rs.label.partition(FE_LABEL_SEP)
        if not sep:
            raise FormatError(f"FE rule file label {rs.label!r} is not 'Frame:FE'", str(path))
        fes[(frame, fe)] = rs
    return ParserModel(targets, fes, registry)


# ---------------------------------------------------------------------------
# annotation records

def annotation_record(ann: FrameAnnotation, doc_id: str, sentence_index: int) -> dict:
    return {"doc_id": doc_id, "sentence": sentence_index, "frame": ann.frame,
            "target": list(ann.target), "confidence": ann.confidence,
            "elements": [{"fe": el.fe, "span": list(el.span), "confidence": el.confidence}
                         for el in ann.elements]}


def annotation_from_record(rec) -> FrameAnnotation:
    return FrameAnnotation(rec["frame"], tuple(rec["target"]),
                           tuple(FrameElement(e["fe"], tuple(e["span"]), e.get("confidence", 1.0))
                                 for e in rec.get("elements", ())),
                           rec.get("confidence", 1.0))


def write_annotations(parsed, sentences, dest) -> int:
    """Write one JSON line per annotation; ``parsed[i]`` belongs to ``sentences[i]``."""
    lines = []
    for idx, (sent, anns) in enumerate(zip(sentences, parsed)):
        for ann in anns:
            lines.append(json.dumps(annotation_record(ann, sent.doc_id, idx), ensure_ascii=False))
    text = "".join(line + "\n" for line in lines)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)
    return len(lines)


def read_annotations(path):
    """``[(doc_id, sentence_index, FrameAnnotation)]`` from a JSONL file."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                out.append((rec["doc_id"], rec["sentence"], annotation_from_record(rec)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"bad annotation record: {exc}", os.fspath(path), lineno) from None
    return out
