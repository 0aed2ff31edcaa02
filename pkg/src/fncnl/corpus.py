"""Featurized, frame-annotated corpora.

A corpus file is UTF-8 TSV.  Sentences are blocks separated by blank lines,
preceded by ``# key=value`` header lines (``doc_id``, optional ``date`` and
``layer``).  Each token line has seven columns::

    SURFACE  LEMMA  POS  NER  HYPERNYM  FRAME  ROLE

FRAME is ``T:<Frame>`` on target tokens, ``O`` elsewhere.  ROLE holds BIO
frame-element tags scoped to the block's target.  A sentence with several
targets repeats its block, each repeat carrying ``# layer=<k>`` (k >= 1).
"""

from __future__ import annotations

import datetime
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import FormatError

NONE = "#NONE#"

TARGET_SCHEMA = (
    "prev.lemma", "prev.pos", "prev.ner",
    "curr.lemma", "curr.hypernym", "curr.pos", "curr.ner",
    "next.lemma", "next.pos", "next.ner",
)
FE_SCHEMA = TARGET_SCHEMA + ("rel_pos", "target_lemma")

REL_POS_BUCKETS = ("-3+", "-2", "-1", "0", "+1", "+2", "+3+")

Span = tuple  # (start, end), end exclusive


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    ner: str = "O"
    hypernym: str = NONE

    def __post_init__(self):
        for name in ("surface", "lemma", "pos", "ner", "hypernym"):
            value = getattr(self, name)
            if not isinstance(value, str) or not value or any(c.isspace() for c in value):
                raise ValueError(f"token {name} must be a non-empty whitespace-free string, got {value!r}")


@dataclass(frozen=True)
class FrameElement:
    fe: str
    span: Span
    confidence: float = 1.0


@dataclass(frozen=True)
class FrameAnnotation:
    """A frame target in one sentence plus its labeled frame-element spans."""

    frame: str
    target: Span
    elements: tuple = ()
    confidence: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "elements", tuple(self.elements))
        start, end = self.target
        if not 0 <= start < end:
            raise ValueError(f"empty or negative target span {self.target}")
        taken = []
        for el in self.elements:
            s, e = el.span
            if not 0 <= s < e:
                raise ValueError(f"empty frame-element span {el.span} for {el.fe}")
            if s < end and start < e:
                raise ValueError(f"frame element {el.fe} overlaps the target")
            for (ts, te) in taken:
                if s < te and ts < e:
                    raise ValueError(f"frame element {el.fe} overlaps another element")
            taken.append((s, e))

    def element(self, name):
        for el in self.elements:
            if el.fe == name:
                return el
        return None


@dataclass(frozen=True)
class Sentence:
    tokens: tuple
    doc_id: str = ""
    pub_date: Optional[datetime.date] = None
    gold_annotations: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "gold_annotations", tuple(self.gold_annotations))
        n = len(self.tokens)
        for ann in self.gold_annotations:
            spans = [ann.target] + [el.span for el in ann.elements]
            if any(end > n for _, end in spans):
                raise ValueError(f"annotation of {ann.frame} points outside the {n}-token sentence")

    def __len__(self):
        return len(self.tokens)

    def span_text(self, span):
        start, end = span
        return " ".join(t.surface for t in self.tokens[start:end])

    @property
    def text(self):
        return detokenize([t.surface for t in self.tokens])


_NO_SPACE_BEFORE = {".", ",", ")", ":", ";", "!", "?", "'"}
_NO_SPACE_AFTER = {"("}


def detokenize(surfaces):
    """Join surfaces with spaces, attaching punctuation the way prose does."""
    out = []
    for i, s in enumerate(surfaces):
        if i and s not in _NO_SPACE_BEFORE and surfaces[i - 1] not in _NO_SPACE_AFTER:
            out.append(" ")
        out.append(s)
    return "".join(out)


# ---------------------------------------------------------------------------
# BIO

class BioError(ValueError):
    def __init__(self, message, position):
        super().__init__(message)
        self.position = position


def encode_bio(spans, length):
    """Turn ``[(label, (start, end)), ...]`` into a BIO tag list."""
    tags = ["O"] * length
    for label, (start, end) in spans:
        if not 0 <= start < end <= length:
            raise ValueError(f"span {(start, end)} outside sentence of length {length}")
        if any(t != "O" for t in tags[start:end]):
            raise ValueError(f"span {(start, end)} overlaps another span")
        tags[start] = "B-" + label
        for i in range(start + 1, end):
            tags[i] = "I-" + label
    return tags


def decode_bio(tags):
    """Inverse of :func:`encode_bio`.  Raises :class:`BioError` on a dangling ``I-``."""
    spans = []
    label, start = None, None
    for i, tag in enumerate(tags):
        if tag == "O":
            if label is not None:
                spans.append((label, (start, i)))
            label = None
        elif tag.startswith("B-") and len(tag) > 2:
            if label is not None:
                spans.append((label, (start, i)))
            label, start = tag[2:], i
        elif tag.startswith("I-") and len(tag) > 2:
            if label != tag[2:]:
                raise BioError(f"dangling {tag} without preceding B-{tag[2:]}", i)
        else:
            raise BioError(f"malformed BIO tag {tag!r}", i)
    if label is not None:
        spans.append((label, (start, len(tags))))
    return spans


# ---------------------------------------------------------------------------
# reading

def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8"), str(source)
    return source, getattr(source, "name", "<stream>")


def load_corpus(source) -> list:
    """Read every sentence (with gold annotations) from a corpus file or stream."""
    fh, name = _open_text(source)
    try:
        return list(_iter_sentences(fh, name))
    finally:
        if fh is not source:
            fh.close()


def parse_corpus_text(text, name="<string>"):
    return list(_iter_sentences(io.StringIO(text), name))


def _iter_sentences(fh, name):
    pending = None  # Sentence whose layers may still grow
    for block in _iter_blocks(fh, name):
        headers, rows, first_line = block
        layer = headers.get("layer")
        if layer is not None:
            try:
                layer = int(layer)
            except ValueError:
                raise FormatError(f"bad layer header {layer!r}", name, first_line) from None
        doc_id = headers.get("doc_id", "")
        pub_date = None
        if "date" in headers:
            try:
                pub_date = datetime.date.fromisoformat(headers["date"])
            except ValueError:
                raise FormatError(f"unparseable date header {headers['date']!r}", name, first_line) from None
        tokens = tuple(Token(*r[0][:5]) for r in rows)
        ann = _decode_annotation(rows, name)
        if layer:
            if pending is None or pending.tokens != tokens or pending.doc_id != doc_id:
                raise FormatError(f"layer {layer} block does not repeat the preceding sentence", name, first_line)
            if ann is None:
                raise FormatError(f"layer {layer} block has no target", name, first_line)
            pending = Sentence(tokens, doc_id, pending.pub_date, pending.gold_annotations + (ann,))
            continue
        if pending is not None:
            yield pending
        pending = Sentence(tokens, doc_id, pub_date, () if ann is None else (ann,))
    if pending is not None:
        yield pending


def _iter_blocks(fh, name):
    headers, rows, first = {}, [], None
    for lineno, raw in enumerate(fh, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            if rows:
                yield headers, rows, first
                headers, rows, first = {}, [], None
            elif headers:
                raise FormatError("header lines without tokens", name, lineno)
            continue
        if first is None:
            first = lineno
        if line.startswith("#") and "\t" not in line and not rows:
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                headers[key.strip()] = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 7:
            raise FormatError(f"expected 7 tab-separated columns, found {len(cols)}", name, lineno)
        try:
            Token(*cols[:5])
        except ValueError as exc:
            raise FormatError(str(exc), name, lineno) from None
        rows.append((cols, lineno))
    if rows:
        yield headers, rows, first
    elif headers:
        raise FormatError("header lines without tokens", name, first)


def _decode_annotation(rows, name):
    frames = [(i, cols[5]) for i, (cols, _) in enumerate(rows)]
    target_idx = [i for i, f in frames if f != "O"]
    roles = [cols[6] for cols, _ in rows]
    for i, f in frames:
        if f != "O" and (not f.startswith("T:") or len(f) < 3):
            raise FormatError(f"bad FRAME column {f!r}", name, rows[i][1])
    try:
        spans = decode_bio(roles)
    except BioError as exc:
        raise FormatError(str(exc), name, rows[exc.position][1]) from None
    if not target_idx:
        if spans:
            raise FormatError("ROLE tags in a block without a target", name, rows[spans[0][1][0]][1])
        return None
    start, end = target_idx[0], target_idx[-1] + 1
    frame_names = {frames[i][1] for i in target_idx}
    if len(frame_names) > 1 or end - start != len(target_idx):
        raise FormatError("a block must hold one contiguous target of one frame", name, rows[start][1])
    elements = []
    for label, (s, e) in spans:
        if s < end and start < e:
            raise FormatError(f"frame element {label} overlaps the target", name, rows[s][1])
        elements.append(FrameElement(label, (s, e), 1.0))
    return FrameAnnotation(frame_names.pop()[2:], (start, end), tuple(elements), 1.0)


# ---------------------------------------------------------------------------
# writing

def format_corpus(sentences: Iterable[Sentence]) -> str:
    blocks = []
    for sent in sentences:
        layers = sent.gold_annotations or (None,)
        for k, ann in enumerate(layers):
            lines = []
            if sent.doc_id:
                lines.append(f"# doc_id={sent.doc_id}")
            if sent.pub_date is not None:
                lines.append(f"# date={sent.pub_date.isoformat()}")
            if k:
                lines.append(f"# layer={k}")
            frame_col = ["O"] * len(sent)
            role_col = ["O"] * len(sent)
            if ann is not None:
                for i in range(*ann.target):
                    frame_col[i] = "T:" + ann.frame
                role_col = encode_bio([(el.fe, el.span) for el in ann.elements], len(sent))
            for tok, f, r in zip(sent.tokens, frame_col, role_col):
                lines.append("\t".join((tok.surface, tok.lemma, tok.pos, tok.ner, tok.hypernym, f, r)))
            blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def write_corpus(sentences, dest) -> None:
    text = format_corpus(sentences)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)


# ---------------------------------------------------------------------------
# feature windows

def _token_slots(tok, with_hypernym):
    if tok is None:
        return (NONE, NONE, NONE, NONE) if with_hypernym else (NONE, NONE, NONE)
    if with_hypernym:
        return (tok.lemma, tok.hypernym, tok.pos, tok.ner)
    return (tok.lemma, tok.pos, tok.ner)


def extract_window(sentence: Sentence, index: int) -> tuple:
    """The 10-slot feature vector for the token at ``index``."""
    toks = sentence.tokens
    if not 0 <= index < len(toks):
        raise IndexError(f"token index {index} out of range for sentence of length {len(toks)}")
    prev = toks[index - 1] if index > 0 else None
    nxt = toks[index + 1] if index + 1 < len(toks) else None
    return _token_slots(prev, False) + _token_slots(toks[index], True) + _token_slots(nxt, False)


def rel_pos_bucket(distance: int) -> str:
    if distance <= -3:
        return "-3+"
    if distance >= 3:
        return "+3+"
    if distance == 0:
        return "0"
    return f"{distance:+d}"


def extract_fe_window(sentence: Sentence, index: int, target_index: int) -> tuple:
    """The 12-slot frame-element feature vector of ``index`` relative to a target."""
    if not 0 <= target_index < len(sentence.tokens):
        raise IndexError(f"target index {target_index} out of range")
    window = extract_window(sentence, index)
    return window + (rel_pos_bucket(index - target_index), sentence.tokens[target_index].lemma)


def sentence_windows(sentence: Sentence) -> list:
    return [extract_window(sentence, i) for i in range(len(sentence))]
