"""Synthetic data: round-trip coverage instances and large random corpora."""

from __future__ import annotations

import datetime
import random

from .akr import FrameInstance
from .corpus import NONE, FrameAnnotation, FrameElement, Sentence, Token
from .nel import Entity, EntityRef, Gazetteer, UnidentifiedString
from .registry import TIME, FrameRegistry
from .verbalizer import verbalize

PEOPLE = [
    ("e1", "Ieva Akuratere", ["I. Akuratere"]),
    ("e2", "Sophie Amundsen", ["Sophie"]),
    ("e3", "Joanna Ingebrigtsen", ["Joanna"]),
    ("e4", "Nicolas Sarkozy", ["N. Sarkozy"]),
    ("e5", "François Hollande", ["F. Hollande"]),
    ("e6", "Alberto Knox", []),
    ("e7", "Hilde Knag", []),
]
ORGS = [
    ("o1", "Rīgas dome", ["Riga City Council"]),
    ("o2", "University College London", ["UCL"]),
    ("o3", "Latvijas Radio", []),
    ("o4", "LETA", ["LETA news agency"]),
    ("o5", "Dailes teātris", []),
]

STRING_WORDS = [
    "soloist", "singer", "flower", "fairy", "concert", "deputy", "musician", "actress",
    "research", "lecturer", "assistant", "robots", "computer", "brain", "garden", "letter",
    "festival", "award", "gold", "medal", "theatre", "opera", "poetry", "novel", "bridge",
    "museum", "archive", "harbour", "grant", "loan", "shares", "fraud", "bribery",
    "knife", "village", "Riga", "Jurmala", "Oslo", "painter", "chairman", "director",
]
UNIDENTIFIED = ["several artists", "local residents", "an unnamed source", "two companies"]


def roundtrip_gazetteer() -> Gazetteer:
    ents = [Entity(i, "Person", c, frozenset(a)) for i, c, a in PEOPLE]
    ents += [Entity(i, "Organization", c, frozenset(a)) for i, c, a in ORGS]
    return Gazetteer(ents)


def _time_text(rng):
    year = rng.randint(1950, 2013)
    if rng.random() < 0.5:
        return str(year)
    return datetime.date(year, rng.randint(1, 12), rng.randint(1, 28)).isoformat()


def _filler(fe, rng, gazetteer):
    if fe.name == TIME:
        return UnidentifiedString(_time_text(rng))
    if fe.is_entity:
        pool = sorted((e.id for e in gazetteer if fe.accepts(e.kind)))
        if pool and rng.random() < 0.75:
            return EntityRef(rng.choice(pool))
        return UnidentifiedString(rng.choice(UNIDENTIFIED))
    return UnidentifiedString(" ".join(rng.sample(STRING_WORDS, rng.randint(1, 3))))


def coverage_instances(registry: FrameRegistry, gazetteer: Gazetteer, per_frame: int = 5, seed: int = 0):
    """Instances per frame: two fully filled, one minimal, the rest random subsets."""
    out = []
    for name in registry:
        frame = registry[name]
        rng = random.Random(f"{seed}:{name}")
        core = [e for e in frame.elements if e.name != TIME]
        minimal = list(frame.anchor_fes) or [core[0].name]
        for k in range(per_frame):
            if k < 2:
                chosen = [e.name for e in frame.elements]
            elif k == 2:
                chosen = minimal
            else:
                chosen = [e.name for e in frame.elements if rng.random() < 0.6] or minimal
            fillers = {fe: _filler(frame.fe(fe), rng, gazetteer) for fe in chosen}
            out.append(FrameInstance(f"g{len(out) + 1}", name, fillers))
    return out


# ---------------------------------------------------------------------------
# noisy corpora

_NOISE_POS = ["NN", "NN", "NNS", "VBD", "VBZ", "JJ", "RB", "IN", "DT", "CD", "PRP"]
_NOISE_NER = ["O"] * 12 + ["PERSON", "ORGANIZATION", "LOCATION"]


def _noise_vocab(rng, size=600):
    vocab = []
    for k in range(size):
        lemma = f"w{k}"
        vocab.append(Token(lemma, lemma, rng.choice(_NOISE_POS), rng.choice(_NOISE_NER),
                           rng.choice([NONE, NONE, f"h{k % 40}.n.01"])))
    return vocab


def generate_corpus(registry: FrameRegistry, n_sentences: int, lang: str = "en", seed: int = 0,
                    frame_rate: float = 0.85):
    """A noisy featurized corpus: template sentences buried in random tokens.

    Some target tokens lose their hypernym so rules have to fall back on
    lemmas or context; the rest of each sentence is Zipf-ish noise.
    """
    rng = random.Random(seed)
    vocab = _noise_vocab(rng)
    weights = [1.0 / (k + 1) for k in range(len(vocab))]
    gazetteer = roundtrip_gazetteer()
    frames = registry.frame_names()
    out = []
    for s in range(n_sentences):
        pre = rng.choices(vocab, weights, k=rng.randint(0, 8))
        post = rng.choices(vocab, weights, k=rng.randint(0, 8))
        if rng.random() >= frame_rate:
            toks = pre + post + rng.choices(vocab, weights, k=4)
            out.append(Sentence(tuple(toks), f"d{s}"))
            continue
        frame = registry[rng.choice(frames)]
        chosen = [e for e in frame.elements if rng.random() < 0.6] or list(frame.elements[:1])
        fillers = {e.name: _filler(e, rng, gazetteer) for e in chosen}
        inner = verbalize(FrameInstance("x", frame.name, fillers), lang, registry, gazetteer)
        tokens = list(inner.tokens)
        ann = inner.gold_annotations[0]
        t = ann.target[0]
        if rng.random() < 0.2:
            tok = tokens[t]
            tokens[t] = Token(tok.surface, tok.lemma, tok.pos, tok.ner, NONE)
        shift = len(pre)
        ann = FrameAnnotation(ann.frame, (ann.target[0] + shift, ann.target[1] + shift),
                              tuple(FrameElement(e.fe, (e.span[0] + shift, e.span[1] + shift))
                                    for e in ann.elements))
        out.append(Sentence(tuple(pre + tokens + post), f"d{s}", None, (ann,)))
    return out
