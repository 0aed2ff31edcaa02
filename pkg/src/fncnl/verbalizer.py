"""Controlled-language verbalization of stored frame instances.

Templates come from the registry and carry full token features, so a
verbalized sentence can be fed straight back into the parser.  The round-trip
model learned from such sentences is what makes "parse(verbalize(i)) == i"
checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .akr import TemporalStore, dedup_key
from .c60 import LearnerConfig
from .corpus import FrameAnnotation, FrameElement, Sentence, Token, detokenize
from .errors import IntegrityError
from .nel import EntityRef, Gazetteer
from .parser import parse_sentence, train_model
from .registry import FrameRegistry, LiteralSegment, SlotSegment

NER_TAG = {"Person": "PERSON", "Organization": "ORGANIZATION"}


def _template(registry, frame_name, lang):
    frame = registry[frame_name]
    try:
        return frame.templates[lang]
    except KeyError:
        raise IntegrityError(f"frame {frame_name} has no {lang!r} template") from None


def filler_tokens(filler, slot: SlotSegment, entities=None):
    if isinstance(filler, EntityRef):
        if entities is None or filler.entity_id not in entities:
            raise IntegrityError(f"cannot verbalize unknown entity {filler.entity_id!r}")
        ent = entities[filler.entity_id]
        return [Token(w, w.lower(), "NNP", NER_TAG[ent.kind], slot.filler_hypernym)
                for w in ent.canonical.split()]
    words = filler.text.split()
    if not words:
        raise ValueError(f"empty filler for {slot.fe}")
    return [Token(w, w.lower(), slot.pos, "O", slot.filler_hypernym) for w in words]


def verbalize(instance, lang: str, registry: FrameRegistry, entities=None) -> Sentence:
    """Render one frame instance as a featurized sentence with its gold annotation."""
    template = _template(registry, instance.frame, lang)
    frame = registry[instance.frame]
    for fe in instance.fillers:
        frame.fe(fe)
        if template.slot(fe) is None:
            raise IntegrityError(f"{lang} template of {frame.name} has no slot for {fe}")
    tokens, elements = [], []
    target = None
    for seg in template.segments:
        if isinstance(seg, LiteralSegment):
            if seg.is_target:
                target = (len(tokens), len(tokens) + 1)
            tokens.extend(seg.tokens)
            continue
        filler = instance.fillers.get(seg.fe)
        if filler is None:
            continue
        tokens.extend(seg.pre)
        words = filler_tokens(filler, seg, entities)
        elements.append(FrameElement(seg.fe, (len(tokens), len(tokens) + len(words)), 1.0))
        tokens.extend(words)
        tokens.extend(seg.post)
    ann = FrameAnnotation(frame.name, target, tuple(elements), 1.0)
    time = getattr(instance, "time", None)
    pub_date = time.day if time is not None and time.kind == "approx" else None
    return Sentence(tuple(tokens), getattr(instance, "id", ""), pub_date, (ann,))


def verbalize_text(instance, lang, registry, entities=None) -> str:
    return verbalize(instance, lang, registry, entities).text


# ---------------------------------------------------------------------------
# profiles

def _profile_line(instance, lang, registry, entities):
    sent = verbalize(instance, lang, registry, entities)
    ann = sent.gold_annotations[0]
    linked = {}
    for el in ann.elements:
        f = instance.fillers[el.fe]
        if isinstance(f, EntityRef):
            linked[el.span[0]] = (el.span[1], f"[[{f.entity_id}|{entities[f.entity_id].canonical}]]")
    surfaces = []
    i = 0
    while i < len(sent):
        if i in linked:
            end, markup = linked[i]
            surfaces.append(markup)
            i = end
        else:
            surfaces.append(sent.tokens[i].surface)
            i += 1
    return detokenize(surfaces)


def render_profile(profile, lang: str, registry: FrameRegistry, entities=None) -> str:
    """One verbalized line per instance, linked entities marked up, count in brackets."""
    lines = []
    for instances in profile.values():
        for inst in instances:
            lines.append(f"{_profile_line(inst, lang, registry, entities)} [{inst.count}]")
    return "\n".join(lines) + ("\n" if lines else "")


def profile_records(profile, lang, registry, entities=None):
    out = []
    for frame, instances in profile.items():
        for inst in instances:
            out.append({"instance": inst.id, "frame": frame, "count": inst.count,
                        "time": inst.time.to_record(),
                        "text": _profile_line(inst, lang, registry, entities),
                        "entities": sorted(inst.entity_ids())})
    return out


# ---------------------------------------------------------------------------
# round trip

@dataclass
class RoundTripReport:
    lang: str
    per_frame: dict = field(default_factory=dict)   # frame -> [exact, total]
    conflicts: list = field(default_factory=list)   # (frame_a, frame_b, lemma)
    failures: list = field(default_factory=list)    # (frame, instance id, reason)

    @property
    def exact_frames(self):
        return sorted(f for f, (ok, total) in self.per_frame.items() if ok == total and total > 0)

    @property
    def all_exact(self):
        return not self.conflicts and len(self.exact_frames) == len(self.per_frame)

    def render(self) -> str:
        lines = [f"{f}\t{ok}/{total}\t{'exact' if ok == total else 'INEXACT'}"
                 for f, (ok, total) in sorted(self.per_frame.items())]
        for a, b, lemma in self.conflicts:
            lines.append(f"conflict\t{a} and {b} share target lemma {lemma!r}")
        for frame, iid, reason in self.failures:
            lines.append(f"failure\t{frame}\t{iid}\t{reason}")
        lines.append(f"{len(self.exact_frames)}/{len(self.per_frame)} frames exact, "
                     f"{len(self.conflicts)} conflicts")
        return "\n".join(lines) + "\n"


def target_conflicts(registry: FrameRegistry, lang: str):
    lemmas = {}
    for name in registry:
        t = registry[name].templates.get(lang)
        if t is not None:
            lemmas[name] = t.target_token.lemma
    return [(a, b, lemmas[a]) for a, b in combinations(sorted(lemmas), 2) if lemmas[a] == lemmas[b]]


def check_roundtrip(instance, sentence, model, gazetteer, registry):
    """``None`` when the sentence parses back to ``instance``, else a reason."""
    anns = parse_sentence(sentence, model)
    if len(anns) != 1:
        return f"{len(anns)} annotations"
    ann = anns[0]
    if ann.frame != instance.frame:
        return f"parsed as {ann.frame}"
    store = TemporalStore(registry)
    got = store.get(store.ingest(ann, sentence, gazetteer))
    if got.fillers != dict(instance.fillers):
        return f"fillers differ: {got.fillers!r}"
    if dedup_key(got.frame, got.fillers) != dedup_key(instance.frame, instance.fillers):
        return "dedup key differs"
    return None


def roundtrip_model(registry: FrameRegistry, lang: str, instances_per_frame: int = 5,
                    config: LearnerConfig = LearnerConfig(), seed: int = 0, gazetteer: Gazetteer = None):
    """Learn a parser from verbalized coverage instances and check it re-reads them.

    Returns ``(model, report)``.
    """
    from .synth import coverage_instances, roundtrip_gazetteer

    for name in registry:
        _template(registry, name, lang)
    gazetteer = gazetteer if gazetteer is not None else roundtrip_gazetteer()
    instances = coverage_instances(registry, gazetteer, instances_per_frame, seed)
    sentences = [verbalize(i, lang, registry, gazetteer) for i in instances]
    model, _ = train_model(sentences, registry, config)
    report = RoundTripReport(lang, conflicts=target_conflicts(registry, lang))
    for name in registry:
        report.per_frame[name] = [0, 0]
    for inst, sent in zip(instances, sentences):
        reason = check_roundtrip(inst, sent, model, gazetteer, registry)
        tally = report.per_frame[inst.frame]
        tally[1] += 1
        if reason is None:
            tally[0] += 1
        else:
            report.failures.append((inst.frame, inst.id, reason))
    return model, report
