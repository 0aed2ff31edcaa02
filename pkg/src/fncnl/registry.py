"""Frame inventory: frames, their elements, temporal behaviour and templates.

Registry files are JSON::

    {"frames": {"Being_employed": {
        "kind": "state",
        "elements": [{"name": "Employee", "filler_kind": "entity(Person)"}, ...],
        "anchor_fes": ["Employee", "Employer"],
        "terminator": "Employment_end",
        "templates": {"en": [{"slot": "Employee"}, "was|be|VBD",
                             {"target": "employed|employ|VBN|O|employ.v.01"}, ...]}}}}

A template is a list of segments.  A bare string is a literal token written
``surface|lemma|POS|NER|HYPERNYM`` (trailing fields default to the surface
lowercased, ``X``, ``O`` and ``#NONE#``).  ``{"target": token}`` is the frame
evoking literal.  ``{"slot": FE, "pre": [...], "post": [...]}`` is a filler
slot whose attached literals disappear when the FE is unfilled; optional
``pos`` and ``hypernym`` keys set the features given to filler tokens.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from .corpus import NONE, Token
from .errors import FormatError, IntegrityError

FILLER_KINDS = ("entity(Person)", "entity(Organization)", "entity(any)", "string")
TIME = "Time"


@dataclass(frozen=True)
class FeDef:
    name: str
    filler_kind: str = "string"

    @property
    def is_entity(self):
        return self.filler_kind != "string"

    def accepts(self, entity_kind: str) -> bool:
        if self.filler_kind == "entity(any)":
            return entity_kind in ("Person", "Organization")
        return self.filler_kind == f"entity({entity_kind})"


@dataclass(frozen=True)
class LiteralSegment:
    tokens: tuple
    is_target: bool = False


@dataclass(frozen=True)
class SlotSegment:
    fe: str
    pre: tuple = ()
    post: tuple = ()
    pos: str = "NN"
    hypernym: Optional[str] = None

    @property
    def filler_hypernym(self):
        # A slot asserts the sense class of whatever fills it.
        return self.hypernym or f"{self.fe.lower()}.n.01"


@dataclass(frozen=True)
class Template:
    segments: tuple

    @property
    def target_token(self) -> Token:
        for seg in self.segments:
            if isinstance(seg, LiteralSegment) and seg.is_target:
                return seg.tokens[0]
        raise IntegrityError("template has no target")

    def slot(self, fe):
        for seg in self.segments:
            if isinstance(seg, SlotSegment) and seg.fe == fe:
                return seg
        return None


@dataclass(frozen=True)
class FrameDef:
    name: str
    kind: str
    elements: tuple
    anchor_fes: tuple = ()
    terminator: Optional[str] = None
    templates: dict = field(default_factory=dict, compare=False)

    def fe(self, name) -> FeDef:
        for el in self.elements:
            if el.name == name:
                return el
        raise IntegrityError(f"frame {self.name} has no frame element {name!r}")

    @property
    def element_names(self):
        return tuple(el.name for el in self.elements)

    @property
    def is_state(self):
        return self.kind == "state"


class FrameRegistry:
    """Immutable collection of frame definitions."""

    def __init__(self, frames):
        self._frames = dict(frames)
        _validate(self._frames)

    def __getitem__(self, name) -> FrameDef:
        try:
            return self._frames[name]
        except KeyError:
            raise IntegrityError(f"unknown frame {name!r}") from None

    def __contains__(self, name):
        return name in self._frames

    def __iter__(self):
        return iter(sorted(self._frames))

    def __len__(self):
        return len(self._frames)

    @property
    def frames(self):
        return dict(self._frames)

    def frame_names(self):
        return sorted(self._frames)

    def terminated_by(self, frame_name):
        """Names of state frames that ``frame_name`` instances terminate."""
        return sorted(f.name for f in self._frames.values() if f.terminator == frame_name)

    def check_annotation(self, ann):
        frame = self[ann.frame]
        for el in ann.elements:
            frame.fe(el.fe)

    def extended(self, other: "FrameRegistry") -> "FrameRegistry":
        dup = set(self._frames) & set(other._frames)
        if dup:
            raise IntegrityError(f"duplicate frame {sorted(dup)[0]!r}")
        return FrameRegistry({**self._frames, **other._frames})

    def restricted(self, names) -> "FrameRegistry":
        return FrameRegistry({n: self[n] for n in names})

    def to_dict(self, include_templates=True):
        out = {}
        for name in sorted(self._frames):
            f = self._frames[name]
            d = {"kind": f.kind,
                 "elements": [{"name": e.name, "filler_kind": e.filler_kind} for e in f.elements],
                 "anchor_fes": list(f.anchor_fes),
                 "terminator": f.terminator}
            if include_templates:
                d["templates"] = {lang: _template_spec(t) for lang, t in sorted(f.templates.items())}
            out[name] = d
        return {"frames": out}


def _validate(frames):
    for name, f in frames.items():
        if name != f.name:
            raise IntegrityError(f"frame stored under {name!r} is named {f.name!r}")
        if f.kind not in ("event", "state"):
            raise IntegrityError(f"frame {name}: kind must be 'event' or 'state'")
        names = [e.name for e in f.elements]
        if len(set(names)) != len(names):
            raise IntegrityError(f"frame {name}: duplicate frame element names")
        if TIME not in names:
            raise IntegrityError(f"frame {name}: missing the Time frame element")
        for e in f.elements:
            if e.filler_kind not in FILLER_KINDS:
                raise IntegrityError(f"frame {name}: bad filler kind {e.filler_kind!r} for {e.name}")
        if f.is_state and not f.anchor_fes:
            raise IntegrityError(f"state frame {name} declares no anchor_fes")
        if not f.is_state and f.anchor_fes:
            raise IntegrityError(f"event frame {name} declares anchor_fes")
        for a in f.anchor_fes:
            if a not in names or a == TIME:
                raise IntegrityError(f"frame {name}: anchor {a!r} is not a non-Time frame element")
        if f.terminator is not None:
            if not f.is_state:
                raise IntegrityError(f"event frame {name} cannot have a terminator")
            term = frames.get(f.terminator)
            if term is None:
                raise IntegrityError(f"frame {name}: unknown terminator {f.terminator!r}")
            missing = set(f.anchor_fes) - set(term.element_names)
            if missing:
                raise IntegrityError(f"terminator {term.name} lacks anchor elements {sorted(missing)}")
        for lang, t in f.templates.items():
            targets = [s for s in t.segments if isinstance(s, LiteralSegment) and s.is_target]
            if len(targets) != 1 or len(targets[0].tokens) != 1:
                raise IntegrityError(f"frame {name} [{lang}]: a template needs exactly one single-token target")
            slots = [s.fe for s in t.segments if isinstance(s, SlotSegment)]
            if len(set(slots)) != len(slots):
                raise IntegrityError(f"frame {name} [{lang}]: slot repeated")
            for s in slots:
                if s not in names:
                    raise IntegrityError(f"frame {name} [{lang}]: slot names undefined element {s!r}")


# ---------------------------------------------------------------------------
# template specs

def parse_token_spec(spec: str) -> Token:
    parts = spec.split("|")
    if not parts[0] or len(parts) > 5:
        raise ValueError(f"bad token spec {spec!r}")
    defaults = [parts[0], parts[0].lower(), "X", "O", NONE]
    parts = parts + defaults[len(parts):]
    return Token(*parts)


def token_spec(tok: Token) -> str:
    return "|".join((tok.surface, tok.lemma, tok.pos, tok.ner, tok.hypernym))


def _template_from_spec(spec, frame_name, lang):
    segments = []
    for item in spec:
        if isinstance(item, str):
            segments.append(LiteralSegment((parse_token_spec(item),)))
        elif isinstance(item, dict) and "target" in item:
            segments.append(LiteralSegment((parse_token_spec(item["target"]),), True))
        elif isinstance(item, dict) and "slot" in item:
            segments.append(SlotSegment(
                item["slot"],
                tuple(parse_token_spec(t) for t in item.get("pre", ())),
                tuple(parse_token_spec(t) for t in item.get("post", ())),
                item.get("pos", "NN"),
                item.get("hypernym")))
        else:
            raise ValueError(f"frame {frame_name} [{lang}]: unrecognised template segment {item!r}")
    # Time gets the fixed "( <time> )" segment unless the template places it.
    if not any(isinstance(s, SlotSegment) and s.fe == TIME for s in segments):
        time_seg = SlotSegment(TIME, (parse_token_spec("(|(|-LRB-"),), (parse_token_spec(")|)|-RRB-"),), "CD")
        at = len(segments)
        last = segments[-1] if segments else None
        if isinstance(last, LiteralSegment) and not last.is_target and last.tokens[-1].pos == ".":
            at -= 1
        segments.insert(at, time_seg)
    return Template(tuple(segments))


def _template_spec(t: Template):
    out = []
    for seg in t.segments:
        if isinstance(seg, LiteralSegment):
            if seg.is_target:
                out.append({"target": token_spec(seg.tokens[0])})
            else:
                out.extend(token_spec(tok) for tok in seg.tokens)
        else:
            d = {"slot": seg.fe}
            if seg.pre:
                d["pre"] = [token_spec(tok) for tok in seg.pre]
            if seg.post:
                d["post"] = [token_spec(tok) for tok in seg.post]
            d["pos"] = seg.pos
            if seg.hypernym:
                d["hypernym"] = seg.hypernym
            out.append(d)
    return out


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise IntegrityError(f"duplicate key {k!r}")
        out[k] = v
    return out


def registry_from_dict(data, source="<registry>") -> FrameRegistry:
    if not isinstance(data, dict) or not isinstance(data.get("frames"), dict):
        raise FormatError("registry must be an object with a 'frames' object", source)
    frames = {}
    for name, spec in data["frames"].items():
        try:
            elements = tuple(FeDef(e["name"], e.get("filler_kind", "string")) for e in spec["elements"])
            templates = {lang: _template_from_spec(t, name, lang)
                         for lang, t in spec.get("templates", {}).items()}
            frames[name] = FrameDef(name, spec["kind"], elements, tuple(spec.get("anchor_fes", ())),
                                    spec.get("terminator"), templates)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, IntegrityError):
                raise
            raise FormatError(f"frame {name}: {exc}", source) from None
    return FrameRegistry(frames)


def load_registry(path, base: Optional[FrameRegistry] = None) -> FrameRegistry:
    """Load a registry file; with ``base`` the file's frames are added to it."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", str(path), exc.lineno) from None
    except IntegrityError as exc:
        raise IntegrityError(f"{path}: {exc}") from None
    reg = registry_from_dict(data, str(path))
    return base.extended(reg) if base is not None else reg


def _data_path(name):
    return resources.files("fncnl").joinpath("data", name)


@lru_cache(maxsize=None)
def default_registry() -> FrameRegistry:
    """The shipped 26-frame newswire registry."""
    with resources.as_file(_data_path("framenet26.json")) as p:
        return load_registry(p)


def sophies_world_registry() -> FrameRegistry:
    """The default registry extended with the Sophie's World story frames."""
    with resources.as_file(_data_path("sophies_world.json")) as p:
        return load_registry(p, base=default_registry())


def leadership_registry() -> FrameRegistry:
    """The default registry plus an office-holding ``Leadership`` state."""
    with resources.as_file(_data_path("leadership.json")) as p:
        return load_registry(p, base=default_registry())


DEFAULT_REGISTRY_PATH = os.path.join(os.path.dirname(__file__), "data", "framenet26.json")
