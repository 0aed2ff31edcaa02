"""Temporal store of n-ary frame facts.

Every ingest is appended to a log; instances, duplicate counts and the day
index are derived from it.  A fact's validity depends on its frame kind:

* events hold only on their own date;
* states hold from their start date until a later state with the same
  anchor values supersedes them, or a terminator-frame instance with the same
  anchor values ends them (the end date itself is excluded), else forever.

Undated states never enter the day index.  ``approx`` dates order exactly
like exact ones.
"""

from __future__ import annotations

import datetime
import json
import os
import re
import threading
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Optional

from .corpus import FrameAnnotation, Sentence
from .errors import FormatError, IntegrityError
from .nel import Entity, EntityRef, UnidentifiedString, link_mention, normalize
from .registry import TIME, FrameRegistry, registry_from_dict

PRECISION = {"date": 2, "approx": 1, "unknown": 0}


@dataclass(frozen=True)
class TimeValue:
    kind: str = "unknown"
    day: Optional[datetime.date] = None

    def __post_init__(self):
        if self.kind not in PRECISION:
            raise ValueError(f"bad time kind {self.kind!r}")
        if (self.kind == "unknown") != (self.day is None):
            raise ValueError("only 'unknown' time values come without a day")

    def __str__(self):
        return "unknown" if self.day is None else f"{self.kind}({self.day.isoformat()})"

    def to_record(self):
        return {"kind": self.kind, "date": self.day.isoformat() if self.day else None}

    @classmethod
    def from_record(cls, rec):
        return cls(rec["kind"], datetime.date.fromisoformat(rec["date"]) if rec.get("date") else None)


UNKNOWN = TimeValue()

_YEAR = re.compile(r"\d{4}")


def parse_time_text(text: str) -> Optional[TimeValue]:
    text = text.strip()
    try:
        return TimeValue("date", datetime.date.fromisoformat(text))
    except ValueError:
        pass
    if _YEAR.fullmatch(text):
        return TimeValue("approx", datetime.date(int(text), 7, 1))
    return None


def resolve_time(annotation: FrameAnnotation, sentence: Sentence) -> TimeValue:
    """Date a parsed frame from its Time element, else from publication metadata."""
    el = annotation.element(TIME)
    if el is not None:
        parsed = parse_time_text(sentence.span_text(el.span))
        if parsed is not None:
            return parsed
    if sentence.pub_date is not None:
        return TimeValue("approx", sentence.pub_date)
    return UNKNOWN


def canonical_filler(filler):
    if isinstance(filler, EntityRef):
        return ("entity", filler.entity_id)
    return ("string", normalize(filler.text))


def dedup_key(frame: str, fillers) -> tuple:
    return (frame, tuple(sorted((fe, canonical_filler(f)) for fe, f in fillers.items() if fe != TIME)))


@dataclass(frozen=True)
class FrameInstance:
    id: str
    frame: str
    fillers: dict
    time: TimeValue = UNKNOWN
    count: int = 1
    provenance: tuple = ()
    observed_times: tuple = ()

    def __hash__(self):
        return hash(self.id)

    @property
    def key(self):
        return dedup_key(self.frame, self.fillers)

    def entity_ids(self):
        return {f.entity_id for f in self.fillers.values() if isinstance(f, EntityRef)}


def _filler_record(filler, entities):
    if isinstance(filler, EntityRef):
        ent = entities[filler.entity_id]
        return {"entity": ent.id, "kind": ent.kind, "canonical": ent.canonical}
    return {"text": filler.text}


class TemporalStore:
    """Append-only store of frame instances with a derived day index."""

    def __init__(self, registry: FrameRegistry):
        self.registry = registry
        self.log = []
        self.entities = {}
        self._instances = {}
        self._by_key = {}
        self._entity_instances = defaultdict(set)
        self._events_by_day = defaultdict(set)
        self._intervals = {}
        self._groups = defaultdict(set)       # (state frame, anchors) -> ids
        self._terminators = defaultdict(set)  # (state frame, anchors) -> terminator ids
        self._lock = threading.RLock()

    # -- reads -------------------------------------------------------------

    def __len__(self):
        return len(self._instances)

    def instances(self):
        with self._lock:
            return [self._instances[i] for i in sorted(self._instances, key=_id_order)]

    def get(self, instance_id) -> FrameInstance:
        with self._lock:
            return self._instances[instance_id]

    def instance_count(self, entity_id) -> int:
        with self._lock:
            return len(self._entity_instances.get(entity_id, ()))

    def facts_at(self, day: datetime.date) -> set:
        with self._lock:
            ids = set(self._events_by_day.get(day, ()))
            for iid, (start, end) in self._intervals.items():
                if start <= day and (end is None or day < end):
                    ids.add(iid)
            return {self._instances[i] for i in ids}

    def day_index(self):
        """Snapshot of the derived index: ``(events_by_day, state_intervals)``."""
        with self._lock:
            return ({d: frozenset(s) for d, s in self._events_by_day.items() if s}, dict(self._intervals))

    # -- writes ------------------------------------------------------------

    def ingest(self, annotation: FrameAnnotation, sentence: Sentence, gazetteer,
               sentence_index: Optional[int] = None) -> str:
        """Link, date and store one parsed frame; returns the instance id."""
        frame = self.registry[annotation.frame]
        self.registry.check_annotation(annotation)
        with self._lock:
            fillers = {}
            for el in annotation.elements:
                fe = frame.fe(el.fe)
                text = sentence.span_text(el.span)
                fillers[el.fe] = link_mention(text, fe.filler_kind, gazetteer, self)
            entities = {}
            for f in fillers.values():
                if isinstance(f, EntityRef):
                    entities[f.entity_id] = gazetteer[f.entity_id]
            time = resolve_time(annotation, sentence)
            return self.record(annotation.frame, fillers, time,
                               (sentence.doc_id, sentence_index), entities)

    def record(self, frame_name, fillers, time=UNKNOWN, provenance=("", None), entities=None) -> str:
        """Store already-linked fillers; the primitive that ingest and replay share."""
        frame = self.registry[frame_name]
        entities = dict(entities or {})
        with self._lock:
            for fe, filler in fillers.items():
                fedef = frame.fe(fe)
                if isinstance(filler, EntityRef):
                    ent = entities.get(filler.entity_id) or self.entities.get(filler.entity_id)
                    if ent is None:
                        raise IntegrityError(f"unknown entity {filler.entity_id!r}")
                    if not fedef.accepts(ent.kind):
                        raise IntegrityError(f"{ent.kind} {ent.id} cannot fill {frame_name}.{fe} ({fedef.filler_kind})")
                    entities[ent.id] = ent
                elif not isinstance(filler, UnidentifiedString):
                    raise TypeError(f"bad filler {filler!r}")
            key = dedup_key(frame_name, fillers)
            existing = self._by_key.get(key)
            rec = {"type": "ingest", "frame": frame_name,
                   "fillers": {fe: _filler_record(f, entities) for fe, f in sorted(fillers.items())},
                   "time": time.to_record(), "doc_id": provenance[0], "sentence": provenance[1]}
            for ent in entities.values():
                self.entities.setdefault(ent.id, Entity(ent.id, ent.kind, ent.canonical))
            if existing is None:
                iid = f"i{len(self._instances) + 1}"
                inst = FrameInstance(iid, frame_name, dict(fillers), time, 1,
                                     (tuple(provenance),), (time,))
                self._by_key[key] = iid
                old = None
            else:
                old = self._instances[existing]
                iid = old.id
                keep_new = _more_precise(time, old.time)
                kept = old.fillers
                if keep_new:
                    kept = {fe: f for fe, f in old.fillers.items() if fe != TIME}
                    if TIME in fillers:
                        kept[TIME] = fillers[TIME]
                inst = replace(old,
                               fillers=kept,
                               time=time if keep_new else old.time,
                               count=old.count + 1,
                               provenance=old.provenance + (tuple(provenance),),
                               observed_times=old.observed_times + (time,))
            rec["instance"] = iid
            rec["merged"] = existing is not None
            self._instances[iid] = inst
            for eid in inst.entity_ids():
                self._entity_instances[eid].add(iid)
            self._reindex(old, inst)
            self.log.append(rec)
            return iid

    # -- day index -----------------------------------------------------------

    def _reindex(self, old, inst):
        frame = self.registry[inst.frame]
        if old is not None and old.time.day is not None and not frame.is_state:
            self._events_by_day[old.time.day].discard(old.id)
        if frame.is_state:
            group = (frame.name, _anchor_values(inst, frame.anchor_fes))
            self._groups[group].add(inst.id)
            self._recompute_group(group)
        elif inst.time.day is not None:
            self._events_by_day[inst.time.day].add(inst.id)
        for state_name in self.registry.terminated_by(inst.frame):
            group = (state_name, _anchor_values(inst, self.registry[state_name].anchor_fes))
            self._terminators[group].add(inst.id)
            self._recompute_group(group)

    def _recompute_group(self, group):
        members = [self._instances[i] for i in self._groups.get(group, ())]
        enders = sorted(self._instances[i].time.day for i in self._terminators.get(group, ())
                        if self._instances[i].time.day is not None)
        for iid, interval in _group_intervals(members, enders).items():
            if interval is None:
                self._intervals.pop(iid, None)
            else:
                self._intervals[iid] = interval

    def rebuilt_index(self):
        """Day index recomputed from the log alone, for consistency checks."""
        fresh = TemporalStore(self.registry)
        fresh.replay(self.log)
        return fresh.day_index()

    # -- persistence ---------------------------------------------------------

    def replay(self, records):
        for lineno, rec in enumerate(records, 1):
            if rec.get("type") == "schema":
                continue
            fillers, entities = {}, {}
            for fe, f in rec["fillers"].items():
                if "entity" in f:
                    entities[f["entity"]] = Entity(f["entity"], f["kind"], f["canonical"])
                    fillers[fe] = EntityRef(f["entity"])
                else:
                    fillers[fe] = UnidentifiedString(f["text"])
            iid = self.record(rec["frame"], fillers, TimeValue.from_record(rec["time"]),
                              (rec.get("doc_id", ""), rec.get("sentence")), entities)
            if rec.get("instance") not in (None, iid):
                raise FormatError(f"log record names instance {rec['instance']} but replays as {iid}",
                                  "<store>", lineno)

    def schema_record(self):
        return {"type": "schema", **self.registry.to_dict(include_templates=False)}


def _id_order(iid):
    return int(iid[1:]) if iid[1:].isdigit() else 0


def _more_precise(new: TimeValue, old: TimeValue) -> bool:
    if PRECISION[new.kind] != PRECISION[old.kind]:
        return PRECISION[new.kind] > PRECISION[old.kind]
    return new.day is not None and new.day < old.day


def _anchor_values(inst, anchors):
    return tuple(canonical_filler(inst.fillers[a]) if a in inst.fillers else None for a in anchors)


def _group_intervals(members, enders):
    """Validity intervals for same-anchor states; later starts close earlier ones."""
    out = {}
    dated = sorted((i for i in members if i.time.day is not None),
                   key=lambda i: (i.time.day, _id_order(i.id)))
    for i in members:
        if i.time.day is None:
            out[i.id] = None
    for pos, inst in enumerate(dated):
        start = inst.time.day
        end = dated[pos + 1].time.day if pos + 1 < len(dated) else None
        for d in enders:
            if d > start:
                if end is None or d < end:
                    end = d
                break
        out[inst.id] = (start, end)
    return out


# ---------------------------------------------------------------------------
# profiles

def entity_profile(store: TemporalStore, entity_id: str, gazetteer=None) -> dict:
    """Instances mentioning ``entity_id`` grouped by frame, most-attested first."""
    known = entity_id in store.entities or (gazetteer is not None and entity_id in gazetteer)
    if not known:
        raise IntegrityError(f"unknown entity {entity_id!r}")
    with store._lock:
        ids = set(store._entity_instances.get(entity_id, ()))
        insts = [store._instances[i] for i in ids]
    groups = defaultdict(list)
    for inst in insts:
        groups[inst.frame].append(inst)
    far = datetime.date.max
    return {frame: sorted(members, key=lambda i: (-i.count, i.time.day or far, _id_order(i.id)))
            for frame, members in sorted(groups.items())}


# ---------------------------------------------------------------------------
# files

def instance_record(inst: FrameInstance, entities) -> dict:
    return {"id": inst.id, "frame": inst.frame,
            "fillers": {fe: _filler_record(f, entities) for fe, f in sorted(inst.fillers.items())},
            "time": inst.time.to_record(), "count": inst.count,
            "provenance": [list(p) for p in inst.provenance],
            "time_policy": "earliest-most-precise",
            "observed_times": [t.to_record() for t in inst.observed_times]}


def load_store(path, registry: Optional[FrameRegistry] = None) -> TemporalStore:
    """Replay a store log.  Without ``registry`` the log's schema header is used."""
    records = []
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise FormatError(f"invalid JSON record: {exc.msg}", os.fspath(path), lineno) from None
    header = records[0] if records and records[0].get("type") == "schema" else None
    if registry is None:
        if header is None:
            raise FormatError("store has no schema header and no registry was given", os.fspath(path))
        registry = registry_from_dict(header, os.fspath(path))
    elif header is not None:
        stored = header["frames"]
        current = registry.to_dict(include_templates=False)["frames"]
        for name, spec in stored.items():
            if name in current and current[name] != spec:
                raise IntegrityError(f"registry definition of {name} differs from the one the store was built with")
    store = TemporalStore(registry)
    store.replay(records)
    return store


def append_store(store: TemporalStore, path, since: int = 0) -> int:
    """Append log records from position ``since`` on; writes the header for a new file."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8") as fh:
        if fresh:
            fh.write(json.dumps(store.schema_record(), ensure_ascii=False, sort_keys=True) + "\n")
        for rec in store.log[since:]:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    return len(store.log) - since
