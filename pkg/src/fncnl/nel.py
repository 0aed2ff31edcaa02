"""Gazetteer-based entity linking.

Only curated Persons and Organizations are linked.  Anything that does not
resolve to exactly one gazetteer entity stays an :class:`UnidentifiedString`
holding the text as it appeared in the sentence.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import FormatError, IntegrityError

ENTITY_KINDS = ("Person", "Organization")


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str
    canonical: str
    aliases: frozenset = field(default=frozenset())

    def __post_init__(self):
        if self.kind not in ENTITY_KINDS:
            raise ValueError(f"entity kind must be Person or Organization, got {self.kind!r}")
        if not self.id or not self.canonical.strip():
            raise ValueError("entity id and canonical name must be non-empty")
        aliases = frozenset(a for a in self.aliases) | {self.canonical}
        if any(not a.strip() for a in aliases):
            raise ValueError(f"empty alias for entity {self.id}")
        object.__setattr__(self, "aliases", aliases)


@dataclass(frozen=True)
class EntityRef:
    entity_id: str


@dataclass(frozen=True)
class UnidentifiedString:
    text: str


def normalize(text: str, casefold: bool = True) -> str:
    text = " ".join(text.split())
    return text.casefold() if casefold else text


class Gazetteer:
    """Entities indexed by normalized alias.

    An alias shared by several entities maps to all of them; the ambiguity is
    settled at link time.
    """

    def __init__(self, entities=(), casefold: bool = True):
        self.casefold = casefold
        self._entities = {}
        self._alias_index = {}
        for ent in entities:
            if ent.id in self._entities:
                raise IntegrityError(f"duplicate entity id {ent.id!r}")
            self._entities[ent.id] = ent
            for alias in ent.aliases:
                self._alias_index.setdefault(normalize(alias, casefold), set()).add(ent.id)

    def __len__(self):
        return len(self._entities)

    def __contains__(self, entity_id):
        return entity_id in self._entities

    def __getitem__(self, entity_id) -> Entity:
        try:
            return self._entities[entity_id]
        except KeyError:
            raise IntegrityError(f"unknown entity {entity_id!r}") from None

    def __iter__(self):
        return iter(self._entities.values())

    def get(self, entity_id, default=None):
        return self._entities.get(entity_id, default)

    def lookup(self, text):
        """Ids of all entities carrying ``text`` as an alias."""
        return frozenset(self._alias_index.get(normalize(text, self.casefold), ()))


def load_gazetteer(path, casefold: bool = True) -> Gazetteer:
    """Read ``ID  KIND  CANONICAL  ALIASES`` TSV (aliases pipe-separated)."""
    entities = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) == 3:
                cols.append("")
            if len(cols) != 4:
                raise FormatError(f"expected 4 tab-separated columns, found {len(cols)}", os.fspath(path), lineno)
            eid, kind, canonical, aliases = cols
            if eid in seen:
                raise FormatError(f"duplicate entity id {eid!r}", os.fspath(path), lineno)
            seen.add(eid)
            if not canonical.strip():
                raise FormatError(f"empty canonical name for {eid!r}", os.fspath(path), lineno)
            try:
                entities.append(Entity(eid, kind, canonical,
                                       frozenset(a for a in aliases.split("|") if a.strip())))
            except ValueError as exc:
                raise FormatError(str(exc), os.fspath(path), lineno) from None
    return Gazetteer(entities, casefold)


def write_gazetteer(gazetteer: Gazetteer, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ent in gazetteer:
            others = sorted(ent.aliases - {ent.canonical})
            fh.write("\t".join((ent.id, ent.kind, ent.canonical, "|".join(others))) + "\n")


def _kinds_for(expected_kind):
    if expected_kind == "entity(any)":
        return ENTITY_KINDS
    if expected_kind in ("entity(Person)", "entity(Organization)"):
        return (expected_kind[7:-1],)
    return ()


def link_mention(text: str, expected_kind: str, gazetteer: Gazetteer, akr_store=None):
    """Resolve a filler mention to an :class:`EntityRef` or leave it unidentified.

    Several entities sharing the alias are told apart by how many frame
    instances the store already holds about each; a tie stays unidentified.
    """
    kinds = _kinds_for(expected_kind)
    if not kinds or gazetteer is None:
        return UnidentifiedString(text)
    candidates = sorted(eid for eid in gazetteer.lookup(text) if gazetteer[eid].kind in kinds)
    if not candidates:
        return UnidentifiedString(text)
    if len(candidates) == 1:
        return EntityRef(candidates[0])
    if akr_store is None:
        return UnidentifiedString(text)
    counts = {eid: akr_store.instance_count(eid) for eid in candidates}
    top = max(counts.values())
    leaders = [eid for eid, c in counts.items() if c == top]
    if len(leaders) == 1 and top > 0:
        return EntityRef(leaders[0])
    return UnidentifiedString(text)
