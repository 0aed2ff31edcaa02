"""Exhaustive-search rule learning over fixed feature windows.

Rules are slot patterns.  Each slot is a wildcard ``_``, a literal value, or a
set of values ``{a, b}``.  A rule records how many training windows it matches
(``n``) and how many of those are negatives (``m``); its accuracy estimate is
the Laplace ratio ``(n - m + 1) / (n + 2)``.

Learning is sequential covering.  Every pattern with at most
``max_literals`` non-wildcard slots that generalizes some still-uncovered
positive window is a candidate; candidates are scored against the whole
training set, optionally widened into value sets, and the best one is kept.
Its positives are marked covered and the search repeats.

Matching sets are Python ints used as bitsets over window indices, which keeps
scoring tens of thousands of candidates against tens of thousands of windows
cheap without any external dependency.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .corpus import FE_SCHEMA, TARGET_SCHEMA
from .errors import FormatError


def laplace(n: int, m: int) -> Fraction:
    """Laplace accuracy estimate of a rule matching ``n`` windows, ``m`` of them false."""
    if isinstance(n, bool) or isinstance(m, bool) or not isinstance(n, int) or not isinstance(m, int):
        raise TypeError("n and m must be integers")
    if n < 1 or not 0 <= m <= n:
        raise ValueError(f"laplace needs n >= 1 and 0 <= m <= n, got n={n}, m={m}")
    return Fraction(n - m + 1, n + 2)


def percent(ratio: Fraction) -> int:
    """Integer percent, rounding halves up."""
    scaled = Fraction(ratio) * 100
    return int((scaled + Fraction(1, 2)) // 1)


# ---------------------------------------------------------------------------
# slot constraints and patterns

class _Wildcard:
    __slots__ = ()

    def matches(self, value):
        return True

    def __repr__(self):
        return "WILDCARD"

    def __reduce__(self):
        return "WILDCARD"


WILDCARD = _Wildcard()


@dataclass(frozen=True)
class Literal:
    value: str

    def matches(self, value):
        return value == self.value


@dataclass(frozen=True)
class ValueSet:
    values: frozenset

    def __post_init__(self):
        object.__setattr__(self, "values", frozenset(self.values))
        if len(self.values) < 2:
            raise ValueError("a ValueSet needs at least two values; use Literal")

    def matches(self, value):
        return value in self.values


def constraint(values):
    """Build the right constraint for a collection of accepted values."""
    values = frozenset(values)
    if not values:
        raise ValueError("empty value collection")
    if len(values) == 1:
        return Literal(next(iter(values)))
    return ValueSet(values)


def match_pattern(pattern: Sequence, fv: Sequence) -> bool:
    if len(pattern) != len(fv):
        raise ValueError(f"pattern has {len(pattern)} slots but feature vector has {len(fv)}")
    return all(c.matches(v) for c, v in zip(pattern, fv))


def literal_count(pattern) -> int:
    return sum(1 for c in pattern if c is not WILDCARD)


_NEEDS_QUOTE = re.compile(r'[,{}\[\]"\\\s]')


def _quote(value: str) -> str:
    if value == "_" or not value or _NEEDS_QUOTE.search(value):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return value


def format_constraint(c) -> str:
    if c is WILDCARD:
        return "_"
    if isinstance(c, Literal):
        return _quote(c.value)
    return "{" + ", ".join(_quote(v) for v in sorted(c.values)) + "}"


def format_pattern(pattern) -> str:
    return "[" + ", ".join(format_constraint(c) for c in pattern) + "]"


_TOKEN = re.compile(r'\s*(?:(?P<punct>[\[\]{},])|"(?P<quoted>(?:[^"\\]|\\.)*)"|(?P<bare>[^,{}\[\]"\s]+))')


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at column {pos + 1}")
        if m.group("punct"):
            out.append(("p", m.group("punct")))
        elif m.group("quoted") is not None:
            out.append(("v", re.sub(r"\\(.)", r"\1", m.group("quoted"))))
        else:
            out.append(("b", m.group("bare")))
        pos = m.end()
    return out


def parse_pattern(text: str) -> tuple:
    toks = _tokenize(text)
    if not toks or toks[0] != ("p", "[") or toks[-1] != ("p", "]"):
        raise ValueError("a pattern must be enclosed in [ ]")
    toks = toks[1:-1]
    slots = []
    i = 0
    while True:
        if i >= len(toks):
            raise ValueError("empty slot")
        kind, val = toks[i]
        if kind == "b" and val == "_":
            slots.append(WILDCARD)
            i += 1
        elif kind in ("b", "v"):
            slots.append(Literal(val))
            i += 1
        elif (kind, val) == ("p", "{"):
            values = []
            i += 1
            while True:
                if i >= len(toks) or toks[i][0] == "p":
                    raise ValueError("malformed value set")
                values.append(toks[i][1])
                i += 1
                if i < len(toks) and toks[i] == ("p", ","):
                    i += 1
                    continue
                if i < len(toks) and toks[i] == ("p", "}"):
                    i += 1
                    break
                raise ValueError("unterminated value set")
            if len(set(values)) != len(values):
                raise ValueError("repeated value in value set")
            slots.append(constraint(values))
        else:
            raise ValueError(f"unexpected {val!r}")
        if i == len(toks):
            break
        if toks[i] != ("p", ","):
            raise ValueError("slots must be separated by commas")
        i += 1
    return tuple(slots)


# ---------------------------------------------------------------------------
# rules

@dataclass(frozen=True)
class Rule:
    pattern: tuple
    n: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        object.__setattr__(self, "_laplace", laplace(self.n, self.m))

    @property
    def laplace(self) -> Fraction:
        return self._laplace

    def matches(self, fv) -> bool:
        return match_pattern(self.pattern, fv)


@dataclass(frozen=True)
class RuleSet:
    label: str
    schema: tuple
    rules: tuple = ()
    threshold: float = 0.66

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.label or "\n" in self.label:
            raise ValueError("ruleset label must be a non-empty single line")
        for r in self.rules:
            if len(r.pattern) != len(self.schema):
                raise ValueError(f"rule {format_pattern(r.pattern)} does not fit the {len(self.schema)}-slot schema")
            if r.laplace < Fraction(str(self.threshold)):
                raise ValueError(f"rule {format_pattern(r.pattern)} is below the ruleset threshold")

    def __len__(self):
        return len(self.rules)


@dataclass(frozen=True)
class LearnerConfig:
    max_literals: int = 3
    min_laplace: float = 0.66
    min_coverage: int = 2
    set_merge: bool = True

    def __post_init__(self):
        if self.max_literals < 1:
            raise ValueError("max_literals must be at least 1")
        if not 0 < self.min_laplace < 1:
            raise ValueError("min_laplace must lie strictly between 0 and 1")
        if self.min_coverage < 1:
            raise ValueError("min_coverage must be at least 1")


def classify(ruleset: RuleSet, fv) -> Optional[Fraction]:
    """Highest Laplace ratio among matching rules, or ``None``."""
    if len(fv) != len(ruleset.schema):
        raise ValueError(f"feature vector has {len(fv)} slots, ruleset schema has {len(ruleset.schema)}")
    best = None
    for rule in ruleset.rules:
        if (best is None or rule.laplace > best) and all(c.matches(v) for c, v in zip(rule.pattern, fv)):
            best = rule.laplace
    return best


# ---------------------------------------------------------------------------
# learning

class WindowIndex:
    """Bitset index of ``(slot, value) -> windows`` over a list of feature vectors.

    Building it is the expensive part of learning, so callers training many
    labels over the same windows should build it once and reuse it.
    """

    def __init__(self, windows: Sequence[Sequence[str]]):
        self.windows = list(windows)
        if not self.windows:
            raise ValueError("no training windows")
        self.width = len(self.windows[0])
        self.size = len(self.windows)
        self.all_bits = (1 << self.size) - 1
        index = [dict() for _ in range(self.width)]
        for i, fv in enumerate(self.windows):
            if len(fv) != self.width:
                raise ValueError("feature vectors of mixed width")
            bit = 1 << i
            for slot, value in enumerate(fv):
                d = index[slot]
                d[value] = d.get(value, 0) | bit
        self.index = index

    def cover(self, literals) -> int:
        bits = self.all_bits
        for slot, value in literals:
            bits &= self.index[slot].get(value, 0)
            if not bits:
                break
        return bits


@dataclass
class _Candidate:
    slots: tuple          # sorted ((slot, constraint), ...)
    n: int
    m: int
    poscover: int         # bitset over positive ordinals
    score: Fraction = field(init=False)

    def __post_init__(self):
        self.score = Fraction(self.n - self.m + 1, self.n + 2)


def _pattern_from(slots, width):
    pattern = [WILDCARD] * width
    for slot, c in slots:
        pattern[slot] = c
    return tuple(pattern)


def learn_ruleset(examples, label: str, config: LearnerConfig = LearnerConfig(), schema=None):
    """Learn a rule set for ``label`` from ``(feature_vector, is_positive)`` pairs.

    Returns ``(ruleset, uncovered)`` where ``uncovered`` counts the positive
    windows no learned rule covers.
    """
    examples = list(examples)
    if not any(pos for _, pos in examples):
        raise ValueError(f"no positive examples for {label!r}")
    index = WindowIndex([fv for fv, _ in examples])
    labels = [bool(pos) for _, pos in examples]
    return learn_from_index(index, labels, label, config, schema)


def learn_from_index(index: WindowIndex, labels: Sequence[bool], label: str,
                     config: LearnerConfig = LearnerConfig(), schema=None):
    if len(labels) != index.size:
        raise ValueError("one label per indexed window is required")
    if schema is None:
        schema = {10: TARGET_SCHEMA, 12: FE_SCHEMA}.get(index.width)
        if schema is None:
            schema = tuple(f"f{i}" for i in range(index.width))
    if len(schema) != index.width:
        raise ValueError("schema width does not match the feature vectors")
    positives = [i for i, pos in enumerate(labels) if pos]
    if not positives:
        raise ValueError(f"no positive examples for {label!r}")

    posmask = 0
    for i in positives:
        posmask |= 1 << i
    # positive-only index: bit k stands for positives[k]
    posindex = [dict() for _ in range(index.width)]
    for k, i in enumerate(positives):
        for slot, value in enumerate(index.windows[i]):
            d = posindex[slot]
            d[value] = d.get(value, 0) | (1 << k)
    all_pos = (1 << len(positives)) - 1

    min_score = Fraction(str(config.min_laplace))
    num, den = min_score.numerator, min_score.denominator
    seen = set()
    survivors = []
    slot_ids = range(index.width)
    for i in positives:
        fv = index.windows[i]
        for size in range(0, config.max_literals + 1):
            for slots in combinations(slot_ids, size):
                key = tuple((s, fv[s]) for s in slots)
                if key in seen:
                    continue
                seen.add(key)
                bits = index.cover(key)
                n = bits.bit_count()
                if n < config.min_coverage:
                    continue
                m = n - (bits & posmask).bit_count()
                if (n - m + 1) * den < num * (n + 2):
                    continue
                poscover = all_pos
                for s, v in key:
                    poscover &= posindex[s][v]
                survivors.append(_Candidate(tuple((s, Literal(v)) for s, v in key), n, m, poscover))
    del seen

    rules = []
    uncovered = all_pos
    while uncovered:
        eligible = [c for c in survivors if c.poscover & uncovered]
        if config.set_merge:
            eligible.extend(_merge_candidates(eligible))
        if not eligible:
            break
        best = _select(eligible, index.width)
        rules.append(Rule(_pattern_from(best.slots, index.width), best.n, best.m))
        uncovered &= ~best.poscover
    ruleset = RuleSet(label, schema, tuple(rules), config.min_laplace)
    return ruleset, uncovered.bit_count()


def _merge_candidates(candidates):
    """Widen same-shape literal candidates differing in one slot into value sets."""
    groups = {}
    for c in candidates:
        for j, (slot, con) in enumerate(c.slots):
            if isinstance(con, Literal):
                rest = c.slots[:j] + c.slots[j + 1:]
                groups.setdefault((slot, rest), []).append(c)
    merged = []
    for (slot, rest), members in groups.items():
        if len(members) < 2:
            continue
        members.sort(key=lambda c: (-c.score, -c.n, dict(c.slots)[slot].value))
        best_score = members[0].score
        values = [dict(members[0].slots)[slot].value]
        n, m, poscover = members[0].n, members[0].m, members[0].poscover
        for c in members[1:]:
            n2, m2 = n + c.n, m + c.m
            if Fraction(n2 - m2 + 1, n2 + 2) >= best_score:
                n, m = n2, m2
                poscover |= c.poscover
                values.append(dict(c.slots)[slot].value)
        if len(values) < 2:
            continue
        slots = tuple(sorted(rest + ((slot, ValueSet(frozenset(values))),), key=lambda sc: sc[0]))
        merged.append(_Candidate(slots, n, m, poscover))
    return merged


def _select(candidates, width):
    top = max(candidates, key=lambda c: (c.score, c.n, -len(c.slots)))
    key = (top.score, top.n, len(top.slots))
    tied = [c for c in candidates if (c.score, c.n, len(c.slots)) == key]
    if len(tied) == 1:
        return tied[0]
    return min(tied, key=lambda c: format_pattern(_pattern_from(c.slots, width)))


# ---------------------------------------------------------------------------
# rule files

def serialize_ruleset(rs: RuleSet) -> str:
    lines = [f"label={rs.label}", "schema=" + ",".join(rs.schema), f"threshold={rs.threshold!r}"]
    for r in rs.rules:
        lines.append(f"{format_pattern(r.pattern)}\t{r.n}\t{r.m}\t{percent(r.laplace)}%")
    return "\n".join(lines) + "\n"


def parse_ruleset(text: str, source: str = "<rules>") -> RuleSet:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header = {}
    for lineno, key in enumerate(("label", "schema", "threshold"), 1):
        if len(lines) < lineno or not lines[lineno - 1].startswith(key + "="):
            raise FormatError(f"expected header line '{key}=...'", source, lineno)
        header[key] = lines[lineno - 1][len(key) + 1:]
    schema = tuple(header["schema"].split(","))
    if not header["schema"] or any(not s for s in schema):
        raise FormatError("empty schema slot name", source, 2)
    try:
        threshold = float(header["threshold"])
    except ValueError:
        raise FormatError(f"bad threshold {header['threshold']!r}", source, 3) from None
    if not 0 < threshold < 1:
        raise FormatError("threshold must lie strictly between 0 and 1", source, 3)
    rules = []
    for lineno, line in enumerate(lines[3:], 4):
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(f"expected 4 tab-separated columns, found {len(cols)}", source, lineno)
        try:
            pattern = parse_pattern(cols[0])
        except ValueError as exc:
            raise FormatError(f"bad pattern: {exc}", source, lineno) from None
        if len(pattern) != len(schema):
            raise FormatError(f"pattern has {len(pattern)} slots, schema declares {len(schema)}", source, lineno)
        if not re.fullmatch(r"\d+", cols[1]) or not re.fullmatch(r"\d+", cols[2]):
            raise FormatError("n and m must be non-negative integers", source, lineno)
        n, m = int(cols[1]), int(cols[2])
        if n < 1 or m > n:
            raise FormatError(f"impossible counts n={n}, m={m}", source, lineno)
        stated = re.fullmatch(r"(\d+(?:\.\d+)?)%", cols[3].strip())
        if not stated:
            raise FormatError(f"bad laplace column {cols[3]!r}", source, lineno)
        exact = laplace(n, m) * 100
        if abs(Fraction(stated.group(1)) - exact) > Fraction(1, 2):
            raise FormatError(
                f"stated laplace {cols[3]} is inconsistent with n={n}, m={m} "
                f"({percent(laplace(n, m))}%)", source, lineno)
        rules.append(Rule(pattern, n, m))
    try:
        return RuleSet(header["label"], schema, tuple(rules), threshold)
    except ValueError as exc:
        raise FormatError(str(exc), source) from None


def load_ruleset(path) -> RuleSet:
    with open(path, encoding="utf-8") as fh:
        return parse_ruleset(fh.read(), str(path))


def save_ruleset(rs: RuleSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_ruleset(rs))
