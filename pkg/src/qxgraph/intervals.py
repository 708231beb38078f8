"""Allen's interval algebra.

The 13 base relations are indexed in the fixed order
``p m o d s f eq pi mi oi di si fi``; that index is also the byte used by the
binary formats, so the order must never change.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "SYMBOLS",
    "NAMES",
    "Interval",
    "AllenRelation",
    "AllenRelationSet",
    "compare",
    "classify_endpoints",
    "holds_endpoints",
    "classify_intervals",
    "holds",
    "converse",
    "compose",
    "compose_masks",
    "converse_mask",
    "COMPOSITION_MASKS",
    "FULL_MASK",
    "bits",
]

SYMBOLS = ("p", "m", "o", "d", "s", "f", "eq", "pi", "mi", "oi", "di", "si", "fi")
NAMES = (
    "precedes", "meets", "overlaps", "during", "starts", "finishes", "equals",
    "preceded-by", "met-by", "overlapped-by", "contains", "started-by", "finished-by",
)
FULL_MASK = (1 << 13) - 1


class AllenRelation(enum.IntEnum):
    P = 0
    M = 1
    O = 2  # noqa: E741
    D = 3
    S = 4
    F = 5
    EQ = 6
    PI = 7
    MI = 8
    OI = 9
    DI = 10
    SI = 11
    FI = 12

    @property
    def symbol(self) -> str:
        return SYMBOLS[self]

    @property
    def long_name(self) -> str:
        return NAMES[self]

    @classmethod
    def from_symbol(cls, symbol: str) -> "AllenRelation":
        try:
            return cls(SYMBOLS.index(symbol.strip().lower()))
        except ValueError:
            raise ValueError(f"unknown Allen relation symbol {symbol!r}") from None

    def converse(self) -> "AllenRelation":
        return AllenRelation(_CONVERSE[self])

    def __str__(self) -> str:
        return self.symbol

    def __repr__(self) -> str:
        return f"AllenRelation.{self.name}"


# p..f (0-5) pair with pi..fi (7-12); eq is its own converse.
_CONVERSE = tuple(i + 7 if i < 6 else (i - 7 if i > 6 else 6) for i in range(13))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    def __iter__(self):
        yield self.lo
        yield self.hi


def compare(x: float, y: float, eps: float = 0.0) -> int:
    """Three-way comparison where values within ``eps`` count as equal.

    Snapping is not transitive. Classification stays converse-coherent only
    while ``eps`` is smaller than the length of the intervals involved.
    """
    if abs(x - y) <= eps:
        return 0
    return -1 if x < y else 1


# (cmp(a.lo, b.lo), cmp(a.hi, b.hi)) -> relation, for intervals that properly
# intersect (a.hi > b.lo and a.lo < b.hi).
_INNER = {
    (-1, -1): AllenRelation.O,
    (-1, 0): AllenRelation.FI,
    (-1, 1): AllenRelation.DI,
    (0, -1): AllenRelation.S,
    (0, 0): AllenRelation.EQ,
    (0, 1): AllenRelation.SI,
    (1, -1): AllenRelation.D,
    (1, 0): AllenRelation.F,
    (1, 1): AllenRelation.OI,
}


def classify_endpoints(alo: float, ahi: float, blo: float, bhi: float,
                       eps: float = 0.0) -> AllenRelation:
    c = compare(ahi, blo, eps)
    if c < 0:
        return AllenRelation.P
    if c == 0:
        return AllenRelation.M
    c = compare(alo, bhi, eps)
    if c > 0:
        return AllenRelation.PI
    if c == 0:
        return AllenRelation.MI
    return _INNER[compare(alo, blo, eps), compare(ahi, bhi, eps)]


def holds_endpoints(alo: float, ahi: float, r: int, blo: float, bhi: float,
                    eps: float = 0.0) -> bool:
    """Test a single relation against raw endpoints.

    This is the query predicate used by the acquisition oracles. Each relation
    is checked through its own definition rather than by classifying first;
    the guards make the 13 predicates mutually exclusive even when ``eps``
    snaps several endpoints together.
    """
    c_hl = compare(ahi, blo, eps)
    if r == 0:
        return c_hl < 0
    if r == 1:
        return c_hl == 0
    if c_hl <= 0:
        return False
    c_lh = compare(alo, bhi, eps)
    if r == 7:
        return c_lh > 0
    if r == 8:
        return c_lh == 0
    if c_lh >= 0:
        return False
    return _INNER[compare(alo, blo, eps), compare(ahi, bhi, eps)] == r


def classify_intervals(a: Interval, b: Interval, eps: float = 0.0) -> AllenRelation:
    """Return the unique Allen relation r with ``a r b``."""
    return classify_endpoints(a.lo, a.hi, b.lo, b.hi, eps)


def holds(a: Interval, r: AllenRelation, b: Interval, eps: float = 0.0) -> bool:
    return holds_endpoints(a.lo, a.hi, int(r), b.lo, b.hi, eps)


def converse(r: AllenRelation) -> AllenRelation:
    return AllenRelation(_CONVERSE[r])


def _mask(symbols: str) -> int:
    m = 0
    for s in symbols.split():
        m |= 1 << SYMBOLS.index(s)
    return m


# Derived by enumerating all interval triples with integer endpoints in 0..8;
# tests/test_intervals.py re-derives it and checks every entry.
_COMPOSITION = (
    ("p", "p", "p", "p m o d s", "p", "p m o d s", "p", "p m o d s f eq pi mi oi di si fi", "p m o d s", "p m o d s", "p", "p", "p"),  # p
    ("p", "p", "p", "o d s", "m", "o d s", "m", "pi mi oi di si", "f eq fi", "o d s", "p", "m", "p"),  # m
    ("p", "p", "p m o", "o d s", "o", "o d s", "o", "pi mi oi di si", "oi di si", "o d s f eq oi di si fi", "p m o di fi", "o di fi", "p m o"),  # o
    ("p", "p", "p m o d s", "d", "d", "d", "d", "pi", "pi", "d f pi mi oi", "p m o d s f eq pi mi oi di si fi", "d f pi mi oi", "p m o d s"),  # d
    ("p", "p", "p m o", "d", "s", "d", "s", "pi", "mi", "d f oi", "p m o di fi", "s eq si", "p m o"),  # s
    ("p", "m", "o d s", "d", "d", "f", "f", "pi", "pi", "pi mi oi", "pi mi oi di si", "pi mi oi", "f eq fi"),  # f
    ("p", "m", "o", "d", "s", "f", "eq", "pi", "mi", "oi", "di", "si", "fi"),  # eq
    ("p m o d s f eq pi mi oi di si fi", "d f pi mi oi", "d f pi mi oi", "d f pi mi oi", "d f pi mi oi", "pi", "pi", "pi", "pi", "pi", "pi", "pi", "pi"),  # pi
    ("p m o di fi", "s eq si", "d f oi", "d f oi", "d f oi", "mi", "mi", "pi", "pi", "pi", "pi", "pi", "mi"),  # mi
    ("p m o di fi", "o di fi", "o d s f eq oi di si fi", "d f oi", "d f oi", "oi", "oi", "pi", "pi", "pi mi oi", "pi mi oi di si", "pi mi oi", "oi di si"),  # oi
    ("p m o di fi", "o di fi", "o di fi", "o d s f eq oi di si fi", "o di fi", "oi di si", "di", "pi mi oi di si", "oi di si", "oi di si", "di", "di", "di"),  # di
    ("p m o di fi", "o di fi", "o di fi", "d f oi", "s eq si", "oi", "si", "pi", "mi", "oi", "di", "si", "di"),  # si
    ("p", "m", "o", "o d s", "o", "f eq fi", "fi", "pi mi oi di si", "oi di si", "oi di si", "di", "di", "fi"),  # fi
)

COMPOSITION_MASKS: tuple[tuple[int, ...], ...] = tuple(
    tuple(_mask(cell) for cell in row) for row in _COMPOSITION
)

_BITS = tuple(tuple(i for i in range(13) if m >> i & 1) for m in range(1 << 13))


def _build_set_rows() -> tuple[tuple[int, ...], ...]:
    # rows[b][D] = union of compose(b, d) over d in D, for every 13-bit mask D
    rows = []
    for b in range(13):
        row = [0] * (1 << 13)
        for d in range(1, 1 << 13):
            low = d & -d
            row[d] = row[d ^ low] | COMPOSITION_MASKS[b][low.bit_length() - 1]
        rows.append(tuple(row))
    return tuple(rows)


_SET_ROWS = _build_set_rows()
_CONVERSE_MASKS = tuple(
    sum(1 << _CONVERSE[i] for i in _BITS[m]) for m in range(1 << 13)
)


def compose_masks(m1: int, m2: int) -> int:
    """Compose two relation sets given as 13-bit masks."""
    out = 0
    for b in _BITS[m1]:
        out |= _SET_ROWS[b][m2]
    return out


def converse_mask(m: int) -> int:
    return _CONVERSE_MASKS[m]


def bits(m: int) -> tuple[int, ...]:
    return _BITS[m]


class AllenRelationSet:
    """Immutable set of Allen relations backed by a 13-bit mask."""

    __slots__ = ("mask",)

    def __init__(self, members: Iterable[AllenRelation | str | int] = ()):
        m = 0
        for r in members:
            if isinstance(r, str):
                r = AllenRelation.from_symbol(r)
            m |= 1 << int(AllenRelation(r))
        self.mask = m

    @classmethod
    def from_mask(cls, mask: int) -> "AllenRelationSet":
        if not 0 <= mask <= FULL_MASK:
            raise ValueError(f"mask out of range: {mask}")
        s = cls.__new__(cls)
        s.mask = mask
        return s

    @classmethod
    def full(cls) -> "AllenRelationSet":
        return cls.from_mask(FULL_MASK)

    @classmethod
    def empty(cls) -> "AllenRelationSet":
        return cls.from_mask(0)

    def __contains__(self, r) -> bool:
        if isinstance(r, str):
            r = AllenRelation.from_symbol(r)
        return bool(self.mask >> int(r) & 1)

    def __iter__(self) -> Iterator[AllenRelation]:
        return (AllenRelation(i) for i in _BITS[self.mask])

    def __len__(self) -> int:
        return len(_BITS[self.mask])

    def __and__(self, other: "AllenRelationSet") -> "AllenRelationSet":
        return AllenRelationSet.from_mask(self.mask & other.mask)

    def __or__(self, other: "AllenRelationSet") -> "AllenRelationSet":
        return AllenRelationSet.from_mask(self.mask | other.mask)

    def __sub__(self, other: "AllenRelationSet") -> "AllenRelationSet":
        return AllenRelationSet.from_mask(self.mask & ~other.mask)

    def __invert__(self) -> "AllenRelationSet":
        return AllenRelationSet.from_mask(FULL_MASK & ~self.mask)

    def __eq__(self, other) -> bool:
        if isinstance(other, AllenRelationSet):
            return self.mask == other.mask
        if isinstance(other, (set, frozenset)):
            return self == AllenRelationSet(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.mask)

    def converse(self) -> "AllenRelationSet":
        return AllenRelationSet.from_mask(_CONVERSE_MASKS[self.mask])

    def __repr__(self) -> str:
        return "{" + ", ".join(SYMBOLS[i] for i in _BITS[self.mask]) + "}"


def compose(r1: AllenRelation | AllenRelationSet, r2: AllenRelation | AllenRelationSet) -> AllenRelationSet:
    """Composition: relations possible between a and c given a r1 b and b r2 c.

    Accepts base relations or relation sets on either side.
    """
    m1 = r1.mask if isinstance(r1, AllenRelationSet) else 1 << int(r1)
    m2 = r2.mask if isinstance(r2, AllenRelationSet) else 1 << int(r2)
    return AllenRelationSet.from_mask(compose_masks(m1, m2))
