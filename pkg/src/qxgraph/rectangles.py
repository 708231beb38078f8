"""Rectangle Algebra: relations between axis-aligned boxes as pairs of Allen relations.

A relation ``(rx, ry)`` has flat index ``13 * rx + ry`` (0..168). Relation
sets are 169-bit integers, so row ``rx`` of a set occupies bits
``13*rx .. 13*rx + 12`` and is itself an Allen mask over the y axis.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from . import intervals as ia
from .intervals import AllenRelation, Interval

__all__ = [
    "BBox",
    "RARelation",
    "RARelationSet",
    "x_interval",
    "y_interval",
    "classify_boxes",
    "holds",
    "converse",
    "compose",
    "compose_masks",
    "converse_mask",
    "RA_FULL_MASK",
]

RA_FULL_MASK = (1 << 169) - 1
_ROW = ia.FULL_MASK


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box given by its top-left corner and size."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, numbers.Real) or isinstance(v, bool) or not math.isfinite(v):
                raise ValueError(f"bbox {name} must be a finite number, got {v!r}")
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"bbox needs w > 0 and h > 0, got w={self.w}, h={self.h}")

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.w, self.h]


def x_interval(b: BBox) -> Interval:
    return Interval(b.x, b.x + b.w)


def y_interval(b: BBox) -> Interval:
    return Interval(b.y, b.y + b.h)


class RARelation(NamedTuple):
    rx: AllenRelation
    ry: AllenRelation

    @property
    def flat(self) -> int:
        return 13 * self.rx + self.ry

    @classmethod
    def from_flat(cls, index: int) -> "RARelation":
        if not 0 <= index < 169:
            raise ValueError(f"RA flat index out of range: {index}")
        return _BY_FLAT[index]

    @classmethod
    def parse(cls, text: str) -> "RARelation":
        """Parse the ``(o,p)`` text form."""
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")) or t.count(",") != 1:
            raise ValueError(f"malformed RA relation {text!r}")
        sx, sy = t[1:-1].split(",")
        return cls(AllenRelation.from_symbol(sx), AllenRelation.from_symbol(sy))

    def converse(self) -> "RARelation":
        return _BY_FLAT[_CONVERSE_FLAT[13 * self.rx + self.ry]]

    def __str__(self) -> str:
        return f"({self.rx.symbol},{self.ry.symbol})"


_BY_FLAT = tuple(RARelation(AllenRelation(i // 13), AllenRelation(i % 13)) for i in range(169))
_CONVERSE_FLAT = tuple(13 * r.rx.converse() + r.ry.converse() for r in _BY_FLAT)


def converse(r: RARelation) -> RARelation:
    return r.converse()


def classify_boxes(b1: BBox, b2: BBox, eps: float = 0.0) -> RARelation:
    rx = ia.classify_endpoints(b1.x, b1.x + b1.w, b2.x, b2.x + b2.w, eps)
    ry = ia.classify_endpoints(b1.y, b1.y + b1.h, b2.y, b2.y + b2.h, eps)
    return _BY_FLAT[13 * rx + ry]


def holds(b1: BBox, r: RARelation, b2: BBox, eps: float = 0.0) -> bool:
    return (ia.holds_endpoints(b1.x, b1.x + b1.w, int(r.rx), b2.x, b2.x + b2.w, eps)
            and ia.holds_endpoints(b1.y, b1.y + b1.h, int(r.ry), b2.y, b2.y + b2.h, eps))


@lru_cache(maxsize=1 << 16)
def compose_masks(m1: int, m2: int) -> int:
    """Compose two 169-bit RA relation sets.

    Works row by row: for x-relations a in m1 and c in m2 the y-rows compose
    as Allen sets, and the result lands in every row of compose(a, c).
    """
    rows1 = [(a, m1 >> 13 * a & _ROW) for a in range(13) if m1 >> 13 * a & _ROW]
    rows2 = [(c, m2 >> 13 * c & _ROW) for c in range(13) if m2 >> 13 * c & _ROW]
    out = [0] * 13
    for a, ya in rows1:
        xrow = ia.COMPOSITION_MASKS[a]
        for c, yc in rows2:
            y = ia.compose_masks(ya, yc)
            for x in ia.bits(xrow[c]):
                out[x] |= y
    res = 0
    for x in range(13):
        res |= out[x] << 13 * x
    return res


@lru_cache(maxsize=1 << 14)
def converse_mask(m: int) -> int:
    res = 0
    for a in range(13):
        ya = m >> 13 * a & _ROW
        if ya:
            res |= ia.converse_mask(ya) << 13 * ia.converse(AllenRelation(a))
    return res


def _flat_of(r) -> int:
    if isinstance(r, str):
        r = RARelation.parse(r)
    if isinstance(r, tuple):
        rx, ry = r
        rx = AllenRelation.from_symbol(rx) if isinstance(rx, str) else AllenRelation(rx)
        ry = AllenRelation.from_symbol(ry) if isinstance(ry, str) else AllenRelation(ry)
        return 13 * rx + ry
    idx = int(r)
    if not 0 <= idx < 169:
        raise ValueError(f"RA flat index out of range: {idx}")
    return idx


class RARelationSet:
    """Immutable set of RA relations backed by a 169-bit integer."""

    __slots__ = ("mask",)

    def __init__(self, members: Iterable[RARelation | tuple | int | str] = ()):
        m = 0
        for r in members:
            m |= 1 << _flat_of(r)
        self.mask = m

    @classmethod
    def from_mask(cls, mask: int) -> "RARelationSet":
        if not 0 <= mask <= RA_FULL_MASK:
            raise ValueError("mask out of range")
        s = cls.__new__(cls)
        s.mask = mask
        return s

    @classmethod
    def full(cls) -> "RARelationSet":
        return cls.from_mask(RA_FULL_MASK)

    @classmethod
    def product(cls, xs: ia.AllenRelationSet, ys: ia.AllenRelationSet) -> "RARelationSet":
        m = 0
        for a in ia.bits(xs.mask):
            m |= ys.mask << 13 * a
        return cls.from_mask(m)

    def __contains__(self, r) -> bool:
        return bool(self.mask >> _flat_of(r) & 1)

    def __iter__(self) -> Iterator[RARelation]:
        m = self.mask
        while m:
            low = m & -m
            yield _BY_FLAT[low.bit_length() - 1]
            m ^= low

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __and__(self, other: "RARelationSet") -> "RARelationSet":
        return RARelationSet.from_mask(self.mask & other.mask)

    def __or__(self, other: "RARelationSet") -> "RARelationSet":
        return RARelationSet.from_mask(self.mask | other.mask)

    def __sub__(self, other: "RARelationSet") -> "RARelationSet":
        return RARelationSet.from_mask(self.mask & ~other.mask)

    def __invert__(self) -> "RARelationSet":
        return RARelationSet.from_mask(RA_FULL_MASK & ~self.mask)

    def __eq__(self, other) -> bool:
        if isinstance(other, RARelationSet):
            return self.mask == other.mask
        if isinstance(other, (set, frozenset)):
            return self == RARelationSet(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.mask)

    def converse(self) -> "RARelationSet":
        return RARelationSet.from_mask(converse_mask(self.mask))

    def __repr__(self) -> str:
        return "{" + ", ".join(str(r) for r in self) + "}"


def compose(r1: RARelation | RARelationSet, r2: RARelation | RARelationSet) -> RARelationSet:
    """Componentwise lift of Allen composition to rectangles."""
    m1 = r1.mask if isinstance(r1, RARelationSet) else 1 << r1.flat
    m2 = r2.mask if isinstance(r2, RARelationSet) else 1 << r2.flat
    return RARelationSet.from_mask(compose_masks(m1, m2))
