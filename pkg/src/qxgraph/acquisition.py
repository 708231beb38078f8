"""Qualitative constraint acquisition with path-consistency pruning.

:func:`geqca` learns a complete constraint graph by asking an oracle yes/no
questions ``ask(Xi, r, Xj)``: every "no" removes ``r`` from the edge label and
then path consistency propagates the removal to the rest of the graph.

:func:`acquire_pair` is the two-object case used for every pair of every frame
by the QXG builder. Path consistency needs three nodes, so nothing is
propagated there; instead the query loop is decomposed per axis and stops at
the first "yes", which bounds a pair at 26 queries instead of 169.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import intervals as ia
from . import rectangles as ra
from .errors import Inconsistent
from .intervals import AllenRelation, AllenRelationSet, Interval
from .rectangles import BBox, RARelation, RARelationSet

__all__ = [
    "Algebra",
    "ALLEN",
    "RECTANGLE",
    "QualitativeGraph",
    "BoxOracle",
    "IntervalOracle",
    "path_consistency",
    "geqca",
    "acquire_pair",
    "acquire_pair_flat",
    "bruteforce_pair",
]


@dataclass(frozen=True)
class Algebra:
    """Relation language a graph is parameterized by (Allen or RA)."""

    name: str
    size: int
    full: int
    compose: Callable[[int, int], int]
    converse: Callable[[int], int]
    relation: Callable[[int], object]
    make_set: Callable[[int], object]

    def compose_full(self, m1: int, m2: int) -> int:
        # every base relation composed with the universal relation gives the
        # universal relation, in both algebras
        if (m1 == self.full and m2) or (m2 == self.full and m1):
            return self.full
        return self.compose(m1, m2)


ALLEN = Algebra("allen", 13, ia.FULL_MASK, ia.compose_masks, ia.converse_mask,
                AllenRelation, AllenRelationSet.from_mask)
RECTANGLE = Algebra("rectangle", 169, ra.RA_FULL_MASK, ra.compose_masks, ra.converse_mask,
                    RARelation.from_flat, RARelationSet.from_mask)


class QualitativeGraph:
    """Complete graph over ``variables`` with relation-set edge labels.

    Labels are stored only for index pairs ``i < j`` (variable list order);
    the reverse direction is answered through the converse.
    """

    def __init__(self, variables: Sequence[Hashable], algebra: Algebra = RECTANGLE):
        self.variables = list(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable")
        self.algebra = algebra
        self.index = {v: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        self.labels: dict[tuple[int, int], int] = {
            (i, j): algebra.full for i in range(n) for j in range(i + 1, n)
        }
        self.consistent = True
        self.queries = 0

    def get(self, i: int, j: int) -> int:
        if i < j:
            return self.labels[i, j]
        return self.algebra.converse(self.labels[j, i])

    def put(self, i: int, j: int, mask: int) -> None:
        if i < j:
            self.labels[i, j] = mask
        else:
            self.labels[j, i] = self.algebra.converse(mask)

    def label(self, xi, xj):
        """Edge label between two variables as a relation-set object."""
        return self.algebra.make_set(self.get(self.index[xi], self.index[xj]))

    def constrain(self, xi, xj, relations) -> None:
        """Intersect the label of (xi, xj) with ``relations``."""
        i, j = self.index[xi], self.index[xj]
        mask = relations if isinstance(relations, int) else relations.mask
        self.put(i, j, self.get(i, j) & mask)

    def copy(self) -> "QualitativeGraph":
        g = QualitativeGraph.__new__(QualitativeGraph)
        g.variables = list(self.variables)
        g.algebra = self.algebra
        g.index = dict(self.index)
        g.labels = dict(self.labels)
        g.consistent = self.consistent
        g.queries = self.queries
        return g

    def __len__(self) -> int:
        return len(self.variables)


def path_consistency(g: QualitativeGraph, changed: Iterable[tuple[int, int]] | None = None) -> QualitativeGraph:
    """Enforce path consistency in place (queue-based PC-2).

    ``changed`` seeds the queue with the index pairs that were modified since
    the graph was last path consistent; by default every edge is queued.
    Raises :class:`Inconsistent` when a label becomes empty.
    """
    n = len(g.variables)
    for (i, j), m in g.labels.items():
        if not m:
            g.consistent = False
            raise Inconsistent(f"empty label on ({g.variables[i]!r}, {g.variables[j]!r})", (i, j))
    if n < 3:
        return g
    compose = g.algebra.compose_full
    if changed is None:
        queue = deque(g.labels)
    else:
        queue = deque((min(p), max(p)) for p in changed)
    queued = set(queue)
    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        e_ij = g.labels[i, j]
        e_ji = g.algebra.converse(e_ij)
        for k in range(n):
            if k == i or k == j:
                continue
            # E_ik must be supported through j, E_jk through i
            for a, b, e_ab in ((i, j, e_ij), (j, i, e_ji)):
                old = g.get(a, k)
                new = old & compose(e_ab, g.get(b, k))
                if new != old:
                    if not new:
                        g.put(a, k, 0)
                        g.consistent = False
                        raise Inconsistent(
                            f"empty label on ({g.variables[a]!r}, {g.variables[k]!r})", (a, k))
                    g.put(a, k, new)
                    edge = (a, k) if a < k else (k, a)
                    if edge not in queued:
                        queued.add(edge)
                        queue.append(edge)
            e_ij = g.labels[i, j]
            e_ji = g.algebra.converse(e_ij)
    return g


class BoxOracle:
    """Answers RA queries from concrete boxes; counts every query."""

    def __init__(self, boxes: Mapping[Hashable, BBox], eps: float = 0.0):
        self.boxes = dict(boxes)
        self.eps = eps
        self.queries = 0

    def ask(self, xi, r: RARelation, xj) -> bool:
        self.queries += 1
        return ra.holds(self.boxes[xi], r, self.boxes[xj], self.eps)


class IntervalOracle:
    """Answers Allen queries from concrete intervals; counts every query."""

    def __init__(self, intervals: Mapping[Hashable, Interval], eps: float = 0.0):
        self.intervals = dict(intervals)
        self.eps = eps
        self.queries = 0

    def ask(self, xi, r: AllenRelation, xj) -> bool:
        self.queries += 1
        return ia.holds(self.intervals[xi], r, self.intervals[xj], self.eps)


def geqca(variables: Sequence[Hashable], oracle, algebra: Algebra = RECTANGLE,
          use_pc: bool = True) -> QualitativeGraph:
    """Acquire the constraint graph of ``variables`` from ``oracle``.

    Edges are visited in ``i < j`` order and candidate relations in canonical
    index order. A candidate already pruned by path consistency is never
    asked. The number of questions asked is stored on ``graph.queries``.
    """
    if len(variables) < 2:
        raise ValueError("geqca needs at least two variables")
    g = QualitativeGraph(variables, algebra)
    rel = algebra.relation
    n = len(g.variables)
    for i in range(n):
        for j in range(i + 1, n):
            xi, xj = g.variables[i], g.variables[j]
            for r in range(algebra.size):
                if not g.labels[i, j] >> r & 1:
                    continue
                g.queries += 1
                if not oracle.ask(xi, rel(r), xj):
                    g.labels[i, j] &= ~(1 << r)
                    if not g.labels[i, j]:
                        g.consistent = False
                        raise Inconsistent(f"no relation left between {xi!r} and {xj!r}", (i, j))
                    if use_pc:
                        path_consistency(g, [(i, j)])
    return g


def acquire_pair(b1: BBox, b2: BBox, eps: float = 0.0) -> tuple[RARelation, int]:
    """Acquire the RA relation of two boxes axis by axis.

    Returns ``(relation, query_count)``; each axis asks Allen relations in
    canonical order until the first "yes", so the count is at most 26.
    """
    queries = 0
    found = []
    for alo, ahi, blo, bhi in ((b1.x, b1.x + b1.w, b2.x, b2.x + b2.w),
                               (b1.y, b1.y + b1.h, b2.y, b2.y + b2.h)):
        for r in range(13):
            queries += 1
            if ia.holds_endpoints(alo, ahi, r, blo, bhi, eps):
                found.append(r)
                break
        else:  # pragma: no cover - the 13 predicates are exhaustive
            raise Inconsistent("no Allen relation holds on an axis")
    return RARelation.from_flat(13 * found[0] + found[1]), queries


def acquire_pair_flat(b1: BBox, b2: BBox, eps: float = 0.0) -> tuple[RARelation, int]:
    """Two-variable GEQCA over the flat 169-relation language."""
    oracle = BoxOracle({0: b1, 1: b2}, eps)
    g = geqca([0, 1], oracle, RECTANGLE, use_pc=False)
    (rel,) = g.label(0, 1)
    return rel, g.queries


def bruteforce_pair(b1: BBox, b2: BBox, eps: float = 0.0) -> tuple[RARelation, int]:
    """Check all 169 RA relations; returns the one that holds and the check count."""
    found = None
    for idx in range(169):
        r = RARelation.from_flat(idx)
        if ra.holds(b1, r, b2, eps):
            found = r
    return found, 169
