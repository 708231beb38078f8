"""Qualitative eXplainable Graphs and the frame-by-frame builder.

A QXG has one node per tracked object and one edge per pair of objects that
were ever visible together. The edge carries a sparse vector: frame index ->
atomic RA relation between the two boxes at that frame. Pairs are stored once,
oriented by lexicographic id order; asking for the reverse orientation returns
converse relations.
"""

from __future__ import annotations

import time
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from . import _kernels
from .errors import DuplicateEntry, InvalidScene, UnknownObject, UnknownPair
from .intervals import NAMES
from .rectangles import RARelation
from .scene import FrameDetections, Scene

__all__ = [
    "TrackedObject",
    "EdgeVector",
    "QXG",
    "FrameResult",
    "QXGBuilder",
    "build",
    "density",
    "GraphStats",
    "stats",
    "describe",
    "METHODS",
]

METHODS = ("acquisition", "bruteforce")
_CONVERSE_FLAT = tuple(RARelation.from_flat(i).converse().flat for i in range(169))


@dataclass
class TrackedObject:
    id: str
    class_label: str = ""
    attributes: dict = field(default_factory=dict, compare=False)


class EdgeVector(Mapping):
    """Read-only view ``frame -> RARelation`` of one edge, in a chosen orientation."""

    __slots__ = ("_data", "_reversed")

    def __init__(self, data: dict[int, int], reversed_: bool = False):
        self._data = data
        self._reversed = reversed_

    def __getitem__(self, k: int) -> RARelation:
        r = self._data[k]
        return RARelation.from_flat(_CONVERSE_FLAT[r] if self._reversed else r)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._data))

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return "<" + ", ".join(f"{self[k]}^{k}" for k in self) + ">"


class QXG:
    """Object set plus sparse per-frame RA edge vectors."""

    def __init__(self):
        self.objects: dict[str, TrackedObject] = {}
        # (a, b) with a < b -> {frame: flat RA index}
        self.edges: dict[tuple[str, str], dict[int, int]] = {}
        self.frame_count = 0

    def add_object(self, object_id: str, class_label: str = "", **attributes) -> TrackedObject:
        obj = self.objects.get(object_id)
        if obj is None:
            obj = self.objects[object_id] = TrackedObject(object_id, class_label, dict(attributes))
        return obj

    def update(self, frame_index: int, oi: str, oj: str, r: RARelation) -> None:
        """Record relation ``r`` between ``oi`` and ``oj`` at ``frame_index``.

        Unknown objects are added as nodes. A reversed pair is stored in
        canonical orientation via the converse. Re-setting a slot to the same
        relation is a no-op; a different relation raises DuplicateEntry.
        """
        if oi == oj:
            raise ValueError("an object has no relation with itself")
        if frame_index < 1:
            raise ValueError(f"frame index must be >= 1, got {frame_index}")
        self.add_object(oi)
        self.add_object(oj)
        flat = r.flat
        if oi > oj:
            oi, oj, flat = oj, oi, _CONVERSE_FLAT[flat]
        vec = self.edges.setdefault((oi, oj), {})
        old = vec.get(frame_index)
        if old is not None and old != flat:
            raise DuplicateEntry(
                f"({oi}, {oj}) at frame {frame_index} already holds "
                f"{RARelation.from_flat(old)}, not {RARelation.from_flat(flat)}")
        vec[frame_index] = flat
        self.frame_count = max(self.frame_count, frame_index)

    def _check(self, *ids: str) -> None:
        for o in ids:
            if o not in self.objects:
                raise UnknownObject(f"unknown object {o!r}")

    def relation_at(self, oi: str, oj: str, k: int) -> RARelation | None:
        """Relation of ``oi`` to ``oj`` at frame ``k``; None if they were not both visible."""
        self._check(oi, oj)
        if oi == oj:
            return None
        if oi < oj:
            r = self.edges.get((oi, oj), {}).get(k)
            return None if r is None else RARelation.from_flat(r)
        r = self.edges.get((oj, oi), {}).get(k)
        return None if r is None else RARelation.from_flat(_CONVERSE_FLAT[r])

    def edge_vector(self, oi: str, oj: str) -> EdgeVector:
        self._check(oi, oj)
        key = (oi, oj) if oi < oj else (oj, oi)
        if key not in self.edges:
            raise UnknownPair(f"no edge between {oi!r} and {oj!r}")
        return EdgeVector(self.edges[key], reversed_=oi > oj)

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.edges)

    @property
    def n_entries(self) -> int:
        return sum(len(v) for v in self.edges.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QXG):
            return NotImplemented
        return (self.frame_count == other.frame_count
                and self.objects == other.objects
                and self.edges == other.edges)

    def __repr__(self) -> str:
        return f"QXG(objects={len(self.objects)}, edges={len(self.edges)}, frames={self.frame_count})"


class FrameResult(NamedTuple):
    frame_index: int
    objects: int
    pairs: int
    wall_ns: int
    queries: int


class QXGBuilder:
    """Incremental builder: feed frames in order, read ``.qxg`` at any time.

    ``method`` selects how each pair's relation is obtained: ``acquisition``
    asks per-axis queries until "yes" (at most 26 per pair), ``bruteforce``
    checks all 169 RA relations. ``wall_ns`` in the per-frame result covers
    only that relation loop, not array preparation or graph updates.
    """

    def __init__(self, method: str = "acquisition", eps: float = 0.0, threads: int = 1):
        if method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {method!r}")
        if threads < 1:
            raise ValueError("threads must be >= 1")
        if eps < 0:
            raise ValueError("eps must be >= 0")
        self.method = method
        self.eps = float(eps)
        self.threads = threads
        self.qxg = QXG()
        self._kernel = _kernels.acquire_rows if method == "acquisition" else _kernels.bruteforce_rows
        self._pool = ThreadPoolExecutor(threads) if threads > 1 else None
        self._last = 0
        _kernels.warmup()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _chunks(self, m: int) -> list[tuple[int, int]]:
        # split rows so every chunk has roughly the same number of pairs
        total = m * (m - 1) // 2
        bounds, acc, start = [], 0, 0
        target = total / self.threads
        for i in range(m):
            acc += m - 1 - i
            if acc >= target * (len(bounds) + 1) and len(bounds) < self.threads - 1:
                bounds.append((start, i + 1))
                start = i + 1
        bounds.append((start, m))
        return [b for b in bounds if b[0] < b[1]]

    def process_frame(self, frame: FrameDetections) -> FrameResult:
        k = frame.frame_index
        if k <= self._last:
            raise InvalidScene(f"frame {k} does not follow frame {self._last}", frame=k)
        entries = sorted(frame.entries, key=lambda d: d.id)
        ids = [d.id for d in entries]
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise InvalidScene(f"frame {k}: duplicate object {a!r}", frame=k, object_id=a)
        self._last = k
        g = self.qxg
        for d in entries:
            if d.id not in g.objects:
                g.objects[d.id] = TrackedObject(d.id, d.class_label)
        g.frame_count = max(g.frame_count, k)
        m = len(ids)
        npairs = m * (m - 1) // 2
        if npairs == 0:
            return FrameResult(k, m, 0, 0, 0)

        boxes = np.array([(d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h) for d in entries], dtype=np.float64)
        xlo = np.ascontiguousarray(boxes[:, 0])
        ylo = np.ascontiguousarray(boxes[:, 1])
        xhi = xlo + boxes[:, 2]
        yhi = ylo + boxes[:, 3]
        out = np.empty(npairs, dtype=np.int16)
        eps = self.eps

        t0 = time.perf_counter_ns()
        if self._pool is None:
            queries = self._kernel(xlo, xhi, ylo, yhi, eps, 0, m, out)
        else:
            futs = [self._pool.submit(self._kernel, xlo, xhi, ylo, yhi, eps, a, b, out)
                    for a, b in self._chunks(m)]
            queries = sum(f.result() for f in futs)
        wall = time.perf_counter_ns() - t0

        rels = out.tolist()
        edges = g.edges
        p = 0
        for i in range(m - 1):
            a = ids[i]
            for b in ids[i + 1:]:
                vec = edges.get((a, b))
                if vec is None:
                    edges[a, b] = {k: rels[p]}
                else:
                    vec[k] = rels[p]
                p += 1
        return FrameResult(k, m, npairs, wall, int(queries))


def build(scene: Scene, method: str = "acquisition", eps: float = 0.0, threads: int = 1,
          results: list | None = None) -> QXG:
    """Build the QXG of ``scene``.

    When ``results`` is a list, one :class:`FrameResult` per frame is appended.
    """
    with QXGBuilder(method, eps, threads) as builder:
        for frame in scene.frames:
            r = builder.process_frame(frame)
            if results is not None:
                results.append(r)
        builder.qxg.frame_count = max(builder.qxg.frame_count, scene.n_frames)
        return builder.qxg


def density(qxg: QXG, m: int | None = None) -> float:
    """Fraction of object pairs joined by an edge: |E| / (m(m-1)/2)."""
    if m is None:
        m = len(qxg.objects)
    if m < 2:
        return 0.0
    return len(qxg.edges) / (m * (m - 1) / 2)


@dataclass
class GraphStats:
    objects: int
    edges: int
    frames: int
    entries: int
    density: float
    serialized_bytes: int
    relations_per_frame: dict[int, int]
    lifespans: dict[str, tuple[int, int]]

    def to_dict(self) -> dict:
        return {
            "objects": self.objects,
            "edges": self.edges,
            "frames": self.frames,
            "entries": self.entries,
            "density": self.density,
            "serialized_bytes": self.serialized_bytes,
            "relations_per_frame": {str(k): v for k, v in self.relations_per_frame.items()},
            "lifespans": {k: list(v) for k, v in self.lifespans.items()},
        }

    def summary(self) -> str:
        return (f"objects={self.objects} edges={self.edges} frames={self.frames} "
                f"entries={self.entries} density={self.density:.3f} "
                f"bytes={self.serialized_bytes}")


def stats(qxg: QXG) -> GraphStats:
    """Summary counts of a graph.

    Lifespans are the first and last frames in which an object takes part in
    at least one relation; objects that never shared a frame have none.
    """
    from .serialize import encode_qxg

    per_frame: dict[int, int] = {}
    spans: dict[str, list[int]] = {}
    for (a, b), vec in qxg.edges.items():
        for k in vec:
            per_frame[k] = per_frame.get(k, 0) + 1
        lo, hi = min(vec), max(vec)
        for o in (a, b):
            s = spans.get(o)
            if s is None:
                spans[o] = [lo, hi]
            else:
                s[0] = min(s[0], lo)
                s[1] = max(s[1], hi)
    return GraphStats(
        objects=len(qxg.objects),
        edges=len(qxg.edges),
        frames=qxg.frame_count,
        entries=sum(per_frame.values()),
        density=density(qxg),
        serialized_bytes=len(encode_qxg(qxg)),
        relations_per_frame=dict(sorted(per_frame.items())),
        lifespans={o: tuple(spans[o]) for o in sorted(spans)},
    )


def _runs(vec: EdgeVector) -> Iterable[tuple[int, int, RARelation]]:
    start = prev = rel = None
    for k in vec:
        r = vec[k]
        if rel is not None and r == rel and k == prev + 1:
            prev = k
            continue
        if rel is not None:
            yield start, prev, rel
        start = prev = k
        rel = r
    if rel is not None:
        yield start, prev, rel


def describe(qxg: QXG, oi: str, oj: str) -> list[str]:
    """One line per run of consecutive frames holding the same relation.

    >>> describe(g, "o2", "o3")  # doctest: +SKIP
    ['o2 precedes o3 on x, preceded-by on y @ frames 1-1', ...]
    """
    vec = qxg.edge_vector(oi, oj)
    return [f"{oi} {NAMES[r.rx]} {oj} on x, {NAMES[r.ry]} on y @ frames {a}-{b}"
            for a, b, r in _runs(vec)]
