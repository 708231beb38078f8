"""QXG serialization: the compact ``QXG1`` binary format and a JSON debug export.

Binary layout (little-endian, unsigned LEB128 varints)::

    b"QXG1"
    varint frame_count
    varint n_objects, then per object in id order:
        varint len, id (UTF-8), varint len, class (UTF-8)
    varint n_edges, then per edge in (i, j) order:
        varint i, varint j            # object table indices, i < j
        varint n_entries, then per entry in frame order:
            varint frame delta        # first entry: delta from 0
            u8 relation               # flat RA index 0..168
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable

from .errors import CorruptData
from .graph import QXG, TrackedObject
from .rectangles import RARelation

__all__ = [
    "MAGIC",
    "encode_varint",
    "decode_varint",
    "encode_qxg",
    "decode_qxg",
    "write_qxg",
    "read_qxg",
    "qxg_to_json",
    "qxg_from_json",
    "SizeReport",
    "size_report",
    "write_size_reports",
]

MAGIC = b"QXG1"


def encode_varint(n: int, out: bytearray | None = None) -> bytearray:
    if n < 0:
        raise ValueError("varints are unsigned")
    if out is None:
        out = bytearray()
    while n >= 0x80:
        out.append(n & 0x7F | 0x80)
        n >>= 7
    out.append(n)
    return out


def decode_varint(data: bytes, pos: int) -> tuple[int, int]:
    """Decode the varint at ``pos``; returns (value, next position)."""
    n = shift = 0
    while True:
        if pos >= len(data):
            raise CorruptData("truncated varint")
        b = data[pos]
        pos += 1
        n |= (b & 0x7F) << shift
        if not b & 0x80:
            return n, pos
        shift += 7
        if shift > 63:
            raise CorruptData("varint too long")


def _put_str(s: str, out: bytearray) -> None:
    raw = s.encode("utf-8")
    encode_varint(len(raw), out)
    out += raw


def encode_qxg(g: QXG) -> bytes:
    out = bytearray(MAGIC)
    encode_varint(g.frame_count, out)
    ids = sorted(g.objects)
    index = {o: i for i, o in enumerate(ids)}
    encode_varint(len(ids), out)
    for o in ids:
        _put_str(o, out)
        _put_str(g.objects[o].class_label, out)
    edges = sorted((index[a], index[b], vec) for (a, b), vec in g.edges.items() if vec)
    encode_varint(len(edges), out)
    for i, j, vec in edges:
        encode_varint(i, out)
        encode_varint(j, out)
        encode_varint(len(vec), out)
        prev = 0
        for k in sorted(vec):
            d = k - prev
            if d < 0x80:
                out.append(d)
            else:
                encode_varint(d, out)
            out.append(vec[k])
            prev = k
    return bytes(out)


def decode_qxg(data: bytes) -> QXG:
    data = bytes(data)
    if data[:4] != MAGIC:
        raise CorruptData("bad magic, not a QXG1 payload")
    pos = 4
    g = QXG()
    g.frame_count, pos = decode_varint(data, pos)

    def get_str(pos):
        n, pos = decode_varint(data, pos)
        if pos + n > len(data):
            raise CorruptData("truncated string")
        try:
            return data[pos:pos + n].decode("utf-8"), pos + n
        except UnicodeDecodeError as e:
            raise CorruptData(f"bad UTF-8 in string table: {e}") from None

    n_obj, pos = decode_varint(data, pos)
    ids = []
    for _ in range(n_obj):
        oid, pos = get_str(pos)
        cls_, pos = get_str(pos)
        if oid in g.objects:
            raise CorruptData(f"duplicate object {oid!r}")
        g.objects[oid] = TrackedObject(oid, cls_)
        ids.append(oid)
    n_edges, pos = decode_varint(data, pos)
    for _ in range(n_edges):
        i, pos = decode_varint(data, pos)
        j, pos = decode_varint(data, pos)
        if not i < j < n_obj:
            raise CorruptData(f"bad edge endpoints ({i}, {j})")
        key = (ids[i], ids[j])
        if key in g.edges:
            raise CorruptData(f"duplicate edge {key}")
        count, pos = decode_varint(data, pos)
        if count == 0:
            raise CorruptData(f"empty edge {key}")
        vec = {}
        k = 0
        for _ in range(count):
            d, pos = decode_varint(data, pos)
            if d < 1:
                raise CorruptData(f"non-increasing frame in edge {key}")
            if pos >= len(data):
                raise CorruptData("truncated relation byte")
            r = data[pos]
            pos += 1
            if r >= 169:
                raise CorruptData(f"relation byte {r} out of range")
            k += d
            vec[k] = r
        if k > g.frame_count:
            raise CorruptData(f"frame {k} beyond frame count {g.frame_count}")
        g.edges[key] = vec
    if pos != len(data):
        raise CorruptData(f"{len(data) - pos} trailing bytes")
    return g


def write_qxg(g: QXG, path: str | os.PathLike) -> int:
    payload = encode_qxg(g)
    with open(path, "wb") as f:
        f.write(payload)
    return len(payload)


def read_qxg(path: str | os.PathLike) -> QXG:
    with open(path, "rb") as f:
        return decode_qxg(f.read())


def qxg_to_json(g: QXG) -> dict:
    return {
        "format": "qxg-json",
        "version": 1,
        "frame_count": g.frame_count,
        "objects": [{"id": o, "class": g.objects[o].class_label} for o in sorted(g.objects)],
        "edges": [
            {"i": a, "j": b,
             "entries": [{"frame": k, "rel": str(RARelation.from_flat(vec[k]))} for k in sorted(vec)]}
            for (a, b), vec in sorted(g.edges.items())
        ],
    }


def qxg_from_json(doc: dict) -> QXG:
    g = QXG()
    g.frame_count = int(doc["frame_count"])
    for o in doc["objects"]:
        g.add_object(o["id"], o["class"])
    for e in doc["edges"]:
        for entry in e["entries"]:
            g.update(entry["frame"], e["i"], e["j"], RARelation.parse(entry["rel"]))
    return g


@dataclass(frozen=True)
class SizeReport:
    scene: str
    scene_bytes: int
    qxg_bytes: int

    @property
    def reduction_pct(self) -> float:
        if self.scene_bytes == 0:
            return 0.0
        return 100.0 * (1.0 - self.qxg_bytes / self.scene_bytes)

    def row(self) -> list:
        return [self.scene, self.scene_bytes, self.qxg_bytes, f"{self.reduction_pct:.2f}"]


SIZE_HEADER = ["scene", "scene_bytes", "qxg_bytes", "reduction_pct"]


def size_report(scene_path: str | os.PathLike, qxg_path: str | os.PathLike) -> SizeReport:
    """Compare the on-disk size of a scene file with its encoded QXG."""
    try:
        s = os.path.getsize(scene_path)
    except OSError as e:
        raise OSError(f"cannot stat scene {scene_path}: {e.strerror}") from None
    try:
        q = os.path.getsize(qxg_path)
    except OSError as e:
        raise OSError(f"cannot stat graph {qxg_path}: {e.strerror}") from None
    return SizeReport(os.fspath(scene_path), s, q)


def write_size_reports(reports: Iterable[SizeReport], stream: io.TextIOBase) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SIZE_HEADER)
    for r in reports:
        w.writerow(r.row())
