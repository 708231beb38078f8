"""Scene files, synthetic scenes and the NuScenes annotation mapping.

Scene files are JSON Lines. The first line is a header::

    {"format":"qxg-scene","version":1,"scene_id":"...","sensor":"...","frame_count":N}

followed by one line per frame, frames numbered 1..N::

    {"frame":1,"objects":[{"id":"o1","class":"car","bbox":[x,y,w,h]}, ...]}
"""

from __future__ import annotations

import importlib.resources
import io
import json
import math
import os
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import BadParams, MissingField, OrderError, SceneSyntaxError, SchemaError
from .rectangles import BBox
from .scene import Detection, FrameDetections, Scene

__all__ = [
    "FORMAT",
    "VERSION",
    "parse_scene",
    "read_scene",
    "write_scene",
    "scene_to_text",
    "SynthParams",
    "synth_scene",
    "nuscenes_map",
    "nuscenes_scene",
    "running_example_path",
]

FORMAT = "qxg-scene"
VERSION = 1


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _parse_objects(rec: dict, k: int, lineno: int) -> tuple[Detection, ...]:
    objs = rec.get("objects")
    if not isinstance(objs, list):
        raise SchemaError(f"line {lineno}: frame {k} needs an 'objects' list", frame=k)
    out = []
    seen = set()
    for n, o in enumerate(objs):
        if not isinstance(o, dict):
            raise SchemaError(f"line {lineno}: frame {k}, object #{n} is not an object", frame=k)
        for key in ("id", "class", "bbox"):
            if key not in o:
                raise SchemaError(f"line {lineno}: frame {k}, object #{n} missing field '{key}'",
                                  frame=k, object_id=o.get("id"))
        oid, cls_, box = o["id"], o["class"], o["bbox"]
        if not isinstance(oid, str) or not oid:
            raise SchemaError(f"line {lineno}: frame {k}, object #{n}: id must be a non-empty string", frame=k)
        if not isinstance(cls_, str):
            raise SchemaError(f"line {lineno}: frame {k}, object {oid!r}: class must be a string",
                              frame=k, object_id=oid)
        if oid in seen:
            raise SchemaError(f"line {lineno}: frame {k}: duplicate object {oid!r}", frame=k, object_id=oid)
        seen.add(oid)
        if not (isinstance(box, list) and len(box) == 4 and all(_is_num(v) for v in box)):
            raise SchemaError(f"line {lineno}: frame {k}, object {oid!r}: bbox must be 4 numbers",
                              frame=k, object_id=oid)
        if not (box[2] > 0 and box[3] > 0):
            raise SchemaError(f"line {lineno}: frame {k}, object {oid!r}: degenerate bbox {box} (w, h must be > 0)",
                              frame=k, object_id=oid)
        out.append(Detection(oid, cls_, BBox(*box)))
    return tuple(out)


def parse_scene(source: str | os.PathLike | IO[str]) -> Scene:
    """Read and validate a scene from a path or an open text stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as f:
            return _parse_lines(f)
    return _parse_lines(source)


read_scene = parse_scene


def _parse_lines(lines: Iterable[str]) -> Scene:
    header = None
    frames: list[FrameDetections] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise SceneSyntaxError(f"line {lineno}: malformed JSON: {e.msg}", line=lineno) from None
        if not isinstance(rec, dict):
            raise SceneSyntaxError(f"line {lineno}: expected a JSON object", line=lineno)
        if header is None:
            header = _check_header(rec, lineno)
            continue
        k = rec.get("frame")
        if not isinstance(k, int) or isinstance(k, bool):
            raise SchemaError(f"line {lineno}: frame record needs an integer 'frame'")
        prev = frames[-1].frame_index if frames else 0
        if k <= prev:
            raise OrderError(f"line {lineno}: frame {k} does not follow frame {prev}", frame=k)
        if k != prev + 1:
            raise OrderError(f"line {lineno}: frame {k} skips frame {prev + 1}; frames must be 1..n", frame=k)
        frames.append(FrameDetections(k, _parse_objects(rec, k, lineno)))
    if header is None:
        raise SchemaError("empty scene file: missing header line")
    if header["frame_count"] != len(frames):
        raise SchemaError(f"header declares {header['frame_count']} frames, file has {len(frames)}")
    return Scene(header["scene_id"], header["sensor"], tuple(frames))


def _check_header(rec: dict, lineno: int) -> dict:
    if rec.get("format") != FORMAT:
        raise SchemaError(f"line {lineno}: header 'format' must be {FORMAT!r}")
    if rec.get("version") != VERSION:
        raise SchemaError(f"line {lineno}: unsupported version {rec.get('version')!r}")
    for key in ("scene_id", "sensor"):
        if not isinstance(rec.get(key), str):
            raise SchemaError(f"line {lineno}: header '{key}' must be a string")
    fc = rec.get("frame_count")
    if not isinstance(fc, int) or isinstance(fc, bool) or fc < 0:
        raise SchemaError(f"line {lineno}: header 'frame_count' must be a non-negative integer")
    return rec


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def scene_to_text(scene: Scene) -> str:
    buf = io.StringIO()
    write_scene(scene, buf)
    return buf.getvalue()


def write_scene(scene: Scene, dest: str | os.PathLike | IO[str]) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="\n") as f:
            return write_scene(scene, f)
    dest.write(_dumps({"format": FORMAT, "version": VERSION, "scene_id": scene.scene_id,
                       "sensor": scene.sensor, "frame_count": scene.n_frames}) + "\n")
    for fr in scene.frames:
        objs = [{"id": d.id, "class": d.class_label, "bbox": d.bbox.as_list()} for d in fr.entries]
        dest.write(_dumps({"frame": fr.frame_index, "objects": objs}) + "\n")


@dataclass(frozen=True)
class SynthParams:
    """Knobs for :func:`synth_scene`.

    ``birth_rate`` is the fraction of objects that first appear after frame
    1; ``death_rate`` is the per-frame probability that a visible object
    leaves the scene for good.
    """

    birth_rate: float = 0.2
    death_rate: float = 0.02
    step: float = 1.0
    extent: float = 100.0
    min_size: float = 1.0
    max_size: float = 5.0
    decimals: int = 2
    classes: tuple[str, ...] = ("car", "pedestrian", "truck", "bicycle", "bus")

    def validate(self) -> None:
        if not (0.0 <= self.birth_rate <= 1.0 and 0.0 <= self.death_rate <= 1.0):
            raise BadParams("birth_rate and death_rate must lie in [0, 1]")
        if self.step < 0 or self.extent <= 0:
            raise BadParams("step must be >= 0 and extent > 0")
        if not 0 < self.min_size <= self.max_size:
            raise BadParams("need 0 < min_size <= max_size")
        if self.decimals < 0 or round(self.min_size, self.decimals) <= 0:
            raise BadParams("min_size vanishes at the requested rounding")
        if not self.classes:
            raise BadParams("classes must not be empty")


def synth_scene(seed: int, m: int, n: int, params: SynthParams | None = None) -> Scene:
    """Deterministic synthetic scene of ``m`` objects over ``n`` frames.

    Objects keep their size and perform a reflected Gaussian random walk
    inside ``[0, extent]^2``. Ids are zero-padded (``o001``) so lexicographic
    and numeric order agree.
    """
    p = params or SynthParams()
    p.validate()
    if m < 2 or n < 1:
        raise BadParams(f"need m >= 2 and n >= 1, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    late = rng.random(m) < p.birth_rate
    birth = np.where(late, rng.integers(2, n + 1, m) if n >= 2 else 1, 1)
    if p.death_rate > 0:
        last = birth + rng.geometric(p.death_rate, m) - 1
    else:
        last = np.full(m, n)
    w = rng.uniform(p.min_size, p.max_size, m)
    h = rng.uniform(p.min_size, p.max_size, m)
    start = rng.uniform(0, p.extent, (2, m))
    steps = rng.normal(0.0, p.step, (n - 1, 2, m))
    pos = np.concatenate([start[None], start[None] + np.cumsum(steps, axis=0)])
    # reflect into [0, extent]
    period = 2 * p.extent
    pos = np.mod(pos, period)
    pos = np.where(pos > p.extent, period - pos, pos)
    classes = rng.choice(len(p.classes), m)

    width = len(str(m))
    ids = [f"o{i + 1:0{width}d}" for i in range(m)]
    d = p.decimals
    wr = [round(float(v), d) for v in w]
    hr = [round(float(v), d) for v in h]
    frames = []
    for k in range(1, n + 1):
        entries = []
        xs = pos[k - 1, 0].tolist()
        ys = pos[k - 1, 1].tolist()
        for i in range(m):
            if birth[i] <= k <= last[i]:
                entries.append(Detection(ids[i], p.classes[classes[i]],
                                         BBox(round(xs[i], d), round(ys[i], d), wr[i], hr[i])))
        frames.append(FrameDetections(k, tuple(entries)))
    return Scene(f"synth-{seed}-{m}-{n}", "synthetic", tuple(frames))


def nuscenes_map(record: Mapping) -> tuple[str, str, BBox]:
    """Map a NuScenes-style annotation to an axis-aligned bird's-eye-view box.

    Uses ``instance_token`` as the tracked id, ``category_name`` (or
    ``category``) as the class, the x, y of ``translation`` as the box centre
    and the first two entries of ``size`` (width, length). Rotation is ignored.
    """
    for key in ("instance_token", "translation", "size"):
        if key not in record or record[key] is None:
            raise MissingField(f"annotation is missing '{key}'")
    cls_ = record.get("category_name", record.get("category"))
    if cls_ is None:
        raise MissingField("annotation is missing 'category_name'")
    t, s = record["translation"], record["size"]
    if len(t) < 2:
        raise MissingField("translation needs x and y")
    if len(s) < 2:
        raise MissingField("size needs width and length")
    x, y = float(t[0]), float(t[1])
    w, ln = float(s[0]), float(s[1])
    return str(record["instance_token"]), str(cls_), BBox(x - w / 2, y - ln / 2, w, ln)


def nuscenes_scene(scene_id: str, frames: Sequence[Iterable[Mapping]], sensor: str = "LIDAR_TOP") -> Scene:
    """Assemble a scene from per-frame lists of annotation records."""
    out = []
    for k, records in enumerate(frames, start=1):
        out.append(FrameDetections(k, tuple(Detection(*nuscenes_map(r)) for r in records)))
    return Scene(scene_id, sensor, tuple(out))


def running_example_path():
    """Path of the bundled 4-frame example scene (objects o1..o4)."""
    return importlib.resources.files("qxgraph") / "data" / "running_example.jsonl"
