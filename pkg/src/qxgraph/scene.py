"""Pre-tracked scenes: ordered frames of (object id, class, box) detections."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .errors import InvalidScene, OrderError
from .rectangles import BBox

__all__ = ["Detection", "FrameDetections", "Scene"]


class Detection(NamedTuple):
    id: str
    class_label: str
    bbox: BBox


@dataclass(frozen=True)
class FrameDetections:
    frame_index: int
    entries: tuple[Detection, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for d in self.entries:
            if d.id in seen:
                raise InvalidScene(f"frame {self.frame_index}: duplicate object {d.id!r}",
                                   frame=self.frame_index, object_id=d.id)
            seen.add(d.id)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Detection]:
        return iter(self.entries)

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.entries]

    def bbox(self, object_id: str) -> BBox | None:
        for d in self.entries:
            if d.id == object_id:
                return d.bbox
        return None


@dataclass(frozen=True)
class Scene:
    """A scene of ``n`` frames indexed 1..n."""

    scene_id: str
    sensor: str = "unknown"
    frames: tuple[FrameDetections, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        for expected, f in enumerate(self.frames, start=1):
            if f.frame_index != expected:
                raise OrderError(f"frame index {f.frame_index} where {expected} was expected",
                                 frame=f.frame_index)

    @classmethod
    def from_frames(cls, scene_id: str, frames: Sequence[Sequence[tuple]], sensor: str = "unknown") -> "Scene":
        """Build a scene from plain ``(id, class, (x, y, w, h))`` tuples per frame."""
        out = []
        for k, dets in enumerate(frames, start=1):
            entries = []
            for oid, cls_, box in dets:
                try:
                    b = box if isinstance(box, BBox) else BBox(*box)
                except (TypeError, ValueError) as e:
                    raise InvalidScene(f"frame {k}, object {oid!r}: {e}", frame=k, object_id=oid) from None
                entries.append(Detection(str(oid), str(cls_), b))
            out.append(FrameDetections(k, tuple(entries)))
        return cls(scene_id, sensor, tuple(out))

    @property
    def n_frames(self) -> int:
        return len(self.frames)

    def object_ids(self) -> list[str]:
        """Distinct object ids in order of first appearance."""
        seen: dict[str, None] = {}
        for f in self.frames:
            for d in f.entries:
                seen.setdefault(d.id, None)
        return list(seen)

    def bbox(self, object_id: str, frame_index: int) -> BBox | None:
        """Box of an object at a frame, or None when it is not visible."""
        if not 1 <= frame_index <= len(self.frames):
            return None
        return self.frames[frame_index - 1].bbox(object_id)
