"""Benchmark harness: per-frame timing series, scaling fits and storage sweeps."""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import curve_fit

from .graph import FrameResult, build
from .scene import Scene
from .sceneio import SynthParams, scene_to_text, synth_scene
from .serialize import SizeReport, encode_qxg

__all__ = [
    "CSV_HEADER",
    "METHOD_TAGS",
    "BenchRow",
    "run_bench",
    "median_rows",
    "write_rows",
    "fit_power_law",
    "fit_offset_power",
    "ScalingPoint",
    "scaling_sweep",
    "storage_sweep",
    "REFERENCE_STORAGE_EXPONENT",
]

CSV_HEADER = ["scene_id", "frame", "objects", "method", "wall_ms", "query_count"]
METHOD_TAGS = {"acquisition": "acq", "bruteforce": "bf"}
# exponent of the memory-vs-objects trend reported for the LiDAR graphs
REFERENCE_STORAGE_EXPONENT = 2.008018


@dataclass(frozen=True)
class BenchRow:
    scene_id: str
    frame_index: int
    object_count: int
    method: str
    wall_ms: float
    query_count: int
    repeat: int = 0

    def csv_row(self) -> list:
        return [self.scene_id, self.frame_index, self.object_count, self.method,
                f"{self.wall_ms:.4f}", self.query_count]


def _rows(scene_id: str, tag: str, results: Iterable[FrameResult], repeat: int) -> list[BenchRow]:
    return [BenchRow(scene_id, r.frame_index, r.objects, tag, r.wall_ns / 1e6, r.queries, repeat)
            for r in results]


def run_bench(scene: Scene, repeat: int = 1, methods: Sequence[str] = ("acquisition", "bruteforce"),
              eps: float = 0.0, threads: int = 1) -> list[BenchRow]:
    """Build ``scene`` ``repeat`` times with each method and time every frame.

    Rows are ordered by frame, then method, then repeat.
    """
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    rows: list[BenchRow] = []
    for rep in range(repeat):
        for method in methods:
            results: list[FrameResult] = []
            build(scene, method, eps, threads, results=results)
            rows += _rows(scene.scene_id, METHOD_TAGS[method], results, rep)
    order = {t: i for i, t in enumerate(METHOD_TAGS[m] for m in methods)}
    rows.sort(key=lambda r: (r.frame_index, order[r.method], r.repeat))
    return rows


def median_rows(rows: Sequence[BenchRow]) -> list[BenchRow]:
    """Collapse repeats to one row per (frame, method) holding the median wall time."""
    groups: dict[tuple, list[BenchRow]] = {}
    for r in rows:
        groups.setdefault((r.scene_id, r.frame_index, r.method), []).append(r)
    out = []
    for (sid, k, method), rs in groups.items():
        out.append(BenchRow(sid, k, rs[0].object_count, method,
                            statistics.median(r.wall_ms for r in rs), rs[0].query_count))
    return out


def write_rows(rows: Iterable[BenchRow], stream: io.TextIOBase) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_row())


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit of log y = log c + b log x; returns (c, b)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    b, logc = np.polyfit(lx, ly, 1)
    return float(np.exp(logc)), float(b)


def fit_offset_power(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Fit y = a + x**b by nonlinear least squares; returns (a, b)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _, b0 = fit_power_law(x, np.maximum(y, 1e-300))
    (a, b), _ = curve_fit(lambda t, a, b: a + t ** b, x, y, p0=(0.0, b0), maxfev=10000)
    return float(a), float(b)


@dataclass(frozen=True)
class ScalingPoint:
    objects: int
    acq_ms: float
    bf_ms: float
    acq_queries: int
    bf_queries: int


def scaling_sweep(ms: Sequence[int] = (25, 50, 100, 200, 285), frames: int = 5, repeat: int = 3,
                  seed: int = 0, methods: Sequence[str] = ("acquisition", "bruteforce")) -> list[ScalingPoint]:
    """Median per-frame time at several object counts (every object in every frame)."""
    params = SynthParams(birth_rate=0.0, death_rate=0.0)
    out = []
    for m in ms:
        scene = synth_scene(seed, m, frames, params)
        med = {}
        queries = {}
        for method in methods:
            times = []
            for _ in range(repeat):
                results: list[FrameResult] = []
                build(scene, method, results=results)
                times += [r.wall_ns / 1e6 for r in results]
                queries[method] = results[0].queries
            med[method] = statistics.median(times)
        out.append(ScalingPoint(m, med.get("acquisition", float("nan")), med.get("bruteforce", float("nan")),
                                queries.get("acquisition", 0), queries.get("bruteforce", 0)))
    return out


def storage_sweep(ms: Sequence[int] = (50, 100, 150, 230), frames: int = 40, seed: int = 42,
                  params: SynthParams | None = None) -> list[SizeReport]:
    """Scene-file bytes vs encoded-graph bytes for synthetic scenes of growing size."""
    params = params or SynthParams(birth_rate=0.0, death_rate=0.0)
    out = []
    for m in ms:
        scene = synth_scene(seed, m, frames, params)
        text = scene_to_text(scene).encode("utf-8")
        out.append(SizeReport(scene.scene_id, len(text), len(encode_qxg(build(scene)))))
    return out
