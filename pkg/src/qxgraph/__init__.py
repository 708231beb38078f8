"""Qualitative eXplainable Graphs (QXGs) for scenes of tracked 2D bounding boxes.

Relations between boxes come from the Rectangle Algebra (pairs of Allen
interval relations). Each frame's pairwise relations are acquired through
yes/no oracle queries and stored as sparse per-frame edge vectors.
"""

__version__ = "0.1.0"

from .acquisition import (ALLEN, RECTANGLE, BoxOracle, IntervalOracle, QualitativeGraph,
                          acquire_pair, acquire_pair_flat, bruteforce_pair, geqca,
                          path_consistency)
from .errors import (BadParams, CorruptData, DuplicateEntry, Inconsistent, InvalidScene,
                     MissingField, OrderError, QXGError, SceneSyntaxError, SchemaError,
                     UnknownObject, UnknownPair)
from .graph import QXG, QXGBuilder, TrackedObject, build, density, describe, stats
from .intervals import AllenRelation, AllenRelationSet, Interval, classify_intervals
from .rectangles import BBox, RARelation, RARelationSet, classify_boxes
from .scene import Detection, FrameDetections, Scene
from .sceneio import (SynthParams, nuscenes_map, nuscenes_scene, parse_scene, running_example_path,
                      synth_scene, write_scene)
from .serialize import decode_qxg, encode_qxg, qxg_from_json, qxg_to_json, read_qxg, write_qxg
