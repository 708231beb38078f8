"""
Compact storage
===============

Graphs are written in a small varint-based binary format. Here we compare
its size with the scene file it was built from.
"""

import os
import tempfile

from qxgraph import build, synth_scene
from qxgraph.bench import storage_sweep
from qxgraph.serialize import decode_qxg, encode_qxg, qxg_to_json
from qxgraph.sceneio import SynthParams, write_scene

scene = synth_scene(seed=1, m=20, n=10, params=SynthParams(birth_rate=0.3, death_rate=0.05))
g = build(scene)
raw = encode_qxg(g)
assert decode_qxg(raw) == g

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "scene.jsonl")
    write_scene(scene, path)
    print(f"scene file {os.path.getsize(path)} B, graph {len(raw)} B")

# a readable view of the same data
doc = qxg_to_json(g)
print(doc["edges"][0]["i"], doc["edges"][0]["j"], doc["edges"][0]["entries"][:3])

# the graph grows with the number of object pairs, the scene with the
# number of objects, so the saving shrinks as scenes get crowded
for r in storage_sweep((50, 100, 150, 230), frames=40):
    print(f"{r.scene}: {r.scene_bytes} B scene, {r.qxg_bytes} B graph, {r.reduction_pct:.1f}% saved")
