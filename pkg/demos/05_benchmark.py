"""
Timing the two construction methods
===================================

Per-frame wall time and question counts for acquisition and brute force,
and a power-law fit of time against the number of objects.
"""

import io
import statistics

from qxgraph import synth_scene
from qxgraph.bench import fit_power_law, run_bench, scaling_sweep, write_rows
from qxgraph.sceneio import SynthParams

scene = synth_scene(seed=3, m=100, n=5, params=SynthParams(birth_rate=0, death_rate=0))
rows = run_bench(scene, repeat=3)

buf = io.StringIO()
write_rows(rows[:4], buf)
print(buf.getvalue())

for tag in ("acq", "bf"):
    print(tag, "median ms/frame:", round(statistics.median(r.wall_ms for r in rows if r.method == tag), 3))

pts = scaling_sweep((25, 50, 100, 200, 285), frames=3, repeat=2)
c, b = fit_power_law([p.objects for p in pts], [p.acq_ms for p in pts])
print(f"acquisition time ~ {c:.2e} * m^{b:.2f}")
