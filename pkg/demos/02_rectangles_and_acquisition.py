"""
Rectangle relations and constraint acquisition
==============================================

A 2D box relation is a pair of Allen relations, one per axis. Instead of
testing all 169 candidates we can ask yes/no questions and let path
consistency rule out what the answers already imply.
"""

from qxgraph import BBox, BoxOracle, acquire_pair, bruteforce_pair, classify_boxes, geqca

ego = BBox(10, 10, 10, 10)
truck = BBox(12, 0, 3, 5)
print("ego vs truck:", classify_boxes(ego, truck))

# per-axis questioning stops at the first "yes" on each axis
rel, asked = acquire_pair(ego, truck)
_, checked = bruteforce_pair(ego, truck)
print(f"{rel}: {asked} questions instead of {checked} checks")

# full acquisition over a handful of boxes; every answer feeds propagation
boxes = {"a": BBox(0, 0, 2, 2), "b": BBox(3, 0, 2, 2), "c": BBox(6, 0, 2, 2)}
oracle = BoxOracle(boxes)
g = geqca(list(boxes), oracle)
for x, y in (("a", "b"), ("b", "c"), ("a", "c")):
    print(x, y, g.label(x, y))
print("questions asked with propagation:", g.queries)
print("without:", geqca(list(boxes), BoxOracle(boxes), use_pc=False).queries)
