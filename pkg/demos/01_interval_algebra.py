"""
Allen's interval relations
==========================

Classify pairs of intervals, take converses and compose relations.
"""

from qxgraph import AllenRelation, AllenRelationSet, Interval, classify_intervals
from qxgraph.intervals import compose

# two intervals on a line: a ends exactly where b starts
a = Interval(0, 3)
b = Interval(3, 5)
r = classify_intervals(a, b)
print(f"a {r.long_name} b  ({r.symbol}), so b {r.converse().long_name} a")

# a small tolerance lets nearly touching intervals count as meeting
print(classify_intervals(Interval(0, 3), Interval(3.01, 5)).symbol,
      classify_intervals(Interval(0, 3), Interval(3.01, 5), eps=0.05).symbol)

# composition: if x overlaps y and y during z, what can x be to z?
print("o ; d =", compose(AllenRelation.from_symbol("o"), AllenRelation.from_symbol("d")))

# sets compose element-wise and support the usual set operations
s = AllenRelationSet(["p", "m"])
print(s, "|", s.converse(), "| complement size", len(~s))
