"""
Counting by recurrence
======================

Brute force tops out around n = 8. The recurrences give exact values
far beyond that, and agree with enumeration wherever both run.
"""

from forestpat.core import count_avoiding
from forestpat.recurrences import (
    REGISTRY,
    bell_transform,
    count_by_recurrence,
    descending_count,
    forest_from_tree,
    higher_order_bell_sequence,
)

# every registered pair of 3-patterns, checked against enumeration at n = 6
for S in sorted(REGISTRY, key=sorted):
    spec = ",".join(sorted(S))
    print(f"{spec:>8}", count_by_recurrence(spec, 6), count_avoiding(6, spec))

# forests are sets of trees, so tree counts determine forest counts
print("forests from Cayley trees:", [forest_from_tree(lambda i: i ** (i - 1), n) for n in range(7)])

# decreasing chains of bounded length
print("avoid 321:", [descending_count(3, n) for n in range(10)])
print("avoid 4321 at n=30:", descending_count(4, 30))

# {12, 321} avoiders are set partitions; one Bell transform per extra level
print("order 1:", higher_order_bell_sequence(1, 10))
print("order 2:", higher_order_bell_sequence(2, 10))
print(bell_transform([1] * 6, 5).row_sums())
