"""
Labeled forests and pattern avoidance
=====================================

A forest on [n] is stored as a parent map. A pattern occurs when some
ancestor chain reads, top to bottom, in the same relative order.
"""

from forestpat.core import LabeledForest, avoids, contains, count_avoiding, iterate_forests

# 3 is a child of 1, and 2 a child of 3: the chain 1 > 3 > 2 reads 132
F = LabeledForest({1: None, 3: 1, 2: 3, 4: None})
print(F.to_json())
print("contains 132:", contains(F, "132"), " avoids 123:", avoids(F, ["123"]))

# there are (n+1)^(n-1) forests on [n]
for n in range(1, 6):
    print(n, sum(1 for _ in iterate_forests(range(1, n + 1))), (n + 1) ** (n - 1))

# avoiding 21 means every label grows along its root path, n! ways
print([count_avoiding(n, "21") for n in range(7)])

# a few small classes side by side
for spec in ("123", "132", "213", "213,231"):
    print(f"{spec:>8}", [count_avoiding(n, spec) for n in range(7)])
