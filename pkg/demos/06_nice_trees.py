"""
Nice trees and twig collections
===============================

A 1423-nice tree breaks into twigs (a parent and its children two
levels down). gamma relabels twig collections, and counts for 1423
on one side match counts for 1324 on the other.
"""

from forestpat.core import LabeledForest
from forestpat.twigs import (
    TwigCollection,
    count_constructions,
    count_nice,
    decompose,
    extranice_count,
    gamma,
    tangent_series_counts,
)

T = LabeledForest({1: None, 11: 1, 12: 1, 2: 11, 5: 11, 3: 12, 4: 2, 6: 2, 7: 2, 8: 5, 9: 3, 10: 3})
W = decompose(T, "1423")
print("twigs:", W.to_json())

W = TwigCollection([(1, {3, 4}), (2, {5, 7}), (6, {8})])
print("gamma:", gamma(W).to_json())
print("forests/trees built from W for 1423:", count_constructions(W, "1423"))
print("and from gamma(W) for 1324:", count_constructions(gamma(W), "1324"))

for s in ("1234", "1423", "1324"):
    print(s, [count_nice(n, s) for n in range(1, 7)])

# extranice trees exist only for even n and follow the tangent numbers
print([extranice_count(n) for n in range(2, 17, 2)])
print(tangent_series_counts(16))
