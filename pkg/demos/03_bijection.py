"""
A shape-preserving bijection
============================

For tau ending in (k-1)k, alpha swaps avoiders of tau~ (last two letters
exchanged) with avoiders of tau, keeping the unlabeled shape fixed.
"""

from collections import Counter

from forestpat.bijections import TauPair, alpha, beta, shuffle, special_vertices
from forestpat.core import LabeledForest, avoids, forest_shape_key, iterate_forests

pair = TauPair("1234")
print("tau =", pair.tau, " tau~ =", pair.tau_tilde, " truncated =", pair.tau_bar)

F = LabeledForest({1: None, 2: 1, 3: 2, 4: 3, 5: None})
print("input avoids 1243?", avoids(F, [pair.tau_tilde]))
print("special vertices:", special_vertices(F, pair))
G = alpha(F, pair)
print("alpha(F) =", G.to_json())
print("image avoids 1234?", avoids(G, [pair.tau]), " beta undoes it?", beta(G, pair) == F)

# shuffle hands a special vertex the largest label of its subtree
H = LabeledForest({1: None, 5: 1, 2: 5, 7: 2})
print("shuffle at 5:", shuffle(H, 5, "123").to_json())

# per-shape counts agree on [5]
a = Counter(forest_shape_key(X) for X in iterate_forests(range(1, 6)) if avoids(X, [pair.tau_tilde]))
b = Counter(forest_shape_key(X) for X in iterate_forests(range(1, 6)) if avoids(X, [pair.tau]))
print(len(a), "shapes, all equal:", a == b)
