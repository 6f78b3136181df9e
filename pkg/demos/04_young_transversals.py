"""
Forest-Young diagrams and transversals
======================================

Columns hang over the vertices of a forest and grow (weakly) toward the
leaves. A transversal picks one cell per column and per row.
"""

from forestpat import young
from forestpat.young import I2, J2, ForestYoungDiagram, Transversal

Y = ForestYoungDiagram({1: None, 2: 1, 3: 1}, {1: 2, 2: 3, 3: 3})
Ts = list(young.enumerate_transversals(Y))
print(len(Ts), "transversals")
for T in Ts:
    print(T.to_json(), " I2:", young.has_i2(Y, T), " J2:", young.has_j2(Y, T))

# the smallest case where the I2 -> J2 step moves anything
Y2 = ForestYoungDiagram({"u": None, "w": "u"}, {"u": 2, "w": 2})
L = Transversal({"u": 1, "w": 2})
print("phi:", young.phi(Y2, L).to_json())

# equal class sizes on every diagram with 3 vertices and heights <= 3
ok = all(young.count_avoiding_transversals(D, [I2]) == young.count_avoiding_transversals(D, [J2])
         for D in young.iterate_diagrams(3, 3))
print("I2 and J2 classes equal:", ok)

# the block construction carries 123 -> 132 across a full square
src, dst = young.pair_matrices([("123", "132")])
sq = young.full_square({1: None, 2: 1, 3: 2, 4: 3})
print(young.count_avoiding_transversals(sq, src), young.count_avoiding_transversals(sq, dst))
