"""Koszul complexes of commuting operators, built as iterated mapping cones.

On V = k[s, u]/(s^3, u^2) take the multiplications by s and u.  The Koszul
complex K(s, u; V) is the cone of multiplication by u on K(s; V); its
homology is killed by s and u, and the cone of an identity map is exact.

Run:  python demos/koszul_cones.py
"""
import multlab as ml
from multlab.koszul import koszul_multiplication, homology_annihilated

F = ml.Field(32003)
a, b = 3, 2
n = a * b


def shift(which):
    rows = [[0] * n for _ in range(n)]
    for i in range(a):
        for j in range(b):
            if which == "s" and i + 1 < a:
                rows[i * b + j][(i + 1) * b + j] = 1
            if which == "u" and j + 1 < b:
                rows[i * b + j][i * b + j + 1] = 1
    return ml.Matrix.from_rows(F, rows)


s, u = shift("s"), shift("u")
k1 = ml.koszul_complex([s])
print("K(s; V): dims", k1.dims, "homology", ml.homology_dims(k1))

cone = ml.mapping_cone(koszul_multiplication(k1, u))
k2 = ml.koszul_complex([s, u])
print("cone of u on K(s; V): dims", cone.dims, "homology", ml.homology_dims(cone))
print("K(s, u; V):           dims", k2.dims, "homology", ml.homology_dims(k2))
print("Euler characteristic", ml.euler_char(k2), "(0 because V has finite length)")
print("homology annihilated by s and u:", homology_annihilated([s, u]))

ident = ml.mapping_cone(ml.ChainMap.identity(k2))
print("cone of the identity on K(s, u; V): homology", ml.homology_dims(ident))
