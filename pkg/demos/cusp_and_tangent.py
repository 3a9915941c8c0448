"""How the defect chi measures a common tangent.

For the cusp y^2 = x^3 against the line y = 0, the initial forms Y^2 and Y share
the factor Y.  The parameters are no longer "transversal": chi becomes 1,
which is exactly how far the intersection number 3 exceeds the product of
orders 2*1.

Run:  python demos/cusp_and_tangent.py
"""
import multlab as ml

plane = ml.RingSpec.poly_local("x", "y")
m = plane.maximal_ideal()

for a in (["x^2", "y^3"], ["y^2 - x^3", "y^2 + x^3 + x*y"], ["y^2 - x^3", "y"]):
    setup = ml.KoszulSetup.build(plane, m, a)
    rep = ml.chi_defect(setup)
    sop = ml.sop_check(setup)
    print(f"a = {a}")
    print(f"  initial degrees c = {setup.c}, e0(a) = {rep.e0_a}, e0(m) = {rep.e0_q}")
    print(f"  chi_L(n) = {rep.chi_L} for n = {rep.n_values}")
    print(f"  chi = {rep.chi}; initial forms generate high degrees: {sop.holds}")
    if setup.d == 2:
        col = ml.colon_constant(setup)
        print(f"  colon constant {col.constant}: l(A/aA) - constant = {col.length_M_aM} - {col.constant}"
              f" = {col.c_product} * {col.e0_q}")
    print()

# the same defect with q = (x, y^2) instead of m
q = plane.elements(["x", "y^2"])
setup = ml.KoszulSetup.build(plane, q, ["x + y^3", "y^2"])
rep = ml.chi_defect(setup)
print(f"q = (x, y^2), a = (x + y^3, y^2): c = {setup.c}, e0(q) = {rep.e0_q}, e0(a) = {rep.e0_a}, chi = {rep.chi}")
