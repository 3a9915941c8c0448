"""Intersection numbers at the origin against the orders of the curves.

For plane curves f, g through the origin with orders c, d and t common tangents
(counted with multiplicity) the intersection number satisfies mu >= cd + t,
with mu = cd exactly when there are no common tangents.  mu - cd is the
defect chi of the pair (f, g) with respect to m.

Run:  python demos/local_bezout.py
"""
import multlab as ml

plane = ml.RingSpec.poly_local("x", "y")
pairs = [
    ("x", "y"),
    ("y - x^2", "y"),
    ("y - x^3", "y"),
    ("y^2 - x^3", "y"),
    ("y^2 - x^3", "y^2 - x^5"),
    ("y^2 - x^3", "y^3 - x^2"),
    ("(x + y)*(x - y)", "x*y + x^3"),
]

print(f"{'f':>18} {'g':>12} {'c':>2} {'d':>2} {'t':>2} {'mu':>3} {'cd+t':>5}  chi")
for f, g in pairs:
    r = ml.classify(f, g)
    chi = ml.chi_defect(ml.KoszulSetup.build(plane, plane.maximal_ideal(), [f, g])).chi
    mark = "=" if r.equality else ">"
    print(f"{f:>18} {g:>12} {r.c:>2} {r.d:>2} {r.t:>2} {r.mu:>3} {mark}{r.bound:>4}  {chi}")

print("\nmu - cd equals chi on every row; rows with t = 0 have mu = cd.")
