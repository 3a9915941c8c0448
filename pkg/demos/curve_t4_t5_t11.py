"""The monomial curve A = k[[t^4, t^5, t^11]] and the parameter t^4.

Everything about the multiplicity of t^4 is as nice as it can be: the length
of A/t^4 A, the multiplicity e0(t^4) and e0(m) all equal 4, t^4 has initial
degree 1, and the defect chi is 0.  Yet the initial form of t^4 is a zero
divisor on the associated graded ring: it kills the class of t^11.

Run:  python demos/curve_t4_t5_t11.py
"""
import multlab as ml

A = ml.RingSpec.monomial_curve(4, 5, 11)
m = A.maximal_ideal()

print("A = k[[t^4, t^5, t^11]] over", A.field)

table = ml.hs_table(A, m)
print("\nHilbert-Samuel function n -> l(A/m^(n+1)):", table.values)
print("first differences:", table.differences[1])
print("e0(m) =", table.e0, " (dimension", table.dim, ")")

print("\nl(A/t^4 A) =", ml.length_of_quotient(A, ["t^4"]))
print("e0(t^4)    =", ml.e0_of_parameters(A, ["t^4"]))

setup = ml.KoszulSetup.build(A, m, ["t^4"])
report = ml.chi_defect(setup)
print(f"\ninitial degree c = {setup.c[0]}; chi_K(n) for n = {report.n_values}: {report.chi_K}")
print(f"chi = e0(t^4) - c e0(m) = {report.e0_a} - {report.c_product}*{report.e0_q} = {report.chi}")

print("\nGraded pieces m^n/m^(n+1):", [ml.graded_piece(A, m, n).dim for n in range(6)])
probe = ml.greg_probe(A, m, "t^4")
print("initial form of t^4 on G:", probe.verdict, "| witness:", probe.witness)
print("the initial form of t^4 is a zero divisor on G, so t^4 is not G-regular")

verdict = ml.sop_check(setup)
print("\nsop_check:", verdict.holds, "onset", verdict.onset)
print("per degree, dimensions in the truncated model of m^n and of t^4 m^(n-1) + m^(n+1):\n ",
      {n: verdict.trace[n] for n in sorted(verdict.trace)})
print("From degree 4 on t^4 m^(n-1) fills m^n, so the initial form of t^4 generates")
print("every high graded piece even though it is not a nonzerodivisor.")
