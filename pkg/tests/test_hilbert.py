import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from multlab.errors import InputError, NotSystemOfParameters, RestrictionViolated
from multlab.hilbert import (check_additivity, check_power_multiplicativity, check_quotient_formula,
                             difference_table, e0_of_parameters, hs_table, verify_multiplicity_identities)
from multlab.localmodel import ModuleSpec, RingSpec

PLANE = RingSpec.poly_local("x", "y")
CURVE = RingSpec.monomial_curve(4, 5, 11)


def _monomial_hs(n):
    """l(A / (x^2, y^3)^n) by counting monomials outside the power."""
    if n == 0:
        return 0
    gens = [(2 * a, 3 * (n - a)) for a in range(n + 1)]
    return sum(1 for i in range(3 * n) for j in range(3 * n + 1)
               if not any(i >= gi and j >= gj for gi, gj in gens))


def test_difference_table():
    t = difference_table([1, 3, 6, 10, 15])
    assert t[1] == [2, 3, 4, 5]
    assert t[2] == [1, 1, 1]


def test_plane_maximal_ideal():
    t = hs_table(PLANE, PLANE.maximal_ideal())
    assert t.values[:5] == [1, 3, 6, 10, 15]
    assert t.values == [comb(n + 2, 2) for n in range(len(t.values))]
    assert (t.dim, t.e0) == (2, 1)


def test_three_variables():
    R = RingSpec.poly_local("x", "y", "z")
    t = hs_table(R, R.maximal_ideal(), 8)
    assert t.values == [comb(n + 3, 3) for n in range(9)]
    assert (t.dim, t.e0) == (3, 1)


def test_curve():
    t = hs_table(CURVE, CURVE.maximal_ideal())
    assert t.values[:5] == [1, 4, 7, 11, 15]
    assert t.values == [oracles.curve_hilbert((4, 5, 11), n + 1) for n in range(len(t.values))]
    assert (t.dim, t.e0) == (1, 4)


def test_parameter_ideal_table():
    t = hs_table(PLANE, PLANE.elements(["x^2", "y^3"]))
    assert t.values == [_monomial_hs(n + 1) for n in range(len(t.values))]
    assert (t.dim, t.e0) == (2, 6)
    assert t.e0 == oracles.local_length([{(2, 0): 1}, {(0, 3): 1}])


def test_module_with_annihilator():
    cusp = ModuleSpec.of(PLANE, PLANE.elements(["y^2 - x^3"]))
    t = hs_table(cusp, PLANE.maximal_ideal())
    assert (t.dim, t.e0) == (1, 2)
    assert t.values[:4] == [1, 3, 5, 7]


def test_e0_examples():
    assert e0_of_parameters(PLANE, ["x", "y"]) == 1
    assert e0_of_parameters(PLANE, ["y^2 - x^3", "y"]) == 3
    assert e0_of_parameters(CURVE, ["t^4"]) == 4


def test_e0_rejects_non_parameters():
    with pytest.raises(NotSystemOfParameters):
        e0_of_parameters(PLANE, ["x"])
    with pytest.raises(NotSystemOfParameters):
        e0_of_parameters(PLANE, ["x*y", "x^2"])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_e0_of_plane_parameters_is_colength(seed):
    # k[x,y] is Cohen-Macaulay, so e0(a) = l(A/aA) for a system of parameters
    rng = random.Random(seed)
    pair = oracles.random_plane_sop(rng, max_degree=5)
    got = e0_of_parameters(PLANE, [oracles.poly_str(f) for f in pair])
    assert got == oracles.local_length(pair)


def test_power_formula_examples():
    c = check_power_multiplicativity(PLANE, ["x", "y"], [2, 3])
    assert (c.lhs, c.rhs, c.passed) == (6, 6, True)
    assert check_power_multiplicativity(PLANE, ["x", "y"], [2, 3]).lhs == oracles.local_length(
        [{(2, 0): 1}, {(0, 3): 1}])
    with pytest.raises(InputError):
        check_power_multiplicativity(PLANE, ["x", "y"], [2])


def test_additivity_example():
    c = check_additivity(PLANE, "x", "x", ["y"])
    assert (c.lhs, c.rhs) == (2, 2)
    assert c.lhs == oracles.local_length([{(2, 0): 1}, {(0, 1): 1}])


def test_quotient_formula_examples():
    c = check_quotient_formula(PLANE, ["y", "x"])
    assert (c.lhs, c.rhs) == (1, 1)
    c = check_quotient_formula(CURVE, ["t^4"])
    assert (c.lhs, c.rhs) == (4, 4)
    with pytest.raises(RestrictionViolated):
        check_quotient_formula(ModuleSpec.of(PLANE, PLANE.elements(["x*y"])), ["x", "y"])


def test_verify_all():
    rep = verify_multiplicity_identities(PLANE, ["x^2", "y"], factorization=["x", "x"], powers=[2, 3])
    assert rep.passed
    assert [c.name for c in rep.checks] == ["power", "additivity", "quotient"]
    with pytest.raises(InputError):
        verify_multiplicity_identities(PLANE, ["x^2", "y"], factorization=["x", "y"])


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32))
def test_random_power_formula(seed):
    rng = random.Random(seed)
    pair = [oracles.poly_str(f) for f in oracles.random_plane_sop(rng, max_degree=3)]
    powers = [rng.randint(1, 3), rng.randint(1, 2)]
    assert check_power_multiplicativity(PLANE, pair, powers).passed


@pytest.mark.parametrize("n1, n2", list(itertools.product(range(1, 6), repeat=2)))
def test_rectangle_multiplicities(n1, n2):
    assert e0_of_parameters(PLANE, [f"x^{n1}", f"y^{n2}"]) == n1 * n2
