import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from multlab.bezout import classify, intersection_multiplicity
from multlab.errors import CommonComponent, InputError, NotAtOrigin
from multlab.exactla import QQ
from multlab.localmodel import RingSpec

PLANE_QQ = RingSpec.poly_local("x", "y", field=QQ)


@pytest.mark.parametrize("f, g, mu", [
    ("x", "y", 1),
    ("y - x^2", "y", 2),
    ("y^2 - x^3", "y", 3),
    ("y^2 - x^3", "y^2 - x^5", 6),
    ("y^2 - x^3", "y^3 - x^2", 4),
    ("(x + y)*(x - y)", "x*y + x^3", 4),
])
def test_intersection_numbers(f, g, mu):
    assert intersection_multiplicity(f, g) == mu
    assert intersection_multiplicity(g, f) == mu
    assert intersection_multiplicity(f, g, PLANE_QQ) == mu


@pytest.mark.parametrize("f, g, c, d, t, mu, equal", [
    ("x", "y", 1, 1, 0, 1, True),
    ("y - x^2", "y", 1, 1, 1, 2, True),
    ("y^2 - x^3", "y", 2, 1, 1, 3, True),
    ("y^2 - x^3", "y^2 - x^5", 2, 2, 2, 6, True),
])
def test_classification(f, g, c, d, t, mu, equal):
    r = classify(f, g)
    assert (r.c, r.d, r.t, r.mu) == (c, d, t, mu)
    assert r.transversal == (t == 0)
    assert r.equality is equal
    assert r.mu >= r.bound


def test_strict_inequality_exists():
    # tangent y counted once, but the branches osculate: mu = 3 > cd + t = 2
    r = classify("y - x^3", "y")
    assert (r.c, r.d, r.t, r.mu) == (1, 1, 1, 3)
    assert not r.equality


def test_errors():
    with pytest.raises(NotAtOrigin):
        intersection_multiplicity("x + 1", "y")
    with pytest.raises(CommonComponent):
        intersection_multiplicity("x*y", "x*(y - x^2)")
    with pytest.raises(CommonComponent):
        intersection_multiplicity("0", "y")
    with pytest.raises(InputError):
        intersection_multiplicity("x", "y", RingSpec.poly_local("x", "y", "z"))


def test_unit_common_factor_is_harmless():
    # (1 + x) does not pass through the origin, so the local number is unaffected
    assert intersection_multiplicity("(1 + x)*x", "(1 + x)*y") == 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_random_pairs_against_oracle(seed):
    rng = random.Random(seed)
    f, g = oracles.random_plane_sop(rng, max_degree=5)
    r = classify(oracles.poly_str(f), oracles.poly_str(g))
    assert r.mu == oracles.local_length([f, g])
    assert (r.c, r.d) == (oracles.order(f), oracles.order(g))
    assert r.t == oracles.binary_gcd_degree(oracles.lowest_form(f), r.c, oracles.lowest_form(g), r.d)
    assert r.mu >= r.bound
