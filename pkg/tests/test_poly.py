import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from multlab.errors import InputError, PolynomialSyntaxError
from multlab.exactla import QQ, Field
from multlab.poly import Polynomial, binary_form_gcd, divides, initial_form_m, parse, poly_gcd

XY = ("x", "y")
FP = Field(32003)


def test_parse_examples():
    f = parse("y^2 - x^3", XY)
    assert len(f.terms) == 2
    assert sorted(sum(e) for e in f.terms) == [2, 3]
    assert parse("0", XY).terms == {}
    assert parse("(x+y)^2", XY) == parse("x^2 + 2*x*y + y^2", XY)


def test_parse_whitespace_and_signs():
    assert parse(" - x +3 ", XY) == parse("3-x", XY)
    assert parse("x^0", XY) == parse("1", XY)
    assert parse("2*(x - y)*(x + y)", XY) == parse("2*x^2 - 2*y^2", XY)


@pytest.mark.parametrize("text, pos", [
    ("2x", 1),          # juxtaposition is rejected
    ("x y", 2),
    ("z + 1", 0),       # unknown variable
    ("(x", 2),
    ("x^", 2),
    ("x - -y", 4),
    ("x ^ 99999999", 4),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse(text, XY)
    assert info.value.position == pos
    assert "position" in str(info.value)


def test_printing_is_graded_lex_and_round_trips():
    f = parse("1 + y + x + x*y - 3*y^3", XY)
    assert str(f) == "-3*y^3 + x*y + x + y + 1"
    assert parse(str(f), XY) == f
    assert str(parse("x - 1", XY, QQ)) == "x - 1"
    assert str(parse("-1", XY)) == "-1"


terms = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), st.integers(-20, 20), max_size=6)


@settings(max_examples=80, deadline=None)
@given(terms)
def test_parse_print_identity(t):
    for field in (FP, QQ):
        f = Polynomial(XY, field, t)
        assert parse(str(f), XY, field) == f


@settings(max_examples=80, deadline=None)
@given(terms, terms)
def test_arithmetic_matches_dict_oracle(a, b):
    fa, fb = Polynomial(XY, FP, a), Polynomial(XY, FP, b)
    prod = oracles.poly_mul({k: v % 32003 for k, v in a.items()}, {k: v % 32003 for k, v in b.items()})
    assert fa * fb == Polynomial(XY, FP, prod)
    assert (fa + fb) - fb == fa
    assert fa ** 2 == fa * fa


def test_initial_form_examples():
    f = initial_form_m(parse("y^2 - x^3", XY))
    assert (f.degree, f.form) == (2, parse("y^2", XY))
    g = initial_form_m(parse("x", XY))
    assert (g.degree, g.form) == (1, parse("x", XY))
    z = initial_form_m(parse("0", XY))
    assert z.is_zero


@settings(max_examples=80, deadline=None)
@given(terms.filter(lambda t: any(v % 32003 for v in t.values())),
       terms.filter(lambda t: any(v % 32003 for v in t.values())))
def test_initial_degree_is_additive(a, b):
    fa, fb = Polynomial(XY, FP, a), Polynomial(XY, FP, b)
    ia, ib = initial_form_m(fa), initial_form_m(fb)
    iab = initial_form_m(fa * fb)
    assert iab.degree == ia.degree + ib.degree
    assert iab.form == ia.form * ib.form
    # oracle: lowest total degree among the stored terms
    assert ia.degree == oracles.order({k: v % 32003 for k, v in a.items() if v % 32003})


def test_binary_gcd_examples():
    g = binary_form_gcd(parse("y^2", XY), parse("y", XY))
    assert g == parse("y", XY)
    assert binary_form_gcd(parse("x", XY), parse("y", XY)) == parse("1", XY)
    assert binary_form_gcd(parse("y^2", XY), parse("y^2", XY)) == parse("y^2", XY)
    with pytest.raises(InputError):
        binary_form_gcd(parse("0", XY), parse("0", XY))
    with pytest.raises(InputError):
        binary_form_gcd(parse("x + y^2", XY), parse("y", XY))


def _random_form(rng, degree):
    return {(degree - k, k): rng.randint(-5, 5) % 32003 for k in range(degree + 1)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_binary_gcd_against_sylvester_rank(seed):
    rng = random.Random(seed)
    c, d, s = rng.randint(1, 4), rng.randint(1, 4), rng.randint(0, 3)
    common = _random_form(rng, s)
    F = oracles.poly_mul(common, _random_form(rng, c))
    G = oracles.poly_mul(common, _random_form(rng, d))
    if not F or not G:
        return
    f, g = Polynomial(XY, FP, F), Polynomial(XY, FP, G)
    h = binary_form_gcd(f, g)
    assert h.degree() == oracles.binary_gcd_degree(F, c + s, G, d + s)
    assert divides(h, f) and divides(h, g)
    assert h.degree() <= min(f.degree(), g.degree())
    assert h.leading_coefficient() == 1


def test_poly_gcd():
    f = parse("(y^2 - x^3)*(x + 1)", XY)
    g = parse("(y^2 - x^3)*(y - 2)", XY)
    assert poly_gcd(f, g) == parse("y^2 - x^3", XY).monic()
    assert poly_gcd(parse("x", XY), parse("y", XY)).degree() == 0
