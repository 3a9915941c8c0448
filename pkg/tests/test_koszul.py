import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from multlab.errors import DimensionMismatch, InputError, PropertyViolation
from multlab.exactla import QQ, Field, Matrix
from multlab.koszul import (ChainComplex, ChainMap, KoszulSetup, chi_defect, chi_L, euler_char,
                            homology_annihilated, homology_dims, koszul_complex, koszul_multiplication,
                            mapping_cone)
from multlab.localmodel import RingSpec

FP = Field(32003)
PLANE = RingSpec.poly_local("x", "y")
CURVE = RingSpec.monomial_curve(4, 5, 11)
NILP = [[0, 1], [0, 0]]          # x on k[x]/(x^2), basis 1, x


def mats(field, ops):
    return [Matrix.from_rows(field, op) for op in ops]


@pytest.mark.parametrize("field", [FP, QQ])
def test_koszul_examples(field):
    c = koszul_complex(mats(field, [NILP]))
    assert c.dims == (2, 2)
    assert homology_dims(c) == [1, 1]
    assert euler_char(c) == 0
    unit = koszul_complex(mats(field, [[[1]]]))
    assert homology_dims(unit) == [0, 0]
    zeros = koszul_complex(mats(field, [[[0]], [[0]]]))
    assert homology_dims(zeros) == [1, 2, 1]
    assert euler_char(zeros) == 0


def test_chain_complex_validation():
    d = Matrix.from_rows(FP, [[1]])
    with pytest.raises(PropertyViolation):
        ChainComplex(FP, (1, 1, 1), (d, d))
    with pytest.raises(DimensionMismatch):
        ChainComplex(FP, (1, 2), (d,))
    with pytest.raises(InputError):
        koszul_complex(mats(FP, [NILP, [[0, 0], [1, 0]]]))     # do not commute


def test_cone_of_identity_is_acyclic():
    c = koszul_complex(mats(FP, [NILP, [[0, 0], [0, 0]]]))
    cone = mapping_cone(ChainMap.identity(c))
    assert cone.length == c.length + 1
    assert all(h == 0 for h in homology_dims(cone))


def test_cone_of_zero_map():
    x = koszul_complex(mats(FP, [NILP]))
    y = koszul_complex(mats(FP, [[[0]]]))
    cone = mapping_cone(ChainMap.zero(x, y))
    hx, hy = homology_dims(x), homology_dims(y)
    want = [(hx[i - 1] if i >= 1 else 0) + (hy[i] if i < len(hy) else 0) for i in range(len(hx) + 1)]
    assert homology_dims(cone) == want


def test_cone_of_multiplication_is_koszul():
    x = mats(FP, [NILP])[0]
    k1 = koszul_complex([x])
    cone = mapping_cone(koszul_multiplication(k1, x))
    assert homology_dims(cone) == homology_dims(koszul_complex([x, x])) == [1, 2, 1]
    assert homology_annihilated([x])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_random_koszul_against_oracle(seed, t):
    rng = random.Random(seed)
    ops = oracles.random_commuting(rng, t)
    c = koszul_complex(mats(FP, ops))
    for i in range(2, t + 1):
        assert (c.d(i) @ c.d(i - 1)).is_zero()
    assert homology_dims(c) == oracles.koszul_homology(ops)
    assert euler_char(c) == sum((-1) ** i * n for i, n in enumerate(c.dims))
    assert homology_annihilated(mats(FP, ops))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_cone_lemma(seed):
    # the cone of multiplication by b on K(a) is K(a, b)
    rng = random.Random(seed)
    ops = mats(FP, oracles.random_commuting(rng, 3))
    base = koszul_complex(ops[:2])
    cone = mapping_cone(koszul_multiplication(base, ops[2]))
    assert homology_dims(cone) == homology_dims(koszul_complex(ops))


def test_chi_L_examples():
    s = KoszulSetup.build(PLANE, PLANE.maximal_ideal(), PLANE.elements(["x", "y"]))
    assert s.c == (1, 1)
    assert chi_L(s, 5) == 15 - 2 * 10 + 6 == 1
    assert chi_L(s, 0) == 0
    e = KoszulSetup.build(PLANE, PLANE.maximal_ideal(), PLANE.elements(["y^2 - x^3", "y"]))
    assert e.c == (2, 1)
    assert chi_L(e, 8) == 2


@pytest.mark.parametrize("ring, a, want", [
    (PLANE, ["x^2", "y^3"], dict(chi=0, e0_a=6, c=(2, 3), e0_q=1)),
    (PLANE, ["y^2 - x^3", "y"], dict(chi=1, e0_a=3, c=(2, 1), e0_q=1)),
    (CURVE, ["t^4"], dict(chi=0, e0_a=4, c=(1,), e0_q=4)),
])
def test_chi_defect_examples(ring, a, want):
    r = chi_defect(KoszulSetup.build(ring, ring.maximal_ideal(), ring.elements(a)))
    assert (r.chi, r.e0_a, r.c, r.e0_q) == (want["chi"], want["e0_a"], want["c"], want["e0_q"])
    assert r.consistent


def test_supplied_degrees_are_checked():
    with pytest.raises(InputError):
        KoszulSetup.build(PLANE, PLANE.maximal_ideal(), PLANE.elements(["x^2", "y"]), c=[1, 1])


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**32))
def test_chi_defect_random_plane(seed):
    rng = random.Random(seed)
    pair = oracles.random_plane_sop(rng, max_degree=4)
    setup = KoszulSetup.build(PLANE, PLANE.maximal_ideal(), [oracles.poly_str(f) for f in pair])
    assert list(setup.c) == [oracles.order(f) for f in pair]
    r = chi_defect(setup)
    # e0(m) = 1 and e0(a) = l(A/aA) in the Cohen-Macaulay plane
    assert r.chi == oracles.local_length(pair) - setup.c_product
    assert chi_defect(setup.permuted([1, 0])).chi == r.chi
