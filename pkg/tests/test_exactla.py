import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from multlab.errors import BackendMismatch, DimensionMismatch, InputError
from multlab.exactla import (QQ, Field, Matrix, Subspace, as_int, block_matrix, hstack, kernel_basis,
                             left_kernel, preimage_under, rref, vstack)

FP = Field(32003)
SMALL = Field(7)
BACKENDS = [FP, QQ]


def ints(m: Matrix):
    """Entries as Python ints (F_p) or Fractions (Q)."""
    if m.field.is_rational:
        return [[Fraction(int(x.p), int(x.q)) for x in row] for row in m.tolist()]
    return [[int(x) for x in row] for row in m.tolist()]


@pytest.mark.parametrize("field", BACKENDS)
def test_rank_examples(field):
    assert Matrix.identity(field, 3).rank() == 3
    assert Matrix.from_rows(field, [[1, 2], [2, 4]]).rank() == 1
    r, k = rref(Matrix.from_rows(field, [[0, 1], [1, 0]]))
    assert k == 2
    assert r == Matrix.identity(field, 2)


@pytest.mark.parametrize("field", BACKENDS)
def test_kernel_examples(field):
    assert kernel_basis(Matrix.zeros(field, 2, 2)).dim == 2
    assert kernel_basis(Matrix.identity(field, 4)).dim == 0
    k = kernel_basis(Matrix.from_rows(field, [[1, 1]]))
    assert k.dim == 1
    v = [as_int(x) for x in k.basis.row(0)]
    assert v[0] == -v[1] != 0


@pytest.mark.parametrize("field", BACKENDS)
def test_subspace_examples(field):
    e1 = Subspace.span(field, 3, [[1, 0, 0]])
    e2 = Subspace.span(field, 3, [[0, 1, 0]])
    assert (e1 + e2).dim == 2
    assert (e1 & e2).dim == 0
    swap = Matrix.from_rows(field, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    pre = preimage_under(swap, e1)
    assert pre == e2


def test_field_parsing_and_limits():
    assert Field.parse("fp:32003") == FP
    assert Field.parse("rational") is not None and Field.parse("rational").is_rational
    for bad in ("fp:32004", "fp:1", "gf7", "fp:x"):
        with pytest.raises(InputError):
            Field.parse(bad)
    with pytest.raises(InputError):
        Field((1 << 31) - 1)          # prime, but above the exact-product bound


def test_mixed_backends_rejected():
    a = Matrix.identity(FP, 2)
    b = Matrix.identity(QQ, 2)
    with pytest.raises(BackendMismatch):
        a @ b
    with pytest.raises(BackendMismatch):
        Subspace.full(FP, 2) + Subspace.full(QQ, 2)
    with pytest.raises(DimensionMismatch):
        a @ Matrix.identity(FP, 3)


def test_symmetric_residue_printing():
    assert as_int(FP(-5)) == -5
    assert as_int(FP(32002)) == -1
    assert as_int(QQ(7)) == 7
    with pytest.raises(ValueError):
        as_int(QQ(Fraction(1, 2)))


matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rref_matches_textbook_elimination(rows):
    for field, p in ((QQ, None), (FP, 32003), (SMALL, 7)):
        r, k = rref(Matrix.from_rows(field, rows))
        ref, piv = oracles.rref(rows, p)
        assert k == len(piv)
        assert ints(r)[:k] == ref


@settings(max_examples=60, deadline=None)
@given(matrices, st.integers(0, 2**32))
def test_products_match_schoolbook(rows, seed):
    rng = random.Random(seed)
    k = rng.randint(1, 6)
    other = [[rng.randint(-50, 50) for _ in range(k)] for _ in range(len(rows[0]))]
    for field, p in ((QQ, None), (FP, 32003)):
        got = ints(Matrix.from_rows(field, rows) @ Matrix.from_rows(field, other))
        assert got == oracles.matmul(rows, other, p)


def test_large_products_are_exact():
    # long inner dimension forces several float chunks
    rng = random.Random(3)
    a = [[rng.randrange(32003) for _ in range(900)] for _ in range(3)]
    b = [[rng.randrange(32003) for _ in range(2)] for _ in range(900)]
    assert ints(Matrix.from_rows(FP, a) @ Matrix.from_rows(FP, b)) == oracles.matmul(a, b, 32003)
    big = Field(67108859)               # largest prime below 2^26
    a2 = [[big.characteristic - 1 - i for i in range(700)]]
    b2 = [[big.characteristic - 2] for _ in range(700)]
    assert ints(Matrix.from_rows(big, a2) @ Matrix.from_rows(big, b2)) == oracles.matmul(a2, b2, big.characteristic)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_low_rank_matrices(seed):
    rng = random.Random(seed)
    n, m, r = rng.randint(2, 12), rng.randint(2, 12), rng.randint(0, 4)
    rows = oracles.random_matrix(rng, n, m, rank_cap=r)
    M = Matrix.from_rows(FP, rows)
    assert M.rank() == oracles.rank(rows, 32003)
    K = kernel_basis(M)
    assert K.dim == m - M.rank()
    assert (M @ K.basis.transpose()).is_zero()
    L = left_kernel(M)
    assert L.dim == n - M.rank()
    assert (L.basis @ M).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_subspace_lattice_laws(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    for field in BACKENDS:
        U = Subspace.span(field, n, oracles.random_matrix(rng, rng.randint(0, n), n, p=11))
        V = Subspace.span(field, n, oracles.random_matrix(rng, rng.randint(0, n), n, p=11))
        S, I = U + V, U & V
        assert S.dim + I.dim == U.dim + V.dim
        assert S.contains(U) and S.contains(V)
        assert U.contains(I) and V.contains(I)
        for r in range(I.dim):
            assert U.contains_vector(I.basis.row(r))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_preimage_definition(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 6), rng.randint(1, 6)
    rows = oracles.random_matrix(rng, n, m, p=5)
    lin = Matrix.from_rows(FP, rows)
    T = Subspace.span(FP, m, oracles.random_matrix(rng, rng.randint(0, m), m, p=5))
    pre = preimage_under(lin, T)
    assert T.contains(pre.image(lin))
    # dimension count: pre = lin^-1(T ∩ im lin), so dim = dim ker + dim(T ∩ im)
    im = Subspace.full(FP, n).image(lin)
    assert pre.dim == kernel_basis(lin.transpose()).dim + (T & im).dim


def test_stacking_and_blocks():
    a = Matrix.from_rows(FP, [[1, 2]])
    b = Matrix.from_rows(FP, [[3, 4]])
    assert ints(vstack([a, b])) == [[1, 2], [3, 4]]
    assert ints(hstack([a, b])) == [[1, 2, 3, 4]]
    blk = block_matrix(FP, [1, 1], [2, 2], {(0, 1): a, (1, 0): b})
    assert ints(blk) == [[0, 0, 1, 2], [3, 4, 0, 0]]
