"""Compiled kernels for dense linear algebra over F_p with int64 storage.

Row reduction uses lazy modular reduction: a row absorbs several updates
``row -= f * pivot_row`` before it is reduced, as long as the magnitude
bound ``updates * (p-1)^2 + p`` stays below 2^62.
"""
from __future__ import annotations

import numba
import numpy as np

MAX_PRIME = 1 << 26
_EXACT_FLOAT = 1 << 53


@numba.njit(cache=True)
def _inv_mod(a, p):
    t, new_t, r, new_r = 0, 1, p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@numba.njit(cache=True)
def _reduce_row(A, i, start, p):
    for j in range(start, A.shape[1]):
        A[i, j] %= p


@numba.njit(cache=True)
def rref_inplace(A, p, full):
    """Row-reduce ``A`` in place; returns the pivot columns.

    ``full`` selects reduced echelon form (Gauss-Jordan); otherwise rows above
    each pivot are left alone.  Entries of the result lie in ``[0, p)``.
    """
    m, n = A.shape
    lazy = (1 << 62) // ((p - 1) * (p - 1) + 1)
    if lazy < 1:
        lazy = 1
    count = np.zeros(m, dtype=np.int64)
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            v = A[i, c] % p
            if v != 0:
                piv = i
                break
            A[i, c] = 0
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
            tmp = count[r]
            count[r] = count[piv]
            count[piv] = tmp
        _reduce_row(A, r, c, p)
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            for j in range(c, n):
                A[r, j] = (A[r, j] * inv) % p
        count[r] = 0
        lo = 0 if full else r + 1
        for i in range(lo, m):
            if i == r:
                continue
            f = A[i, c] % p
            if f == 0:
                A[i, c] = 0
                continue
            for j in range(c, n):
                A[i, j] -= f * A[r, j]
            count[i] += 1
            if count[i] >= lazy:
                _reduce_row(A, i, c, p)
                count[i] = 0
        pivots[r] = c
        r += 1
    for i in range(m):
        _reduce_row(A, i, 0, p)
    return pivots[:r].copy()


def rref_mod(a: np.ndarray, p: int, full: bool = True):
    """``(R, pivots)`` with ``R`` a fresh array; rows past the rank are zero."""
    work = np.ascontiguousarray(a, dtype=np.int64).copy()
    if work.size == 0:
        return work, np.zeros(0, dtype=np.int64)
    piv = rref_inplace(work, np.int64(p), full)
    return work, piv


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` through float64 products in chunks of the inner index."""
    m, k = a.shape
    n = b.shape[1]
    if m == 0 or n == 0 or k == 0:
        return np.zeros((m, n), dtype=np.int64)
    chunk = max(1, (_EXACT_FLOAT - 1) // ((p - 1) * (p - 1)))
    out = np.zeros((m, n), dtype=np.int64)
    for s in range(0, k, chunk):
        prod = a[:, s:s + chunk].astype(np.float64) @ b[s:s + chunk].astype(np.float64)
        out += np.fmod(prod, p).astype(np.int64)
        out %= p
    return out
