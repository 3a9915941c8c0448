"""Exact scalars, dense matrices and linear subspaces over F_p or Q.

Prime-field matrices live in ``int64`` numpy arrays and are reduced by the
compiled kernels in :mod:`multlab._kernels`; rational matrices are
python-flint ``fmpq_mat`` objects.  Products over F_p go through float64
only in chunks small enough for every partial sum to be an exact integer.

Conventions
-----------
Vectors are rows.  A linear map ``k^m -> k^n`` is an ``m x n`` matrix acting
on the right, ``v |-> v @ L``.  :func:`kernel_basis` keeps the textbook
meaning ``{v : M v = 0}`` (column vectors); :func:`left_kernel` is the row
version used by the rest of the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint
import numpy as np

from ._kernels import MAX_PRIME, matmul_mod, rref_mod
from .errors import BackendMismatch, DimensionMismatch, InputError

DEFAULT_PRIME = 32003


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``F_p`` for ``characteristic = p``, ``Q`` for 0."""

    characteristic: int = DEFAULT_PRIME

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (p < 2 or not flint.fmpz(p).is_prime()):
            raise InputError(f"field characteristic {p} is not prime")
        if p >= MAX_PRIME:
            raise InputError(f"prime fields are limited to p < 2^26, got {p}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"fp:32003"``, ``"rational"`` (also ``"QQ"``/``"Q"``)."""
        t = text.strip().lower()
        if t in ("rational", "qq", "q"):
            return cls(0)
        if t.startswith("fp:") and t[3:].isdigit():
            return cls(int(t[3:]))
        raise InputError(f"unknown field spec {text!r}; use 'fp:<prime>' or 'rational'")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def name(self) -> str:
        return "rational" if self.is_rational else f"fp:{self.characteristic}"

    def __repr__(self):
        return "QQ" if self.is_rational else f"GF({self.characteristic})"

    def __call__(self, value):
        """Map an int, Fraction or scalar of this field into the field."""
        if self.is_rational:
            if isinstance(value, flint.fmpq):
                return value
            if isinstance(value, flint.nmod):
                raise BackendMismatch("cannot coerce an F_p scalar into Q")
            if isinstance(value, Fraction):
                return flint.fmpq(value.numerator, value.denominator)
            return flint.fmpq(value)
        p = self.characteristic
        if isinstance(value, flint.nmod):
            if value.modulus() != p:
                raise BackendMismatch(f"scalar mod {value.modulus()} used in {self!r}")
            return value
        if isinstance(value, flint.fmpq):
            return flint.nmod(int(value.p), p) / flint.nmod(int(value.q), p)
        if isinstance(value, Fraction):
            return flint.nmod(value.numerator, p) / flint.nmod(value.denominator, p)
        return flint.nmod(value, p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def owns(self, x) -> bool:
        if self.is_rational:
            return isinstance(x, flint.fmpq)
        return isinstance(x, flint.nmod) and x.modulus() == self.characteristic


QQ = Field(0)
GF = Field
DEFAULT_FIELD = Field(DEFAULT_PRIME)


def field_of(x) -> Field:
    if isinstance(x, flint.nmod):
        return Field(x.modulus())
    if isinstance(x, flint.fmpq):
        return QQ
    raise BackendMismatch(f"{x!r} is not a field scalar")


def as_int(x) -> int:
    """Integer value of a scalar (the symmetric residue for F_p)."""
    if isinstance(x, flint.nmod):
        v, p = int(x), x.modulus()
        return v - p if v > p // 2 else v
    if isinstance(x, flint.fmpq):
        if x.q != 1:
            raise ValueError(f"{x} is not an integer")
        return int(x.p)
    return int(x)


class Matrix:
    """Immutable dense matrix over a :class:`Field`.

    Prime-field matrices are ``int64`` numpy arrays with entries in ``[0, p)``;
    rational ones are ``flint.fmpq_mat``.
    """

    __slots__ = ("field", "_m")

    def __init__(self, field: Field, data):
        self.field = field
        if not field.is_rational:
            data = np.asarray(data, dtype=np.int64)
            if data.ndim != 2:
                raise DimensionMismatch("matrix data must be two-dimensional")
            data.flags.writeable = False
        self._m = data

    # construction --------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        if field.is_rational:
            return cls(field, flint.fmpq_mat(nrows, ncols))
        return cls(field, np.zeros((nrows, ncols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        if field.is_rational:
            m = flint.fmpq_mat(n, n)
            for i in range(n):
                m[i, i] = 1
            return cls(field, m)
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_array(cls, field: Field, arr) -> "Matrix":
        """From an integer array (reduced into the field)."""
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionMismatch("expected a two-dimensional array")
        if field.is_rational:
            r, c = arr.shape
            return cls(field, flint.fmpq_mat(r, c, [int(x) for x in arr.ravel()]))
        return cls(field, arr % field.characteristic)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionMismatch("cannot infer the column count of an empty row list")
            ncols = len(rows[0])
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
            for x in r:
                if isinstance(x, (flint.nmod, flint.fmpq)) and not field.owns(x):
                    raise BackendMismatch(f"entry {x!r} does not belong to {field!r}")
                flat.append(field(x))
        if field.is_rational:
            return cls(field, flint.fmpq_mat(len(rows), ncols, flat))
        arr = np.array([int(x) for x in flat], dtype=np.int64).reshape(len(rows), ncols)
        return cls(field, arr)

    @classmethod
    def from_sparse(cls, field: Field, nrows: int, ncols: int, entries: dict) -> "Matrix":
        """Build from ``{(i, j): value}``; absent entries are zero."""
        if field.is_rational:
            m = flint.fmpq_mat(nrows, ncols)
            for (i, j), v in entries.items():
                m[i, j] = field(v)
            return cls(field, m)
        arr = np.zeros((nrows, ncols), dtype=np.int64)
        for (i, j), v in entries.items():
            arr[i, j] = int(field(v))
        return cls(field, arr)

    # basic accessors -----------------------------------------------------
    @property
    def nrows(self) -> int:
        return self._m.shape[0] if not self.field.is_rational else self._m.nrows()

    @property
    def ncols(self) -> int:
        return self._m.shape[1] if not self.field.is_rational else self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def array(self) -> np.ndarray:
        """Read-only ``int64`` entries (prime fields only)."""
        if self.field.is_rational:
            raise BackendMismatch("rational matrices have no machine-integer array")
        return self._m

    def __getitem__(self, ij):
        if self.field.is_rational:
            return self._m[ij]
        return self.field(int(self._m[ij]))

    def entries(self) -> list:
        if self.field.is_rational:
            return self._m.entries()
        f = self.field
        return [f(int(x)) for x in self._m.ravel()]

    def tolist(self) -> list[list]:
        if not self.nrows:
            return []
        if self.field.is_rational:
            return self._m.tolist()
        f = self.field
        return [[f(int(x)) for x in r] for r in self._m]

    def row(self, i: int) -> list:
        return [self[i, j] for j in range(self.ncols)]

    def is_zero(self) -> bool:
        if self.field.is_rational:
            return all(x == 0 for x in self._m.entries())
        return not self._m.any()

    def nonzero_rows(self) -> list[int]:
        if self.field.is_rational:
            n = self.ncols
            e = self._m.entries()
            return [i for i in range(self.nrows) if any(x != 0 for x in e[i * n:(i + 1) * n])]
        return [int(i) for i in np.flatnonzero(self._m.any(axis=1))]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.field.is_rational:
            return self._m == other._m
        return bool(np.array_equal(self._m, other._m))

    def __hash__(self):
        if self.field.is_rational:
            return hash((self.field, self.shape, tuple(self._m.entries())))
        return hash((self.field, self.shape, self._m.tobytes()))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    def __str__(self):
        if self.field.is_rational:
            return str(self._m)
        return str(self._m)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise BackendMismatch(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        if self.field.is_rational:
            return Matrix(self.field, self._m * other._m)
        return Matrix(self.field, matmul_mod(self._m, other._m, self.field.characteristic))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        if self.field.is_rational:
            return Matrix(self.field, self._m + other._m)
        return Matrix(self.field, (self._m + other._m) % self.field.characteristic)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        if self.field.is_rational:
            return Matrix(self.field, -self._m)
        return Matrix(self.field, (-self._m) % self.field.characteristic)

    def scale(self, s) -> "Matrix":
        s = self.field(s)
        if self.field.is_rational:
            return Matrix(self.field, self._m * s)
        return Matrix(self.field, (self._m * int(s)) % self.field.characteristic)

    def transpose(self) -> "Matrix":
        if self.field.is_rational:
            return Matrix(self.field, self._m.transpose())
        return Matrix(self.field, np.ascontiguousarray(self._m.T))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def take_rows(self, stop: int) -> "Matrix":
        """The first ``stop`` rows."""
        if stop >= self.nrows:
            return self
        return self.select_rows(range(stop))

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        indices = list(indices)
        if not self.field.is_rational:
            return Matrix(self.field, self._m[indices] if indices else np.zeros((0, self.ncols), np.int64))
        n = self.ncols
        e = self._m.entries()
        flat = [x for i in indices for x in e[i * n:(i + 1) * n]]
        return Matrix(self.field, flint.fmpq_mat(len(indices), n, flat))

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        indices = list(indices)
        if not self.field.is_rational:
            return Matrix(self.field, np.ascontiguousarray(self._m[:, indices]))
        return self.transpose().select_rows(indices).transpose()

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        if self.field.is_rational:
            return self._m.rank()
        _, piv = rref_mod(self._m, self.field.characteristic, full=False)
        return len(piv)

    def rref(self) -> tuple["Matrix", int]:
        return rref(self)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    if not mats:
        raise DimensionMismatch("nothing to stack")
    field, ncols = mats[0].field, mats[0].ncols
    for m in mats:
        mats[0]._check(m)
        if m.ncols != ncols:
            raise DimensionMismatch("column counts differ in vstack")
    if not field.is_rational:
        return Matrix(field, np.vstack([m._m for m in mats]))
    flat = []
    rows = 0
    for m in mats:
        if m.nrows:
            flat.extend(m._m.entries())
            rows += m.nrows
    return Matrix(field, flint.fmpq_mat(rows, ncols, flat) if rows else flint.fmpq_mat(0, ncols))


def hstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    if mats and not mats[0].field.is_rational:
        for m in mats:
            mats[0]._check(m)
        if len({m.nrows for m in mats}) > 1:
            raise DimensionMismatch("row counts differ in hstack")
        return Matrix(mats[0].field, np.hstack([m._m for m in mats]))
    return vstack([m.transpose() for m in mats]).transpose()


def block_matrix(field: Field, row_dims: Sequence[int], col_dims: Sequence[int],
                 blocks: dict) -> Matrix:
    """Assemble from ``{(bi, bj): Matrix}``; missing blocks are zero."""
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    for (bi, bj), blk in blocks.items():
        if blk.field != field:
            raise BackendMismatch(f"block over {blk.field!r} in a {field!r} matrix")
        if blk.shape != (row_dims[bi], col_dims[bj]):
            raise DimensionMismatch(f"block {(bi, bj)} has shape {blk.shape}")
    if not field.is_rational:
        arr = np.zeros((roff[-1], coff[-1]), dtype=np.int64)
        for (bi, bj), blk in blocks.items():
            arr[roff[bi]:roff[bi + 1], coff[bj]:coff[bj + 1]] = blk._m
        return Matrix(field, arr)
    m = flint.fmpq_mat(roff[-1], coff[-1])
    for (bi, bj), blk in blocks.items():
        r0, c0 = roff[bi], coff[bj]
        src = blk._m
        for i in range(blk.nrows):
            for j in range(blk.ncols):
                x = src[i, j]
                if x != 0:
                    m[r0 + i, c0 + j] = x
    return Matrix(field, m)


def _rational_pivots(r, rank: int) -> tuple[int, ...]:
    piv = []
    j = 0
    for i in range(rank):
        while r[i, j] == 0:
            j += 1
        piv.append(j)
        j += 1
    return tuple(piv)


def _echelon(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Nonzero rows of the reduced echelon form, and the pivot columns."""
    if m.nrows == 0 or m.ncols == 0:
        return Matrix.zeros(m.field, 0, m.ncols), ()
    if m.field.is_rational:
        r, rank = m._m.rref()
        piv = _rational_pivots(r, rank)
        return Matrix(m.field, r).take_rows(rank), piv
    r, piv = rref_mod(m._m, m.field.characteristic)
    return Matrix(m.field, r[: len(piv)]), tuple(int(c) for c in piv)


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form (same shape as ``m``) and rank."""
    if m.nrows == 0 or m.ncols == 0:
        return m, 0
    if m.field.is_rational:
        r, rank = m._m.rref()
        return Matrix(m.field, r), rank
    r, piv = rref_mod(m._m, m.field.characteristic)
    return Matrix(m.field, r), len(piv)


def _null_from_rref(r: Matrix, rank: int, pivots: Sequence[int]) -> Matrix:
    """Columns spanning ``{v : R v = 0}`` returned as the rows of a matrix."""
    n = r.ncols
    field = r.field
    pivots = list(pivots)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    if not field.is_rational:
        p = field.characteristic
        out = np.zeros((len(free), n), dtype=np.int64)
        if free:
            out[np.arange(len(free)), free] = 1
            if pivots:
                out[:, pivots] = (-r._m[:rank][:, free].T) % p
        return Matrix(field, out)
    out = flint.fmpq_mat(len(free), n)
    src = r._m
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(pivots):
            x = src[i, f]
            if x != 0:
                out[k, pc] = -x
    return Matrix(field, out)


def kernel_basis(m: Matrix) -> "Subspace":
    """Basis of ``{v : m v = 0}`` as a subspace of ``k^cols``."""
    if m.nrows == 0:
        return Subspace.full(m.field, m.ncols)
    r, piv = _echelon(m)
    return Subspace.from_matrix(_null_from_rref(r, len(piv), piv))


def left_kernel(m: Matrix) -> "Subspace":
    """Basis of ``{v : v m = 0}``."""
    return kernel_basis(m.transpose())


class Subspace:
    """A linear subspace of ``k^n`` held as a reduced row-echelon basis."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, basis: Matrix, pivots: tuple[int, ...]):
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_matrix(cls, m: Matrix) -> "Subspace":
        r, piv = _echelon(m)
        return cls(m.field, m.ncols, r, piv)

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = list(vectors)
        if not vectors:
            return cls.zero(field, ambient)
        return cls.from_matrix(Matrix.from_rows(field, vectors, ambient))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.zeros(field, 0, ambient), ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.identity(field, ambient), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, {self.field!r})"

    def _check(self, other: "Subspace"):
        if self.field != other.field:
            raise BackendMismatch(f"{self.field!r} vs {other.field!r}")
        if self.ambient != other.ambient:
            raise DimensionMismatch(f"ambient dimensions {self.ambient} and {other.ambient}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient == other.ambient
                and self.pivots == other.pivots and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.pivots))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0 or self.is_full():
            return self
        if self.dim == 0 or other.is_full():
            return other
        return Subspace.from_matrix(vstack([self.basis, other.basis]))

    def intersection(self, other: "Subspace") -> "Subspace":
        """Pairs ``(l, m)`` with ``l A = m B`` come from the left kernel of ``[A; B]``."""
        self._check(other)
        if self.dim == 0 or other.is_full():
            return self
        if other.dim == 0 or self.is_full():
            return other
        k = left_kernel(vstack([self.basis, -other.basis]))
        if k.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        lam = k.basis.select_columns(range(self.dim))
        return Subspace.from_matrix(lam @ self.basis)

    __and__ = intersection

    def annihilator(self) -> Matrix:
        """``n x codim`` matrix ``Z`` with ``v in self  <=>  v @ Z = 0``."""
        return _null_from_rref(self.basis, self.dim, self.pivots).transpose()

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch("vector length differs from the ambient dimension")
        if self.is_full():
            return True
        row = Matrix.from_rows(self.field, [v], self.ambient)
        return (row @ self.annihilator()).is_zero()

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0 or self.is_full():
            return True
        if other.dim > self.dim:
            return False
        return (other.basis @ self.annihilator()).is_zero()

    def __contains__(self, item):
        if isinstance(item, Subspace):
            return self.contains(item)
        return self.contains_vector(item)

    def image(self, lin: Matrix) -> "Subspace":
        """``{v @ lin : v in self}``."""
        if lin.nrows != self.ambient:
            raise DimensionMismatch("map domain differs from the ambient dimension")
        if self.dim == 0:
            return Subspace.zero(self.field, lin.ncols)
        return Subspace.from_matrix(self.basis @ lin)

    def preimage_under(self, lin: Matrix, target: "Subspace | None" = None) -> "Subspace":
        """``{v : v @ lin in target}`` intersected with ``self``.

        Called on the full space this is the plain preimage of ``target``.
        """
        if target is None:
            raise TypeError("preimage_under needs a target subspace")
        if lin.nrows != self.ambient or lin.ncols != target.ambient:
            raise DimensionMismatch(f"map of shape {lin.shape} between {self.ambient} and {target.ambient}")
        if lin.field != self.field or target.field != self.field:
            raise BackendMismatch("mixed fields in preimage")
        if target.is_full():
            return self
        cond = lin @ target.annihilator()
        pre = left_kernel(cond)
        return pre if self.is_full() else pre.intersection(self)

    def quotient_dim(self, sub: "Subspace") -> int:
        """``dim(self / sub)``; ``sub`` must be contained in ``self``."""
        return self.dim - sub.dim


def preimage_under(lin: Matrix, target: Subspace) -> Subspace:
    return Subspace.full(lin.field, lin.nrows).preimage_under(lin, target)
