"""Finite-dimensional chain complexes, Koszul complexes, mapping cones and the defect.

Vectors are rows, so the boundary ``d_i : C_i -> C_{i-1}`` is stored as a
``dim C_i x dim C_{i-1}`` matrix and acts by ``v |-> v @ d_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import DimensionMismatch, InputError, NegativeChi, NonStabilizing, PropertyViolation
from .exactla import Field, Matrix, Subspace, block_matrix, left_kernel
from .hilbert import e0_of_parameters, hs_table
from .localmodel import ModuleSpec, as_module, initial_degree, power_chain
from .poly import Polynomial

CHI_WINDOW = 3
CHI_SCAN = 40


@dataclass(frozen=True)
class ChainComplex:
    """Components ``C_0..C_t`` and boundaries ``d_1..d_t``; ``boundaries[i-1]`` is ``d_i``."""

    field: Field
    dims: tuple[int, ...]
    boundaries: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if len(self.boundaries) != max(len(self.dims) - 1, 0):
            raise DimensionMismatch("need one boundary per positive index")
        for i, d in enumerate(self.boundaries, start=1):
            if d.field != self.field:
                raise InputError(f"boundary d_{i} lives over {d.field!r}")
            if d.shape != (self.dims[i], self.dims[i - 1]):
                raise DimensionMismatch(f"d_{i} has shape {d.shape}, expected {(self.dims[i], self.dims[i - 1])}")
        for i in range(2, len(self.dims)):
            if not (self.boundaries[i - 1] @ self.boundaries[i - 2]).is_zero():
                raise PropertyViolation(f"d_{i - 1} o d_{i} is not zero")

    @property
    def length(self) -> int:
        return len(self.dims) - 1

    def d(self, i: int) -> Matrix | None:
        """``d_i``, or ``None`` outside ``1..t``."""
        if 1 <= i <= self.length:
            return self.boundaries[i - 1]
        return None

    def cycles(self, i: int) -> Subspace:
        d = self.d(i)
        if d is None:
            return Subspace.full(self.field, self.dims[i])
        return left_kernel(d)

    def boundaries_in(self, i: int) -> Subspace:
        d = self.d(i + 1)
        if d is None:
            return Subspace.zero(self.field, self.dims[i])
        return Subspace.from_matrix(d)

    def ranks(self) -> list[int]:
        return [d.rank() for d in self.boundaries]


def homology_dims(c: ChainComplex) -> list[int]:
    """``dim H_i = dim C_i - rank d_i - rank d_{i+1}``."""
    r = [0] + c.ranks() + [0]
    return [c.dims[i] - r[i] - r[i + 1] for i in range(len(c.dims))]


def euler_char(c: ChainComplex) -> int:
    """Alternating sum of homology dimensions, checked against the component dimensions."""
    from_h = sum((-1) ** i * h for i, h in enumerate(homology_dims(c)))
    from_c = sum((-1) ** i * n for i, n in enumerate(c.dims))
    if from_h != from_c:
        raise PropertyViolation(f"Euler characteristic mismatch: {from_h} from homology, {from_c} from components")
    return from_h


@dataclass(frozen=True)
class ChainMap:
    """Morphism ``f : X -> Y`` with ``maps[i] : X_i -> Y_i``."""

    source: ChainComplex
    target: ChainComplex
    maps: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        X, Y = self.source, self.target
        if X.length != Y.length or len(self.maps) != len(X.dims):
            raise DimensionMismatch("chain maps need complexes of the same length")
        for i, f in enumerate(self.maps):
            if f.shape != (X.dims[i], Y.dims[i]):
                raise DimensionMismatch(f"f_{i} has shape {f.shape}")
        for i in range(1, len(X.dims)):
            if X.d(i) @ self.maps[i - 1] != self.maps[i] @ Y.d(i):
                raise PropertyViolation(f"f does not commute with the boundary in degree {i}")

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, tuple(Matrix.identity(c.field, n) for n in c.dims))

    @classmethod
    def zero(cls, x: ChainComplex, y: ChainComplex) -> "ChainMap":
        return cls(x, y, tuple(Matrix.zeros(x.field, a, b) for a, b in zip(x.dims, y.dims)))

    def induces_zero(self) -> bool:
        """``f(Z_i(X))`` lies in ``B_i(Y)`` for every ``i``."""
        for i, f in enumerate(self.maps):
            z = self.source.cycles(i)
            if z.dim == 0:
                continue
            if not self.target.boundaries_in(i).contains(Subspace.from_matrix(z.basis @ f)):
                return False
        return True


def mapping_cone(f: ChainMap) -> ChainComplex:
    """``C_i = X_{i-1} + Y_i`` with ``d(x, y) = (d x, d y + (-1)^(i-1) f x)``.

    The cone of ``f`` between complexes of length ``t`` has length ``t + 1``.
    """
    X, Y = f.source, f.target
    k = X.field
    t = X.length
    xdims = (0,) + X.dims            # X_{i-1} at index i
    ydims = Y.dims + (0,)
    dims = [xdims[i] + ydims[i] for i in range(t + 2)]
    bds = []
    for i in range(1, t + 2):
        blocks = {}
        dx = X.d(i - 1)
        if dx is not None:
            blocks[(0, 0)] = dx
        if 1 <= i <= t + 1 and xdims[i] and ydims[i - 1]:
            fx = f.maps[i - 1]
            blocks[(0, 1)] = fx if (i - 1) % 2 == 0 else -fx
        dy = Y.d(i)
        if dy is not None:
            blocks[(1, 1)] = dy
        bds.append(block_matrix(k, (xdims[i], ydims[i]), (xdims[i - 1], ydims[i - 1]), blocks))
    return ChainComplex(k, tuple(dims), tuple(bds))


def _subsets(t: int, i: int) -> list[tuple[int, ...]]:
    return list(combinations(range(t), i))


def _check_ops(ops: Sequence[Matrix]) -> tuple[Field, int]:
    if not ops:
        raise InputError("a Koszul complex needs at least one element")
    k, n = ops[0].field, ops[0].nrows
    for x in ops:
        if x.field != k or x.shape != (n, n):
            raise DimensionMismatch("Koszul operators must be square of one size over one field")
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            if ops[a] @ ops[b] != ops[b] @ ops[a]:
                raise InputError(f"operators {a} and {b} do not commute; d^2 = 0 would fail")
    return k, n


def koszul_complex(mult_ops: Sequence[Matrix]) -> ChainComplex:
    """``K(a; V)`` for commuting operators ``a_1..a_t`` on ``V``.

    ``C_i`` has blocks indexed by ``j_1 < ... < j_i`` and
    ``e_J (x) v |-> sum_k (-1)^(k+1) e_{J - j_k} (x) a_{j_k} v``.
    """
    ops = list(mult_ops)
    k, n = _check_ops(ops)
    t = len(ops)
    subsets = [_subsets(t, i) for i in range(t + 1)]
    dims = tuple(len(s) * n for s in subsets)
    bds = []
    for i in range(1, t + 1):
        pos = {s: r for r, s in enumerate(subsets[i - 1])}
        blocks = {}
        for r, s in enumerate(subsets[i]):
            for kk, j in enumerate(s):
                rest = s[:kk] + s[kk + 1:]
                blocks[(r, pos[rest])] = ops[j] if kk % 2 == 0 else -ops[j]
        bds.append(block_matrix(k, (n,) * len(subsets[i]), (n,) * len(subsets[i - 1]), blocks))
    return ChainComplex(k, dims, tuple(bds))


def koszul_multiplication(c: ChainComplex, op: Matrix) -> ChainMap:
    """``1 (x) op`` on a Koszul complex built over ``V`` (``op`` must commute with its operators)."""
    n = op.nrows
    maps = []
    for d in c.dims:
        blocks = {(b, b): op for b in range(d // n)}
        maps.append(block_matrix(c.field, (n,) * (d // n), (n,) * (d // n), blocks))
    return ChainMap(c, c, tuple(maps))


def homology_annihilated(mult_ops: Sequence[Matrix]) -> bool:
    """Each ``a_j`` acts as zero on every ``H_i(a; V)``."""
    c = koszul_complex(mult_ops)
    return all(koszul_multiplication(c, x).induces_zero() for x in mult_ops)


# ---------------------------------------------------------------------------
# the defect chi(a, q, M)

@dataclass(frozen=True)
class KoszulSetup:
    """``a_1..a_d`` with initial degrees ``c_i`` with respect to ``q`` on ``M``."""

    spec: ModuleSpec
    q_gens: tuple[Polynomial, ...]
    a: tuple[Polynomial, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        if not self.a:
            raise InputError("the system a needs at least one element")
        if len(self.c) != len(self.a):
            raise DimensionMismatch("one initial degree per element")
        if any(ci < 1 for ci in self.c):
            raise InputError(f"initial degrees must be positive, got {self.c}")

    @classmethod
    def build(cls, spec, q_gens, a, c: Sequence[int] | None = None, **options) -> "KoszulSetup":
        """Compute the initial degrees (or check the supplied ones)."""
        spec = as_module(spec)
        ring = spec.ring
        q = ring.elements(q_gens)
        a = ring.elements(a)
        found = tuple(initial_degree(spec, q, x, **options) for x in a)
        if c is not None and tuple(c) != found:
            raise InputError(f"supplied initial degrees {tuple(c)} differ from the computed {found}")
        return cls(spec, q, a, found)

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def c_product(self) -> int:
        out = 1
        for ci in self.c:
            out *= ci
        return out

    def permuted(self, order: Sequence[int]) -> "KoszulSetup":
        return KoszulSetup(self.spec, self.q_gens, tuple(self.a[i] for i in order),
                           tuple(self.c[i] for i in order))


def chi_L(setup: KoszulSetup, n: int, **options) -> int:
    """``sum_i (-1)^i sum_{|S| = i} l(M / q^(n - c_S) M)`` with ``q^k = A`` for ``k <= 0``."""
    chain = power_chain(setup.spec, setup.q_gens, **options)
    total = 0
    for i in range(setup.d + 1):
        for s in combinations(setup.c, i):
            total += (-1) ** i * chain.length(n - sum(s))
    return total


@dataclass
class ChiReport:
    n_values: list[int]
    chi_L: list[int]
    chi_K: list[int]
    chi: int
    e0_a: int
    e0_q: int
    c: tuple[int, ...]
    c_product: int
    defect: int = field(init=False)

    def __post_init__(self):
        self.defect = self.e0_a - self.c_product * self.e0_q

    @property
    def consistent(self) -> bool:
        return self.chi == self.defect

    def as_dict(self) -> dict:
        return {
            "n": self.n_values, "chi_L": self.chi_L, "chi_K": self.chi_K, "chi": self.chi,
            "e0_a": self.e0_a, "e0_q": self.e0_q, "c": list(self.c), "c_product": self.c_product,
            "defect": self.defect, "consistent": self.consistent,
        }


def chi_defect(setup: KoszulSetup, *, window: int = CHI_WINDOW, scan: int = CHI_SCAN, **options) -> ChiReport:
    """Stabilised ``chi_K(n) = e_0(a; M) - chi_L(n)`` with its consistency checks.

    The scan starts at ``n = c_1 + ... + c_d + 1`` and stops at the first
    ``window`` equal consecutive values.
    """
    e0_a = e0_of_parameters(setup.spec, setup.a, **options)
    e0_q = hs_table(setup.spec, setup.q_gens, dim=setup.d, n_max=setup.d + window, **options).e0
    start = sum(setup.c) + 1
    ns, ls, ks = [], [], []
    for n in range(start, start + scan):
        v = chi_L(setup, n, **options)
        ns.append(n)
        ls.append(v)
        ks.append(e0_a - v)
        if len(ks) >= window and len(set(ks[-window:])) == 1:
            break
    else:
        raise NonStabilizing(f"chi_K(n) not constant over {window} values for n < {start + scan}: {ks}")
    report = ChiReport(ns, ls, ks, ks[-1], e0_a, e0_q, setup.c, setup.c_product)
    if report.chi < 0:
        raise NegativeChi(f"chi = {report.chi} < 0 for a = {[str(x) for x in setup.a]}: {report.as_dict()}")
    if not report.consistent:
        raise PropertyViolation(
            f"stabilised chi = {report.chi} but e0(a) - c e0(q) = {report.defect}: {report.as_dict()}")
    return report
