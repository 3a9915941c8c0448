"""Associated graded data: graded pieces, initial forms, sop and regularity probes.

All degreewise questions about ``G_M(q)`` reduce to subspaces of one
truncation ``A/T_N`` with ``T_N`` inside every ideal involved, so each
comparison below is an exact dimension count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import HypothesisFailure, InputError, NonConstant
from .exactla import Subspace
from .hilbert import hs_table
from .koszul import KoszulSetup
from .localmodel import (DEFAULT_DEGREE_CEILING, ModuleSpec, POLY_LOCAL, RingSpec, as_module,
                         initial_degree, length_of_quotient, model_at, power_chain)
from .poly import Polynomial, binary_form_gcd, initial_form_m

DEFAULT_K_WINDOW = 6
DEFAULT_SOP_CEILING = 16
DEFAULT_DEGREE_BOUND = 16
COLON_WINDOW = 3
COLON_SCAN = 30


@dataclass(frozen=True)
class GradedPiece:
    """``[G_M(q)]_n = q^n M / q^(n+1) M`` with a section of its basis."""

    degree: int
    dim: int
    basis: tuple[Polynomial, ...]


def graded_piece(spec, q_gens, n: int, **options) -> GradedPiece:
    if n < 0:
        return GradedPiece(n, 0, ())
    spec = as_module(spec)
    chain = power_chain(spec, q_gens, **options)
    model = model_at(spec, max(chain.level(n + 1), 1), chain.max_dim)
    hi = chain.power_in(model, n)
    lo = chain.power_in(model, n + 1)
    # rows of the echelon basis of q^n whose leading position is new in degree n
    taken = set(lo.pivots)
    rows = [r for r, c in enumerate(hi.pivots) if c not in taken]
    basis = tuple(model.element_of(hi.basis.row(r)) for r in rows)
    return GradedPiece(n, hi.dim - lo.dim, basis)


@dataclass(frozen=True)
class QInitialForm:
    element: Polynomial
    q_gens: tuple[Polynomial, ...]
    degree: int
    representative: Polynomial     # normal form of the element modulo q^(c+1) M

    def __str__(self):
        return f"({self.representative})* in degree {self.degree}"


def _normal_form(model, sub: Subspace, vec) -> list:
    v = list(vec)
    for r, c in enumerate(sub.pivots):
        if v[c] != 0:
            f = v[c]
            row = sub.basis.row(r)
            v = [x - f * y for x, y in zip(v, row)]
    return v


def initial_degree_q(spec, q_gens, a, *, ceiling: int = DEFAULT_DEGREE_CEILING, **options) -> QInitialForm:
    """Initial element of ``a`` in ``G_M(q)``; :class:`CeilingReached` if ``a`` sits in every tested power."""
    spec = as_module(spec)
    ring = spec.ring
    q = ring.elements(q_gens)
    a = ring.element(a)
    c = initial_degree(spec, q, a, ceiling=ceiling, **options)
    chain = power_chain(spec, q, **options)
    model = model_at(spec, max(chain.level(c + 1), 1), chain.max_dim)
    rep = model.element_of(_normal_form(model, chain.power_in(model, c + 1), model.vector(a)))
    return QInitialForm(a, q, c, rep)


# ---------------------------------------------------------------------------
# system-of-parameters criterion

@dataclass
class SopVerdict:
    holds: bool
    onset: int | None                 # smallest k with equality on (k, k + window]
    first_failure: int | None         # first failing degree after the last onset candidate
    trace: dict = field(default_factory=dict)   # n -> (dim q^n M, dim of the sum)
    k_window: int = DEFAULT_K_WINDOW
    ceiling: int = DEFAULT_SOP_CEILING

    def __bool__(self):
        return self.holds

    def as_dict(self) -> dict:
        return {
            "holds": self.holds, "onset": self.onset, "first_failure": self.first_failure,
            "k_window": self.k_window, "ceiling": self.ceiling,
            "trace": {str(n): list(v) for n, v in sorted(self.trace.items())},
        }


def _sop_degree(setup: KoszulSetup, n: int, **options) -> tuple[int, int]:
    """Dimensions of ``q^n M`` and of ``sum a_i q^(n - c_i) M + q^(n+1) M`` modulo ``T_N``."""
    chain = power_chain(setup.spec, setup.q_gens, **options)
    model = model_at(setup.spec, max(chain.level(n + 1), 1), chain.max_dim)
    target = chain.power_in(model, n)
    total = chain.power_in(model, n + 1)
    for a, c in zip(setup.a, setup.c):
        total = total + model.multiply(chain.power_in(model, n - c), a)
    return target.dim, total.dim


def sop_check(setup: KoszulSetup, k_window: int = DEFAULT_K_WINDOW, ceiling: int = DEFAULT_SOP_CEILING,
              **options) -> SopVerdict:
    """Whether ``q^n M = sum a_i q^(n - c_i) M`` for all ``n`` past some ``k <= ceiling``.

    Each degree is tested modulo ``q^(n+1) M``; for all large ``n`` at once
    the two forms are equivalent by Krull's intersection theorem, and the
    graded form says exactly that ``a*`` generate ``[G_M(q)]_n``.  "All
    large n" is read as ``k_window`` consecutive degrees.
    """
    trace = {}
    ok = {}
    run = 0
    for n in range(1, ceiling + k_window + 1):
        t, s = _sop_degree(setup, n, **options)
        trace[n] = (t, s)
        ok[n] = t == s
        run = run + 1 if ok[n] else 0
        if run == k_window:
            # the first window found in order gives the smallest onset
            return SopVerdict(True, n - k_window, None, trace, k_window, ceiling)
    failing = [n for n in sorted(ok) if not ok[n]]
    return SopVerdict(False, None, failing[-1] if failing else None, trace, k_window, ceiling)


# ---------------------------------------------------------------------------
# G-regularity

@dataclass
class GregVerdict:
    element: Polynomial
    degree: int                      # initial degree f
    bound: int                       # D
    failed_at: int | None = None
    witness: Polynomial | None = None
    kernel_dims: list = field(default_factory=list)

    @property
    def regular_up_to_bound(self) -> bool:
        return self.failed_at is None

    def __bool__(self):
        return self.regular_up_to_bound

    @property
    def verdict(self) -> str:
        if self.failed_at is None:
            return f"regular up to degree {self.bound}"
        return f"not regular: kernel in degree {self.failed_at}"

    def as_dict(self) -> dict:
        return {
            "element": str(self.element), "initial_degree": self.degree, "bound": self.bound,
            "verdict": self.verdict, "failed_at": self.failed_at,
            "witness": None if self.witness is None else str(self.witness),
            "kernel_dims": self.kernel_dims,
        }


def greg_kernel(spec, q_gens, a, n: int, f: int, **options) -> tuple[int, Polynomial | None]:
    """Kernel of ``a* : [G_M]_n -> [G_M]_(n+f)`` as ``(dim, witness)``."""
    spec = as_module(spec)
    chain = power_chain(spec, q_gens, **options)
    model = model_at(spec, max(chain.level(n + f + 1), 1), chain.max_dim)
    high = chain.power_in(model, n + f + 1)
    colon = model.colon_subspace(high, a)
    inside = colon & chain.power_in(model, n)
    floor = chain.power_in(model, n + 1)
    dim = inside.dim - floor.dim
    if dim == 0:
        return 0, None
    for r in range(inside.dim):
        row = inside.basis.row(r)
        if not floor.contains_vector(row):
            return dim, model.element_of(row)
    return dim, None


def greg_probe(spec, q_gens, a, D: int = DEFAULT_DEGREE_BOUND, **options) -> GregVerdict:
    """Injectivity of multiplication by ``a*`` on ``G_M(q)`` in degrees ``0..D``."""
    spec = as_module(spec)
    ring = spec.ring
    q = ring.elements(q_gens)
    a = ring.element(a)
    f = initial_degree(spec, q, a, **options)
    out = GregVerdict(a, f, D)
    for n in range(D + 1):
        k, w = greg_kernel(spec, q, a, n, f, **options)
        out.kernel_dims.append(k)
        if k:
            out.failed_at, out.witness = n, w
            break
    return out


# ---------------------------------------------------------------------------
# colon-length constant

@dataclass
class ColonReport:
    constant: int
    n_values: list[int]
    trace: list[int]
    length_M_aM: int
    c_product: int
    e0_q: int
    probes: list = field(default_factory=list)

    @property
    def identity_holds(self) -> bool:
        return self.c_product * self.e0_q == self.length_M_aM - self.constant

    def as_dict(self) -> dict:
        return {
            "constant": self.constant, "n": self.n_values, "trace": self.trace,
            "length_M_aM": self.length_M_aM, "c_product": self.c_product, "e0_q": self.e0_q,
            "lhs": self.c_product * self.e0_q, "rhs": self.length_M_aM - self.constant,
            "identity_holds": self.identity_holds,
            "hypothesis_probes": [p.as_dict() for p in self.probes],
        }


def colon_length(spec, q_gens, a_prime: Sequence, a_last, n: int, c_last: int, **options) -> int:
    """``l(((a', q^n) M :_M a_d) / (a', q^(n - c_d)) M)``."""
    spec = as_module(spec)
    chain = power_chain(spec, q_gens, **options)
    model = model_at(spec, max(chain.level(n), 1), chain.max_dim)
    base = model.ideal(list(a_prime)) if a_prime else Subspace.zero(model.field, model.ambient)
    big = base + chain.power_in(model, n)
    small = base + chain.power_in(model, n - c_last)
    colon = model.colon_subspace(big, a_last)
    return colon.dim - small.dim


def colon_constant(setup: KoszulSetup, window: int = COLON_WINDOW, *, degree_bound: int = DEFAULT_DEGREE_BOUND,
                   scan: int = COLON_SCAN, **options) -> ColonReport:
    """Stabilised colon length and the check ``c e_0(q; M) = l(M/aM) - constant``.

    The regularity of ``a_1*, ..., a_(d-1)*`` is probed up to ``degree_bound``
    (``a_i*`` on ``G`` of ``M/(a_1..a_(i-1))M``) and recorded in the report.
    """
    spec, q = setup.spec, setup.q_gens
    probes = []
    current = spec
    for a in setup.a[:-1]:
        v = greg_probe(current, q, a, degree_bound, **options)
        probes.append(v)
        if not v:
            raise HypothesisFailure(
                f"{a} is not G-regular ({v.verdict}); the colon identity needs a regular sequence "
                f"a_1*, ..., a_(d-1)*")
        current = current.quotient(a)
    a_prime, a_last, c_last = setup.a[:-1], setup.a[-1], setup.c[-1]
    start = sum(setup.c) + 1
    ns, vals = [], []
    for n in range(start, start + scan):
        ns.append(n)
        vals.append(colon_length(spec, q, a_prime, a_last, n, c_last, **options))
        if len(vals) >= window and len(set(vals[-window:])) == 1:
            break
    else:
        raise NonConstant(f"colon length not constant over {window} values: {vals}")
    e0_q = hs_table(spec, q, dim=setup.d, n_max=setup.d + window, **options).e0
    return ColonReport(vals[-1], ns, vals, length_of_quotient(spec, setup.a), setup.c_product, e0_q, probes)


# ---------------------------------------------------------------------------
# plane curves

_PLANE = RingSpec(POLY_LOCAL, ("x", "y"))


def tangent_multiplicity(f, g, ring: RingSpec | None = None) -> int:
    """Degree of ``gcd(f*, g*)`` for the m-adic initial forms in two variables."""
    ring = ring or _PLANE
    if ring.is_curve or len(ring.variables) != 2:
        raise InputError("tangent multiplicity needs a polynomial ring in two variables")
    f, g = ring.element(f), ring.element(g)
    if f.is_zero() or g.is_zero():
        raise InputError("tangent multiplicity of a zero equation is undefined")
    return binary_form_gcd(initial_form_m(f).form, initial_form_m(g).form).degree()
