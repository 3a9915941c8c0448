"""Hilbert-Samuel functions and multiplicities.

The dimension ``d`` and the multiplicity ``e_0`` are read off a forward
difference table of ``n |-> l(M/q^{n+1} M)``: the first row whose tail is
constant over ``window`` entries is row ``d`` and the constant is ``e_0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputError, InsufficientRange, NonStabilizing, NotSystemOfParameters, PropertyViolation, RestrictionViolated
from .localmodel import ModuleSpec, annihilator_is_zero, as_module, length_of_quotient, power_chain
from .poly import Polynomial

DEFAULT_N_MAX = 12
MAX_N_MAX = 48
DEFAULT_WINDOW = 3


def difference_table(values: Sequence[int]) -> list[list[int]]:
    rows = [list(values)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append([b - a for a, b in zip(prev, prev[1:])])
    return rows


def _tail_constant(row, window):
    return len(row) >= window and len(set(row[-window:])) == 1


def _stabilization_index(row):
    """First index from which ``row`` is constant to its end."""
    i = len(row) - 1
    while i > 0 and row[i - 1] == row[-1]:
        i -= 1
    return i


@dataclass
class HilbertTable:
    """``values[n] = l(M / q^{n+1} M)`` for ``n = 0..n_max`` with its analysis."""

    q_gens: tuple[Polynomial, ...]
    spec: ModuleSpec
    values: list[int]
    differences: list[list[int]] = field(repr=False)
    dim: int
    e0: int
    stabilization_index: int
    truncation_order: int = 0

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def as_dict(self) -> dict:
        return {
            "values": self.values,
            "dimension": self.dim,
            "e0": self.e0,
            "stabilization_index": self.stabilization_index,
            "difference_rows": self.differences[: self.dim + 2],
            "truncation_order": self.truncation_order,
        }


def _analyse(values, window, dim):
    table = difference_table(values)
    if dim is not None:
        if dim >= len(table) or not _tail_constant(table[dim], window):
            return table, None
        return table, dim
    for d, row in enumerate(table):
        if _tail_constant(row, window):
            if row[-1] > 0 or all(v == 0 for v in values):
                return table, d
            return table, None
    return table, None


def hs_table(spec, q_gens, n_max: int = DEFAULT_N_MAX, *, dim: int | None = None,
             window: int = DEFAULT_WINDOW, max_n: int = MAX_N_MAX, **options) -> HilbertTable:
    """Hilbert-Samuel table of ``M`` with respect to ``q``.

    ``dim`` overrides the detected dimension.  Without it the first difference
    row with a constant tail of ``window`` entries decides.  The range is
    doubled up to ``max_n`` before :class:`InsufficientRange` is raised.
    """
    spec = as_module(spec)
    chain = power_chain(spec, q_gens, **options)
    n = n_max
    while True:
        values = [chain.length(k + 1) for k in range(n + 1)]
        if any(b < a for a, b in zip(values, values[1:])):
            raise PropertyViolation(f"Hilbert-Samuel values decrease: {values}")
        table, d = _analyse(values, window, dim)
        if d is not None:
            break
        if n >= max_n:
            raise InsufficientRange(
                f"no difference row is constant over {window} entries up to n = {n}: {values}")
        n = min(2 * n, max_n)
    row = table[d]
    return HilbertTable(q_gens=chain.gens, spec=spec, values=values, differences=table,
                        dim=d, e0=row[-1], stabilization_index=_stabilization_index(row),
                        truncation_order=chain.N)


def e0_of_parameters(spec, a: Sequence, *, n_max: int | None = None, window: int = DEFAULT_WINDOW,
                     **options) -> int:
    """``e_0(aA; M)`` for a system of parameters ``a`` of ``M``.

    The dimension is pinned to ``len(a)``; a vanishing constant means there
    are more elements than ``dim M``.
    """
    spec = as_module(spec)
    a = spec.ring.elements(a)
    d = len(a)
    try:
        table = hs_table(spec, a, n_max if n_max is not None else d + window, dim=d,
                         window=window, **options)
    except NonStabilizing as exc:
        if isinstance(exc, InsufficientRange):
            raise
        raise NotSystemOfParameters(f"M/aM has infinite length for a = {[str(x) for x in a]}") from exc
    if table.e0 <= 0:
        raise NotSystemOfParameters(
            f"{d} elements but dim M < {d}: the {d}-th difference vanishes")
    return table.e0


@dataclass
class IdentityCheck:
    name: str
    lhs: int
    rhs: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "passed": self.passed,
                "detail": self.detail}


def check_power_multiplicativity(spec, a: Sequence, powers: Sequence[int], **options) -> IdentityCheck:
    """``e_0(a_1^{n_1},...,a_d^{n_d}; M) = n_1...n_d e_0(a; M)``."""
    spec = as_module(spec)
    a = spec.ring.elements(a)
    if len(powers) != len(a):
        raise InputError("one power per parameter")
    lhs = e0_of_parameters(spec, [x ** k for x, k in zip(a, powers)], **options)
    prod = 1
    for k in powers:
        prod *= k
    base = e0_of_parameters(spec, a, **options)
    return IdentityCheck("power", lhs, prod * base, f"n = {tuple(powers)}, e0(a) = {base}")


def check_additivity(spec, first_factor, second_factor, rest: Sequence, **options) -> IdentityCheck:
    """``e_0(ab, a'; M) = e_0(a, a'; M) + e_0(b, a'; M)``."""
    spec = as_module(spec)
    ring = spec.ring
    fa, fb = ring.element(first_factor), ring.element(second_factor)
    rest = list(ring.elements(rest))
    lhs = e0_of_parameters(spec, [fa * fb] + rest, **options)
    ea = e0_of_parameters(spec, [fa] + rest, **options)
    eb = e0_of_parameters(spec, [fb] + rest, **options)
    return IdentityCheck("additivity", lhs, ea + eb, f"e0(a,a') = {ea}, e0(b,a') = {eb}")


def _chain_options(options: dict) -> dict:
    return {k: v for k, v in options.items() if k in ("n_ceiling", "max_dim")}


def check_quotient_formula(spec, a: Sequence, **options) -> IdentityCheck:
    """``e_0(a; M) = e_0(a'; M/a_1 M)`` when ``0 :_M a_1 = 0``."""
    spec = as_module(spec)
    a = list(spec.ring.elements(a))
    if not annihilator_is_zero(spec, a[0]):
        raise RestrictionViolated(
            f"0 :_M {a[0]} is nonzero; the quotient formula is only verified for nonzerodivisors")
    lhs = e0_of_parameters(spec, a, **options)
    quotient = spec.quotient(a[0])
    if len(a) == 1:
        rhs = length_of_quotient(spec, [a[0]], **_chain_options(options))
        detail = "d = 1: e0(a; M) = l(M/a M)"
    else:
        rhs = e0_of_parameters(quotient, a[1:], **options)
        detail = f"M/a_1 M = A/(J + {a[0]})"
    return IdentityCheck("quotient", lhs, rhs, detail)


@dataclass
class IdentityReport:
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {"passed": self.passed, "checks": [c.as_dict() for c in self.checks]}


def verify_multiplicity_identities(spec, a: Sequence, *, factorization=None, powers=None,
                                   **options) -> IdentityReport:
    """Run the power, additivity and quotient identities that apply.

    ``factorization`` is a pair ``(a, b)`` with ``a_1 = a*b``; the additivity
    check then uses ``a_2..a_d`` as the remaining parameters.
    """
    spec = as_module(spec)
    ring = spec.ring
    a = list(ring.elements(a))
    checks = []
    if powers is not None:
        checks.append(check_power_multiplicativity(spec, a, powers, **options))
    if factorization is not None:
        fa, fb = ring.elements(factorization)
        if fa * fb != a[0]:
            raise InputError(f"({fa})*({fb}) is not the first parameter {a[0]}")
        checks.append(check_additivity(spec, fa, fb, a[1:], **options))
    checks.append(check_quotient_formula(spec, a, **options))
    return IdentityReport(checks)
