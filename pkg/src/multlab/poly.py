"""Sparse multivariate polynomials over a :class:`~multlab.exactla.Field`.

Grammar accepted by :func:`parse` (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := int | var | '(' expr ')'

A leading unary minus is allowed on a term.  Implicit multiplication
(``2x``, ``x y``) is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import flint

from .errors import BackendMismatch, InputError, PolynomialSyntaxError
from .exactla import DEFAULT_FIELD, Field, as_int

MAX_EXPONENT = 10_000

Monomial = tuple  # exponent vector, one entry per variable


def _grlex_key(exp):
    return (sum(exp), exp)


class Polynomial:
    """Immutable polynomial ``{exponent vector: nonzero scalar}``."""

    __slots__ = ("variables", "field", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], field: Field = DEFAULT_FIELD,
                 terms: Mapping[Monomial, object] | None = None):
        self.variables = tuple(variables)
        self.field = field
        clean = {}
        n = len(self.variables)
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise InputError(f"exponent vector {exp} does not match variables {self.variables}")
            if any(e < 0 for e in exp):
                raise InputError(f"negative exponent in {exp}")
            c = field(c)
            if c != 0:
                clean[exp] = c
        self._terms = clean
        self._hash = None

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, variables, field=DEFAULT_FIELD):
        return cls(variables, field)

    @classmethod
    def constant(cls, value, variables, field=DEFAULT_FIELD):
        return cls(variables, field, {(0,) * len(tuple(variables)): value})

    @classmethod
    def var(cls, name, variables, field=DEFAULT_FIELD):
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise InputError(f"unknown variable {name!r}")
        return cls(variables, field, {exp: 1})

    def _like(self, terms):
        p = Polynomial.__new__(Polynomial)
        p.variables = self.variables
        p.field = self.field
        p._terms = {e: c for e, c in terms.items() if c != 0}
        p._hash = None
        return p

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp) -> object:
        return self._terms.get(tuple(exp), self.field.zero)

    @property
    def constant_term(self):
        return self.coefficient((0,) * len(self.variables))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for the zero polynomial."""
        return min((sum(e) for e in self._terms), default=-1)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return self._like({e: c for e, c in self._terms.items() if sum(e) == d})

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def sorted_terms(self) -> list:
        """Terms in graded-lex order, largest first."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_coefficient(self):
        return self.sorted_terms()[0][1] if self._terms else self.field.zero

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = self.field.one / self.leading_coefficient()
        return self._like({e: c * inv for e, c in self._terms.items()})

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise InputError(f"variables {other.variables} vs {self.variables}")
            if other.field != self.field:
                raise BackendMismatch(f"{other.field!r} vs {self.field!r}")
            return other
        return Polynomial.constant(other, self.variables, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t[e] + c if e in t else c
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t[e] + c1 * c2 if e in t else c1 * c2
        return self._like(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial powers need a non-negative integer exponent")
        result = Polynomial.constant(1, self.variables, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.variables == other.variables and self.field == other.field
                    and self._terms == other._terms)
        try:
            return self == self._coerce(other)
        except (InputError, TypeError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, self.field, frozenset(self._terms.items())))
        return self._hash

    def substitute_degree_map(self, weights: Sequence[int]) -> dict:
        """Collapse to ``{sum(w_i e_i): coefficient}``; used for monomial curves."""
        out: dict = {}
        for e, c in self._terms.items():
            k = sum(w * x for w, x in zip(weights, e))
            out[k] = out[k] + c if k in out else c
        return {k: c for k, c in out.items() if c != 0}

    def to_dict(self) -> dict:
        return dict(self._terms)

    # printing ---------------------------------------------------------------
    def _coeff_str(self, c) -> str:
        if self.field.is_rational:
            return str(c)
        return str(as_int(c))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exp) if e)
            cs = self._coeff_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {self.variables}, {self.field!r})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)|$)")


def _tokenize(text):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == n and m.lastindex is None:
            break
        if m.group(1):
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("var", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*^()":
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append((ch, ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, variables, field):
        self.text = text
        self.vars = tuple(variables)
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def fail(self, msg, pos):
        raise PolynomialSyntaxError(msg, self.text, pos)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression", 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "var", "("):
                self.fail("implicit multiplication is not allowed; use '*'", tok[2])
            self.fail(f"unexpected {tok[1]!r}", tok[2])
        return p

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "*":
                self.take()
                p = p * self.factor()
            elif tok[0] in ("int", "var", "("):
                self.fail("implicit multiplication is not allowed; use '*'", tok[2])
            else:
                return p

    def factor(self):
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            k = int(tok[1])
            if k > MAX_EXPONENT:
                self.fail(f"exponent {k} exceeds the limit {MAX_EXPONENT}", tok[2])
            b = b ** k
        return b

    def base(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return Polynomial.constant(int(tok[1]), self.vars, self.field)
        if tok[0] == "var":
            self.take()
            if tok[1] not in self.vars:
                self.fail(f"unknown variable {tok[1]!r} (known: {', '.join(self.vars)})", tok[2])
            return Polynomial.var(tok[1], self.vars, self.field)
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        self.fail(f"expected a number, variable or '(', found {tok[1] or 'end of input'!r}", tok[2])


def parse(text: str, variables: Sequence[str], field: Field = DEFAULT_FIELD) -> Polynomial:
    """Parse ``text`` into a polynomial in ``variables`` over ``field``."""
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",")]
    return _Parser(text, variables, field).parse()


# ---------------------------------------------------------------------------
# initial forms and binary forms

@dataclass(frozen=True)
class InitialForm:
    """Lowest-degree homogeneous component; ``is_zero`` for the zero element."""

    degree: int
    form: Polynomial
    is_zero: bool = False


def initial_form_m(p: Polynomial) -> InitialForm:
    if p.is_zero():
        return InitialForm(-1, p, True)
    c = p.order()
    return InitialForm(c, p.homogeneous_part(c))


def _univariate_gcd(a: list, b: list, field: Field) -> list:
    """Monic gcd of coefficient lists (index = power)."""
    def strip(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = strip(list(a)), strip(list(b))
    while b:
        r = list(a)
        inv = field.one / b[-1]
        while len(r) >= len(b) and r:
            q = r[-1] * inv
            shift = len(r) - len(b)
            for i, bc in enumerate(b):
                r[shift + i] = r[shift + i] - q * bc
            r.pop()
            strip(r)
        a, b = b, r
    if not a:
        return []
    inv = field.one / a[-1]
    return [c * inv for c in a]


def _split_pure_powers(f: Polynomial):
    ax = min(e[0] for e in f._terms)
    ay = min(e[1] for e in f._terms)
    rest = {(e[0] - ax, e[1] - ay): c for e, c in f._terms.items()}
    return ax, ay, rest


def binary_form_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd of two binary forms (homogeneous polynomials in two variables)."""
    for h in (f, g):
        if len(h.variables) != 2:
            raise InputError("binary forms need exactly two variables")
        if not h.is_homogeneous():
            raise InputError(f"{h} is not homogeneous")
    f = g._coerce(f)
    if f.is_zero() and g.is_zero():
        raise InputError("gcd of two zero forms is undefined")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    field = f.field
    fx, fy, fr = _split_pure_powers(f)
    gx, gy, gr = _split_pure_powers(g)
    # rest parts are not divisible by x or y: dehomogenise at y = 1
    fu = [field.zero] * (max(e[0] for e in fr) + 1)
    for e, c in fr.items():
        fu[e[0]] = c
    gu = [field.zero] * (max(e[0] for e in gr) + 1)
    for e, c in gr.items():
        gu[e[0]] = c
    h = _univariate_gcd(fu, gu, field)
    dh = len(h) - 1
    ex, ey = min(fx, gx), min(fy, gy)
    terms = {(i + ex, dh - i + ey): c for i, c in enumerate(h) if c != 0}
    return Polynomial(f.variables, field, terms).monic()


def _flint_ctx(p: Polynomial):
    if p.field.is_rational:
        return flint.fmpq_mpoly_ctx.get(p.variables)
    return flint.nmod_mpoly_ctx.get(p.variables, modulus=p.field.characteristic)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd in the polynomial ring ``k[variables]``."""
    g = f._coerce(g)
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    ctx = _flint_ctx(f)
    conv = (lambda c: c) if f.field.is_rational else int
    ff = ctx.from_dict({e: conv(c) for e, c in f.items()})
    gg = ctx.from_dict({e: conv(c) for e, c in g.items()})
    h = ff.gcd(gg)
    return Polynomial(f.variables, f.field, {tuple(e): f.field(int(c) if not f.field.is_rational else c)
                                             for e, c in h.to_dict().items()}).monic()


def divides(d: Polynomial, p: Polynomial) -> bool:
    """Exact divisibility test in ``k[variables]``."""
    p = d._coerce(p)
    if d.is_zero():
        return p.is_zero()
    ctx = _flint_ctx(d)
    conv = (lambda c: c) if d.field.is_rational else int
    dd = ctx.from_dict({e: conv(c) for e, c in d.items()})
    pp = ctx.from_dict({e: conv(c) for e, c in p.items()})
    q, r = divmod(pp, dd)
    return r == 0


def variables_of(polys: Iterable[Polynomial]):
    vs = {p.variables for p in polys}
    if len(vs) > 1:
        raise InputError(f"polynomials over different variable sets: {sorted(vs)}")
    return vs.pop() if vs else ()
