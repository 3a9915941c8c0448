"""Finite-dimensional truncations of local rings and cyclic modules.

Two rings are supported:

* ``poly-local``: ``k[x_1..x_r]`` localised at the origin.  Truncation at
  order ``N`` is ``A/m^N`` with the monomials of total degree ``< N`` as basis.
* ``monomial-curve``: ``k[[t^g_1, ..., t^g_r]]``.  Truncation at ``N`` keeps
  the semigroup values ``< N``; the ideal ``T_N`` of series of ``t``-order
  ``>= N`` is primary to the maximal ideal.

Modules are cyclic, ``M = A/J``.  An ideal ``I`` of ``A`` containing ``J`` is
stored as the image of ``I + T_N`` in ``A/T_N``, so every length is a
difference of subspace dimensions.  Lengths are exact as soon as
``T_N`` is contained in ``I``, which is certified by Nakayama: if the basis
elements of level ``N-w, ..., N-1`` all lie in the subspace then
``T_{N-w} <= I + m T_{N-w}`` and hence ``T_{N-w} <= I``.  Here ``w = 1`` for
polynomial rings and ``w = g_1`` (with ``N - g_1`` past the conductor) for
curves.
"""
from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .errors import CeilingReached, InputError, MemoryLimitError, NonStabilizing
from .exactla import DEFAULT_FIELD, Field, Matrix, Subspace, hstack, vstack
from .poly import Polynomial, parse

DEFAULT_N_CEILING = 64
DEFAULT_MAX_DIM = 6000
POLY_LOCAL = "poly-local"
MONOMIAL_CURVE = "monomial-curve"


# ---------------------------------------------------------------------------
# ring and module descriptions

@dataclass(frozen=True)
class RingSpec:
    """A supported local ring together with its residue field."""

    kind: str
    variables: tuple[str, ...] = ()
    exponents: tuple[int, ...] = ()
    field: Field = DEFAULT_FIELD

    def __post_init__(self):
        if self.kind == POLY_LOCAL:
            if not self.variables:
                raise InputError("a polynomial ring needs at least one variable")
            if len(set(self.variables)) != len(self.variables):
                raise InputError("repeated variable names")
        elif self.kind == MONOMIAL_CURVE:
            g = self.exponents
            if not g or any(int(x) <= 0 for x in g):
                raise InputError("monomial curve exponents must be positive integers")
            if len(set(g)) != len(g):
                raise InputError("monomial curve exponents must be distinct")
            if math.gcd(*g) != 1:
                raise InputError("monomial curve exponents must have gcd 1")
            object.__setattr__(self, "exponents", tuple(sorted(int(x) for x in g)))
        else:
            raise InputError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def poly_local(cls, *variables: str, field: Field = DEFAULT_FIELD) -> "RingSpec":
        if len(variables) == 1 and not isinstance(variables[0], str):
            variables = tuple(variables[0])
        return cls(POLY_LOCAL, variables=tuple(variables), field=field)

    @classmethod
    def monomial_curve(cls, *exponents: int, field: Field = DEFAULT_FIELD) -> "RingSpec":
        if len(exponents) == 1 and not isinstance(exponents[0], int):
            exponents = tuple(exponents[0])
        return cls(MONOMIAL_CURVE, exponents=tuple(exponents), field=field)

    def with_field(self, field: Field) -> "RingSpec":
        return RingSpec(self.kind, self.variables, self.exponents, field)

    @property
    def is_curve(self) -> bool:
        return self.kind == MONOMIAL_CURVE

    @property
    def element_variables(self) -> tuple[str, ...]:
        """Variables of element polynomials; curves use ``u1..ur`` and ``t``."""
        if self.is_curve:
            return tuple(f"u{i + 1}" for i in range(len(self.exponents))) + ("t",)
        return self.variables

    @property
    def weights(self) -> tuple[int, ...]:
        if self.is_curve:
            return self.exponents + (1,)
        return (1,) * len(self.variables)

    @property
    def window(self) -> int:
        return self.exponents[0] if self.is_curve else 1

    @cached_property
    def conductor(self) -> int:
        """Smallest ``c`` with every integer ``>= c`` in the semigroup (0 for polynomial rings)."""
        if not self.is_curve:
            return 0
        g = self.exponents
        # Apery set of g[0]: a value is past the conductor once g[0]
        # consecutive values are reachable
        reach = [True]
        run, v = 1, 0
        while run < g[0]:
            v += 1
            ok = any(v >= x and reach[v - x] for x in g)
            reach.append(ok)
            run = run + 1 if ok else 0
        return v - g[0] + 1

    def in_semigroup(self, v: int) -> bool:
        if not self.is_curve:
            raise InputError("semigroup queries need a monomial curve")
        if v < 0:
            return False
        if v >= self.conductor:
            return True
        reach = [True] + [False] * v
        for k in range(1, v + 1):
            reach[k] = any(k >= x and reach[k - x] for x in self.exponents)
        return reach[v]

    def semigroup_below(self, n: int) -> list[int]:
        reach = [True] + [False] * max(n - 1, 0)
        for k in range(1, n):
            reach[k] = any(k >= x and reach[k - x] for x in self.exponents)
        return [k for k in range(n) if reach[k]]

    def element(self, text) -> Polynomial:
        """Parse an element; for curves ``u_i`` stands for ``t^g_i`` and ``t`` may appear directly."""
        if isinstance(text, Polynomial):
            if text.variables != self.element_variables or text.field != self.field:
                raise InputError(f"{text!r} is not an element of {self}")
            p = text
        else:
            p = parse(str(text), self.element_variables, self.field)
        if self.is_curve:
            for exp, _ in p.items():
                v = sum(w * e for w, e in zip(self.weights, exp))
                if not self.in_semigroup(v):
                    raise InputError(f"t^{v} is not in the semigroup generated by {self.exponents}")
        return p

    def elements(self, texts) -> tuple[Polynomial, ...]:
        return tuple(self.element(t) for t in texts)

    def level(self, exp) -> int:
        return sum(w * e for w, e in zip(self.weights, exp))

    def order(self, p: Polynomial) -> int:
        """Lowest level of a term (m-adic order for polynomial rings, t-order for curves)."""
        if p.is_zero():
            return -1
        return min(self.level(e) for e, _ in p.items())

    def max_level(self, p: Polynomial) -> int:
        return max((self.level(e) for e, _ in p.items()), default=0)

    def maximal_ideal(self) -> tuple[Polynomial, ...]:
        names = self.element_variables
        gens = names[:-1] if self.is_curve else names
        return tuple(Polynomial.var(v, names, self.field) for v in gens)

    def __str__(self):
        if self.is_curve:
            return f"k[[{', '.join(f't^{g}' for g in self.exponents)}]] over {self.field.name}"
        return f"k[{', '.join(self.variables)}]_(origin) over {self.field.name}"


@dataclass(frozen=True)
class ModuleSpec:
    """The cyclic module ``M = A/J``; an empty ``annihilator`` means ``M = A``."""

    ring: RingSpec
    annihilator: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        ann = tuple(self.ring.element(j) for j in self.annihilator)
        object.__setattr__(self, "annihilator", tuple(j for j in ann if not j.is_zero()))

    @classmethod
    def of(cls, ring: RingSpec, annihilator=()) -> "ModuleSpec":
        return cls(ring, tuple(annihilator))

    def quotient(self, *elements) -> "ModuleSpec":
        """``M / (elements) M`` as the cyclic module ``A / (J + elements)``."""
        return ModuleSpec(self.ring, self.annihilator + tuple(self.ring.element(e) for e in elements))

    @property
    def field(self) -> Field:
        return self.ring.field

    def with_field(self, field: Field) -> "ModuleSpec":
        ring = self.ring.with_field(field)
        return ModuleSpec(ring, tuple(ring.element(str(j)) for j in self.annihilator))


def as_module(spec) -> ModuleSpec:
    return spec if isinstance(spec, ModuleSpec) else ModuleSpec(spec)


# ---------------------------------------------------------------------------
# truncated models

class TruncatedModel:
    """``A/T_N`` with the image of ``J``; the module ``M/T_N M`` is the quotient."""

    def __init__(self, spec: ModuleSpec, N: int, max_dim: int = DEFAULT_MAX_DIM):
        if N < 1:
            raise InputError("truncation order must be at least 1")
        self.spec = spec
        self.ring = spec.ring
        self.field = spec.field
        self.N = N
        ring = self.ring
        if ring.is_curve:
            keys = ring.semigroup_below(N)
            size = len(keys)
        else:
            r = len(ring.variables)
            size = math.comb(N - 1 + r, r)
            if size > max_dim:
                raise MemoryLimitError(f"truncation order {N} needs dimension {size} > budget {max_dim}")
            keys = [e for d in range(N) for e in _monomials_of_degree(r, d)]
        if size > max_dim:
            raise MemoryLimitError(f"truncation order {N} needs dimension {size} > budget {max_dim}")
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)}
        self._mult_cache: dict = {}
        self._shift_cache: dict = {}
        self.J = self.ideal(spec.annihilator) if spec.annihilator else Subspace.zero(self.field, len(keys))

    def __repr__(self):
        return f"TruncatedModel(N={self.N}, ambient={self.ambient}, dim={self.dim})"

    @property
    def ambient(self) -> int:
        return len(self.keys)

    @property
    def dim(self) -> int:
        """``dim_k M/T_N M``."""
        return self.ambient - self.J.dim

    def key_level(self, key) -> int:
        return key if self.ring.is_curve else sum(key)

    @cached_property
    def levels(self) -> list[int]:
        return [self.key_level(k) for k in self.keys]

    @property
    def basis(self) -> list:
        """Standard basis of ``M/T_N M``: ambient keys that are not leading positions of ``J``."""
        piv = set(self.J.pivots)
        return [k for i, k in enumerate(self.keys) if i not in piv]

    def _terms(self, p: Polynomial) -> dict:
        """``{key: coefficient}`` of ``p`` (keys beyond the truncation are dropped)."""
        if p.variables != self.ring.element_variables:
            raise InputError(f"{p} is not an element of {self.ring}")
        if self.ring.is_curve:
            return p.substitute_degree_map(self.ring.weights)
        return p.to_dict()

    def vector(self, p: Polynomial) -> list:
        z = self.field.zero
        v = [z] * self.ambient
        for k, c in self._terms(p).items():
            i = self.index.get(k)
            if i is not None:
                v[i] = v[i] + c
        return v

    def element_of(self, vec) -> Polynomial:
        """Polynomial representative of an ambient vector."""
        names = self.ring.element_variables
        terms = {}
        for k, c in zip(self.keys, vec):
            if c != 0:
                if self.ring.is_curve:
                    exp = (0,) * (len(names) - 1) + (k,)
                else:
                    exp = k
                terms[exp] = c
        return Polynomial(names, self.field, terms)

    def _shift(self, key, by):
        if self.ring.is_curve:
            return key + by
        return tuple(a + b for a, b in zip(key, by))

    def mult_matrix(self, p: Polynomial) -> Matrix:
        """Multiplication by ``p`` on ``A/T_N`` (row convention)."""
        cached = self._mult_cache.get(p)
        if cached is not None:
            return cached
        terms = self._terms(p)
        entries = {}
        idx = self.index
        for i, k in enumerate(self.keys):
            for t, c in terms.items():
                j = idx.get(self._shift(k, t))
                if j is not None:
                    entries[(i, j)] = entries[(i, j)] + c if (i, j) in entries else c
        m = Matrix.from_sparse(self.field, self.ambient, self.ambient, entries)
        self._mult_cache[p] = m
        return m

    def _shift_plan(self, p: Polynomial):
        plan = self._shift_cache.get(p)
        if plan is None:
            plan = []
            idx = self.index
            for t, c in self._terms(p).items():
                src, dst = [], []
                for i, k in enumerate(self.keys):
                    j = idx.get(self._shift(k, t))
                    if j is not None:
                        src.append(i)
                        dst.append(j)
                plan.append((int(c), np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)))
            self._shift_cache[p] = plan
        return plan

    def times(self, rows: Matrix, p: Polynomial) -> Matrix:
        """``rows @ mult_matrix(p)`` computed by shifting columns."""
        if self.field.is_rational:
            return rows @ self.mult_matrix(p)
        q = self.field.characteristic
        a = rows.array
        out = np.zeros_like(a)
        for c, src, dst in self._shift_plan(p):
            out[:, dst] += c * a[:, src]
        return Matrix(self.field, out % q)

    @cached_property
    def generator_matrices(self) -> tuple[Matrix, ...]:
        return tuple(self.mult_matrix(g) for g in self.ring.maximal_ideal())

    def ideal(self, gens: Sequence[Polynomial]) -> Subspace:
        """Image of the ideal generated by ``gens`` (without ``J``)."""
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return Subspace.zero(self.field, self.ambient)
        return Subspace.from_matrix(vstack([self.mult_matrix(g) for g in gens]))

    def ideal_with_J(self, gens: Sequence[Polynomial]) -> Subspace:
        return self.ideal(gens) + self.J

    def level_subspace(self, s: int) -> Subspace:
        """Image of ``T_s`` (basis elements of level ``>= s``)."""
        rows = [i for i, lv in enumerate(self.levels) if lv >= s]
        if not rows:
            return Subspace.zero(self.field, self.ambient)
        return Subspace.from_matrix(Matrix.from_sparse(self.field, len(rows), self.ambient,
                                                       {(r, i): 1 for r, i in enumerate(rows)}))

    def multiply(self, W: Subspace, p: Polynomial) -> Subspace:
        return W.image(self.mult_matrix(p))

    def colon_subspace(self, W: Subspace, a: Polynomial) -> Subspace:
        """``{v : a v in W}``."""
        return Subspace.full(self.field, self.ambient).preimage_under(self.mult_matrix(a), W)

    def certificate_levels(self) -> list[int] | None:
        """Ambient indices that must lie in an ideal to prove ``T_N`` inside it."""
        w = self.ring.window
        if self.N - w < self.ring.conductor:
            return None
        return [i for i, lv in enumerate(self.levels) if self.N - w <= lv < self.N]

    def certifies(self, W: Subspace) -> bool:
        idx = self.certificate_levels()
        if idx is None:
            return False
        if W.is_full():
            return True
        return W.annihilator().select_rows(idx).is_zero()

    def quotient_length(self, W: Subspace) -> int:
        """``dim A/T_N`` minus ``dim W``, i.e. ``l(A/I)`` when ``T_N <= I``."""
        return self.ambient - W.dim


def _monomials_of_degree(r: int, d: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(r), d):
        e = [0] * r
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def build_model(spec, N: int, max_dim: int = DEFAULT_MAX_DIM) -> TruncatedModel:
    return TruncatedModel(as_module(spec), N, max_dim=max_dim)


def ideal_power_subspace(model: TruncatedModel, gens: Sequence[Polynomial], k: int) -> Subspace:
    """Image of ``q^k M`` in ``M/T_N M``, returned as the ambient subspace ``q^k + J``.

    ``k <= 0`` gives the whole space.
    """
    if k <= 0:
        return Subspace.full(model.field, model.ambient)
    cur = model.ideal_with_J(gens)
    for _ in range(k - 1):
        cur = _next_power(model, gens, cur)
    return cur


def _next_power(model: TruncatedModel, gens, prev: Subspace) -> Subspace:
    if prev.dim == 0:
        return prev
    prods = [model.times(prev.basis, g) for g in gens if not g.is_zero()]
    return Subspace.from_matrix(vstack(prods)) + model.J


# ---------------------------------------------------------------------------
# certified chains of powers

_MODELS: "OrderedDict[tuple, TruncatedModel]" = OrderedDict()
_MODEL_CACHE_SIZE = 32


def model_at(spec, N: int, max_dim: int = DEFAULT_MAX_DIM) -> TruncatedModel:
    """Shared :class:`TruncatedModel` of ``M`` at order ``N``."""
    spec = as_module(spec)
    key = (spec, N)
    model = _MODELS.get(key)
    if model is None:
        model = TruncatedModel(spec, N, max_dim)
        _MODELS[key] = model
        if len(_MODELS) > _MODEL_CACHE_SIZE:
            _MODELS.popitem(last=False)
    else:
        _MODELS.move_to_end(key)
    return model


@dataclass
class _Level:
    """``I = q^k + J`` as ``(L, R)``: ``T_L <= I`` and ``R`` spans ``I / T_L``."""

    L: int
    rows: Matrix          # reduced echelon rows over the keys of level < L
    pivots: tuple[int, ...]
    nkeys: int            # number of keys of level < L

    @property
    def length(self) -> int:
        return self.nkeys - len(self.pivots)


@dataclass
class PowerChain:
    """Certified ``q^k + J`` for ``k = 0, 1, ...``, each at its own truncation order.

    ``q + J`` is resolved by increasing the order until the Nakayama
    certificate holds; this gives ``L_1`` with ``T_{L_1} <= q + J``.  If
    ``T_{L_k} <= q^k + J`` then ``T_{L_k + L_1} <= q^{k+1} + J``, so
    ``q^{k+1} + J`` is computed exactly inside ``A/T_{L_k + L_1}`` from
    ``q (q^k + J) + J``.  Its own order ``L_{k+1}`` is one more than the
    highest level not covered by a pivot, and the data is cut back to it.
    """

    spec: ModuleSpec
    gens: tuple[Polynomial, ...]
    n_ceiling: int = DEFAULT_N_CEILING
    max_dim: int = DEFAULT_MAX_DIM
    levels: list = dc_field(default_factory=list)

    def __post_init__(self):
        self.gens = tuple(self.spec.ring.element(g) for g in self.gens)
        if not self.gens or all(g.is_zero() for g in self.gens):
            raise InputError("the ideal needs at least one nonzero generator")
        for g in self.gens:
            if g.constant_term != 0:
                raise InputError(f"generator {g} is a unit; ideals must lie in the maximal ideal")
        self.gens = tuple(g for g in self.gens if not g.is_zero())
        field = self.spec.field
        self.levels = [_Level(0, Matrix.zeros(field, 0, 0), (), 0)]

    @property
    def N(self) -> int:
        """Largest truncation order in use."""
        return max(lv.L for lv in self.levels)

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @property
    def base_level(self) -> int | None:
        return self.levels[1].L if self.top >= 1 else None

    def _model(self, N: int) -> TruncatedModel:
        return model_at(self.spec, N, self.max_dim)

    def _cut(self, model: TruncatedModel, sub: Subspace) -> _Level:
        ring = self.spec.ring
        lv = model.levels
        piv = set(sub.pivots)
        free = [lv[i] for i in range(model.ambient) if i not in piv]
        L = max(free) + 1 if free else 0
        if ring.is_curve:
            L = max(L, ring.conductor)
        L = min(L, model.N)
        nkeys = sum(1 for x in lv if x < L)
        keep = [r for r, c in enumerate(sub.pivots) if c < nkeys]
        rows = sub.basis.select_rows(keep).select_columns(range(nkeys))
        return _Level(L, rows, tuple(sub.pivots[r] for r in keep), nkeys)

    def _base(self) -> _Level:
        ring = self.spec.ring
        w = ring.window
        step = max(2, max(ring.max_level(g) for g in self.gens))
        N = max(max(ring.order(g) for g in self.gens) + w, ring.conductor + w, 1 + w)
        ceiling = self.n_ceiling * (ring.exponents[-1] if ring.is_curve else 1)
        while True:
            model = self._model(N)
            sub = model.ideal_with_J(self.gens)
            if model.certifies(sub):
                return self._cut(model, sub)
            N += step
            if N > ceiling:
                raise NonStabilizing(
                    f"length of M/qM still unresolved at truncation order {N - step}: "
                    f"the ideal is not primary to the maximal ideal on M")

    def _next(self) -> _Level:
        prev, base = self.levels[-1], self.levels[1]
        if prev.L == 0:
            return prev
        model = self._model(prev.L + base.L)
        field = model.field
        n = model.ambient
        pad = Matrix.zeros(field, len(prev.pivots), n - prev.nkeys)
        blocks = []
        if prev.pivots:
            blocks.append(hstack([prev.rows, pad]))
        tail = [i for i in range(prev.nkeys, n)]
        if tail:
            blocks.append(Matrix.from_sparse(field, len(tail), n, {(r, i): 1 for r, i in enumerate(tail)}))
        spanning = vstack(blocks) if blocks else Matrix.zeros(field, 0, n)
        prods = [model.times(spanning, g) for g in self.gens]
        if model.J.dim:
            prods.append(model.J.basis)
        return self._cut(model, Subspace.from_matrix(vstack(prods)))

    def ensure(self, K: int) -> "PowerChain":
        """Make ``q^0..q^K`` available."""
        if K >= 1 and self.top < 1:
            self.levels.append(self._base())
        while self.top < K:
            self.levels.append(self._next())
        return self

    def level(self, k: int) -> int:
        """Certified order ``L_k`` with ``T_{L_k} <= q^k + J``."""
        if k <= 0:
            return 0
        self.ensure(k)
        return self.levels[k].L

    def length(self, k: int) -> int:
        """``l(M / q^k M)``."""
        if k <= 0:
            return 0
        self.ensure(k)
        return self.levels[k].length

    def lengths(self, K: int) -> list[int]:
        self.ensure(K)
        return [self.length(k) for k in range(K + 1)]

    def contains(self, k: int, a: Polynomial) -> bool:
        """Exact test of ``a in q^k + J``."""
        if k <= 0:
            return True
        self.ensure(k)
        lv = self.levels[k]
        if lv.nkeys == 0:
            return True
        vec = self._model(lv.L).vector(self.spec.ring.element(a))
        if not any(x != 0 for x in vec):
            return True
        if not lv.pivots:
            return False
        return Subspace(self.spec.field, lv.nkeys, lv.rows, lv.pivots).contains_vector(vec)

    def power_in(self, model: TruncatedModel, k: int) -> Subspace:
        """Image of ``q^k M`` in ``model``: the subspace ``q^k + J + T_N``."""
        if model.spec != self.spec:
            raise InputError("model belongs to a different module")
        if k <= 0:
            return Subspace.full(model.field, model.ambient)
        self.ensure(k)
        lv = self.levels[k]
        n = model.ambient
        field = model.field
        cols = min(lv.nkeys, n)
        blocks = []
        if lv.pivots:
            rows = lv.rows.select_columns(range(cols))
            blocks.append(hstack([rows, Matrix.zeros(field, rows.nrows, n - cols)]))
        tail = list(range(cols, n))
        if tail:
            blocks.append(Matrix.from_sparse(field, len(tail), n, {(r, i): 1 for r, i in enumerate(tail)}))
        if not blocks:
            return Subspace.zero(field, n)
        return Subspace.from_matrix(vstack(blocks))

    def power(self, k: int, N: int | None = None) -> Subspace:
        """``q^k + J`` inside ``A/T_N`` (default: its own certified order)."""
        return self.power_in(self._model(N if N is not None else max(self.level(k), 1)), k)


_CHAINS: "OrderedDict[tuple, PowerChain]" = OrderedDict()
_CHAIN_CACHE_SIZE = 48


def power_chain(spec, gens, *, n_ceiling: int = DEFAULT_N_CEILING,
                max_dim: int = DEFAULT_MAX_DIM) -> PowerChain:
    """Shared, memoised :class:`PowerChain` for ``(M, q)``."""
    spec = as_module(spec)
    gens = tuple(spec.ring.element(g) for g in gens)
    key = (spec, gens, n_ceiling, max_dim)
    chain = _CHAINS.get(key)
    if chain is None:
        chain = PowerChain(spec, gens, n_ceiling=n_ceiling, max_dim=max_dim)
        _CHAINS[key] = chain
        if len(_CHAINS) > _CHAIN_CACHE_SIZE:
            _CHAINS.popitem(last=False)
    else:
        _CHAINS.move_to_end(key)
    return chain


def clear_cache():
    _CHAINS.clear()
    _MODELS.clear()


def length_of_quotient(spec, gens, k: int = 1, **options) -> int:
    """``l_A(M / q^k M)`` for the ideal ``q`` generated by ``gens``."""
    return power_chain(spec, gens, **options).length(k)


def quotient_operators(spec, q_gens, n: int, elements, **options) -> tuple[list, list[Matrix]]:
    """Multiplication by ``elements`` on the finite-dimensional module ``M/q^n M``.

    Returns the standard basis keys and one square matrix per element, in the
    row convention.  The matrices commute.
    """
    spec = as_module(spec)
    ring = spec.ring
    elements = ring.elements(elements)
    chain = power_chain(spec, q_gens, **options)
    model = model_at(spec, max(chain.level(n), 1), chain.max_dim)
    W = chain.power_in(model, n)
    piv = set(W.pivots)
    free = [i for i in range(model.ambient) if i not in piv]
    field = model.field
    if not free:
        return [], [Matrix.zeros(field, 0, 0) for _ in elements]
    # normal form modulo W: v - v[pivots] @ basis, then read the free columns
    unit = Matrix.from_sparse(field, len(free), model.ambient, {(r, i): 1 for r, i in enumerate(free)})
    pivcols = list(W.pivots)
    ops = []
    for a in elements:
        prod = model.times(unit, a)
        if pivcols:
            prod = prod - prod.select_columns(pivcols) @ W.basis
        ops.append(prod.select_columns(free))
    return [model.keys[i] for i in free], ops


DEFAULT_DEGREE_CEILING = 32


def initial_degree(spec, q_gens, a, *, ceiling: int = DEFAULT_DEGREE_CEILING, **options) -> int:
    """Largest ``c`` with ``a in q^c M``, i.e. the degree of the initial element of ``a`` in ``G_M(q)``.

    Raises :class:`CeilingReached` when ``a`` lies in every power tested.
    """
    spec = as_module(spec)
    a = spec.ring.element(a)
    chain = power_chain(spec, q_gens, **options)
    c = 0
    while chain.contains(c + 1, a):
        c += 1
        if c >= ceiling:
            raise CeilingReached(
                f"{a} lies in q^k M for every k <= {ceiling}; its initial element is zero "
                f"or its degree exceeds the ceiling")
    return c


def colon_subspace(model: TruncatedModel, W: Subspace, a: Polynomial) -> Subspace:
    return model.colon_subspace(W, a)


def annihilator_is_zero(spec, a, *, window: int = 2, n_ceiling: int = DEFAULT_N_CEILING,
                        max_dim: int = DEFAULT_MAX_DIM) -> bool:
    """Whether ``0 :_M a = 0``, i.e. ``a`` is a nonzerodivisor on ``M = A/J``.

    In ``A/T_N`` the colon ``(J + T_N) : a`` always contains truncation debris
    of level ``>= N - ord(a)``.  Modulo ``J + T_{N - delta}`` with
    ``delta = ord(a) + max ord(J)`` that debris vanishes for nonzerodivisors,
    while a genuine zero divisor survives at a fixed level and its multiples
    keep the count positive.  The verdict requires ``window`` consecutive
    truncations to agree.
    """
    spec = as_module(spec)
    ring = spec.ring
    a = ring.element(a)
    if a.is_zero():
        return False
    if a.constant_term != 0:
        return True
    if not spec.annihilator:
        return True
    delta = ring.order(a) + max(ring.max_level(j) for j in spec.annihilator)
    step = max(2, ring.window)
    N = max(delta, ring.max_level(a)) + 2 * step + ring.conductor
    ceiling = n_ceiling * (ring.exponents[-1] if ring.is_curve else 1)
    history = []
    while N <= ceiling:
        model = TruncatedModel(spec, N, max_dim)
        colon = model.colon_subspace(model.J, a)
        floor = model.level_subspace(N - delta) + model.J
        history.append((colon + floor).dim - floor.dim)
        tail = history[-window:]
        if len(tail) == window:
            if all(v == 0 for v in tail):
                return True
            if all(v > 0 for v in tail) and tail == sorted(tail):
                return False
        N += step
    raise NonStabilizing(f"annihilator test did not settle below truncation order {ceiling}: {history}")
