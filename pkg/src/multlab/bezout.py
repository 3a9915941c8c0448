"""Local intersection numbers of plane curves at the origin."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CommonComponent, InputError, NotAtOrigin, PropertyViolation
from .forms import tangent_multiplicity
from .localmodel import POLY_LOCAL, RingSpec, length_of_quotient
from .poly import Polynomial, poly_gcd

PLANE = RingSpec(POLY_LOCAL, ("x", "y"))


def _plane(ring):
    ring = ring or PLANE
    if ring.is_curve or len(ring.variables) != 2:
        raise InputError("plane curves live in a polynomial ring in two variables")
    return ring


def _check_pair(f: Polynomial, g: Polynomial):
    for h in (f, g):
        if h.is_zero():
            raise CommonComponent("the zero equation contains every curve")
        if h.constant_term != 0:
            raise NotAtOrigin(f"{h} does not vanish at the origin")
    h = poly_gcd(f, g)
    if h.degree() > 0 and h.constant_term == 0:
        raise CommonComponent(f"f and g share the component {h} through the origin")


def intersection_multiplicity(f, g, ring: RingSpec | None = None, **options) -> int:
    """``mu = l(A/(f, g))`` in the local ring of the plane at the origin."""
    ring = _plane(ring)
    f, g = ring.element(f), ring.element(g)
    _check_pair(f, g)
    return length_of_quotient(ring, (f, g), **options)


@dataclass(frozen=True)
class BezoutReport:
    f: Polynomial
    g: Polynomial
    c: int
    d: int
    mu: int
    t: int

    @property
    def transversal(self) -> bool:
        return self.t == 0

    @property
    def bound(self) -> int:
        return self.c * self.d + self.t

    @property
    def equality(self) -> bool:
        return self.mu == self.bound

    def as_dict(self) -> dict:
        return {"f": str(self.f), "g": str(self.g), "c": self.c, "d": self.d, "mu": self.mu,
                "t": self.t, "transversal": self.transversal, "bound": self.bound,
                "equality": self.equality}


def classify(f, g, ring: RingSpec | None = None, **options) -> BezoutReport:
    """Intersection number, tangent count and the ``cd + t`` bound, with its checks."""
    ring = _plane(ring)
    f, g = ring.element(f), ring.element(g)
    mu = intersection_multiplicity(f, g, ring, **options)
    rep = BezoutReport(f, g, f.order(), g.order(), mu, tangent_multiplicity(f, g, ring))
    cd = rep.c * rep.d
    if rep.transversal and mu != cd:
        raise PropertyViolation(f"transversal pair with mu = {mu} != cd = {cd}")
    if mu < rep.bound:
        raise PropertyViolation(f"mu = {mu} below cd + t = {rep.bound}")
    return rep
