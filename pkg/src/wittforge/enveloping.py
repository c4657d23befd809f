"""Universal enveloping algebra of the rank-1 family: free tensor
expressions, PBW normal forms, differentiators, and the quadratic
differentiator identities.

Monomials are flat tuples of lattice points; normal form sorts them into
nondecreasing lattice order via the rewriting rule

    e_y e_x  ->  e_x e_y + phi(x - y) e_{x+y}      (when y > x).

Normal forms are cached per (algebra, strategy); with concrete integer
indices this makes exhaustive grid sweeps cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from .lie import (AlgebraError, Rank1Algebra, add_points, scale_point,
                  sub_points, symbolic_witt_algebra, witt_algebra,
                  solenoidal_algebra, IndexLattice)
from .scalars import PolyContext, is_zero_scalar, scalar_str

Monomial = tuple  # tuple of lattice points (each a tuple of ints)


class UEAElement:
    """Finite scalar combination of monomials in the generators e_x."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Rank1Algebra, terms: dict):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if not is_zero_scalar(c)}

    def _check(self, other: "UEAElement"):
        if other.algebra != self.algebra:
            raise AlgebraError("elements belong to different algebras")

    def __add__(self, other: "UEAElement") -> "UEAElement":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return UEAElement(self.algebra, terms)

    def __neg__(self):
        return UEAElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "UEAElement":
        if is_zero_scalar(c):
            return UEAElement(self.algebra, {})
        return UEAElement(self.algebra, {m: c * v for m, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, UEAElement) and other.algebra == self.algebra
                and other.terms == self.terms)

    def __repr__(self):
        if not self.terms:
            return "UEA(0)"
        parts = []
        for m in sorted(self.terms):
            name = "".join(f"e[{','.join(map(str, pt))}]" for pt in m) or "1"
            parts.append(f"({scalar_str(self.terms[m])})*{name}")
        return "UEA(" + " + ".join(parts) + ")"


def generator(algebra: Rank1Algebra, point) -> UEAElement:
    return UEAElement(algebra, {(tuple(point),): 1})


def one(algebra: Rank1Algebra) -> UEAElement:
    return UEAElement(algebra, {(): 1})


def multiply(x: UEAElement, y: UEAElement) -> UEAElement:
    """Free (concatenation) product; the result is generally not normal."""
    x._check(y)
    terms: dict = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            m = mx + my
            terms[m] = terms.get(m, 0) + cx * cy
    return UEAElement(x.algebra, terms)


def anticommutator(x: UEAElement, y: UEAElement) -> UEAElement:
    """{x, y} = xy + yx, in PBW normal form."""
    return pbw_normal_form(multiply(x, y) + multiply(y, x))


# Per-(algebra, strategy) monomial normal-form caches. Algebras are frozen
# and hashable; grid sweeps reuse entries heavily across tuples.
_NF_CACHE: dict = {}


def _find_descent(mono: Monomial, strategy: str):
    n = len(mono)
    if strategy == "leftmost":
        for i in range(n - 1):
            if mono[i] > mono[i + 1]:
                return i
        return None
    for i in range(n - 2, -1, -1):
        if mono[i] > mono[i + 1]:
            return i
    return None


def _nf_monomial(algebra: Rank1Algebra, mono: Monomial, strategy: str) -> dict:
    cache = _NF_CACHE.setdefault((algebra, strategy), {})

    def rec(m: Monomial) -> dict:
        hit = cache.get(m)
        if hit is not None:
            return hit
        i = _find_descent(m, strategy)
        if i is None:
            res = {m: 1}
        else:
            y, x = m[i], m[i + 1]
            swapped = m[:i] + (x, y) + m[i + 2:]
            merged = m[:i] + (add_points(x, y),) + m[i + 2:]
            coeff = algebra.phi(sub_points(x, y))
            res = dict(rec(swapped))
            if not is_zero_scalar(coeff):
                for mm, cc in rec(merged).items():
                    res[mm] = res.get(mm, 0) + coeff * cc
            res = {mm: cc for mm, cc in res.items() if not is_zero_scalar(cc)}
        cache[m] = res
        return res

    return rec(mono)


def pbw_normal_form(x: UEAElement, strategy: str = "leftmost") -> UEAElement:
    """Unique PBW normal form (nondecreasing monomials).

    The default strategy fixes the leftmost descent; 'rightmost' is kept as
    an independent route for confluence testing.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise AlgebraError(f"unknown strategy {strategy!r}")
    terms: dict = {}
    for m, c in x.terms.items():
        for mm, cc in _nf_monomial(x.algebra, m, strategy).items():
            val = terms.get(mm, 0) + c * cc
            terms[mm] = val
    return UEAElement(x.algebra, terms)


def differentiator(algebra: Rank1Algebra, m: int, k, s, h=None) -> UEAElement:
    """The m-th difference derivative of e_k e_s:

        sum_{i=0..m} (-1)^i C(m,i) e_{k - i h} e_{s + i h}

    with step h defaulting to the first lattice generator.
    """
    if m < 0:
        raise AlgebraError("differentiator order must be nonnegative")
    k, s = tuple(k), tuple(s)
    if h is None:
        h = tuple(int(j == 0) for j in range(algebra.lattice.rank))
    else:
        h = tuple(h)
    terms: dict = {}
    for i in range(m + 1):
        mono = (sub_points(k, scale_point(i, h)), add_points(s, scale_point(i, h)))
        terms[mono] = terms.get(mono, 0) + (-1) ** i * comb(m, i)
    return UEAElement(algebra, terms)


@dataclass
class IdentityRecord:
    mode: str
    m: int
    r: int
    tuple_values: tuple | None
    h: tuple | None
    residue_term_count: int
    passed: bool

    def to_json(self) -> dict:
        out = {"mode": self.mode, "m": self.m, "r": self.r,
               "residue_term_count": self.residue_term_count, "pass": self.passed}
        if self.tuple_values is not None:
            out["tuple"] = list(self.tuple_values)
        if self.h is not None:
            out["h"] = list(self.h)
        return out


@dataclass
class IdentityReport:
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


def _identity_lhs(algebra, m, r, k, s, p, q, h=None) -> UEAElement:
    """Double alternating sum of anticommutator differences of
    differentiators (the left side of the quadratic identity)."""
    if h is None:
        h = tuple(int(j == 0) for j in range(algebra.lattice.rank))
    total = UEAElement(algebra, {})
    for i in range(m + 1):
        for j in range(r + 1):
            sign = (-1) ** (i + j) * comb(m, i) * comb(r, j)
            ih, jh = scale_point(i, h), scale_point(j, h)
            om1 = differentiator(algebra, m, sub_points(k, ih), sub_points(s, jh), h)
            om2 = differentiator(algebra, r, add_points(q, ih), add_points(p, jh), h)
            om3 = differentiator(algebra, m, sub_points(k, ih), sub_points(q, jh), h)
            om4 = differentiator(algebra, r, add_points(s, ih), add_points(p, jh), h)
            part = (multiply(om1, om2) + multiply(om2, om1)
                    - multiply(om3, om4) - multiply(om4, om3))
            total = total + part.scale(sign)
    return total


def _identity_rhs(algebra, m, r, k, s, p, q, h=None) -> UEAElement:
    """(q-s) ( (p-k+2rh) Omega^{(2m+2r-1)}_{k+p+2rh, s+q-2rh}
               - (p-k+2mh) Omega^{(2m+2r-1)}_{k+p+(2r-1)h, s+q-(2r-1)h} )."""
    if h is None:
        h = tuple(int(j == 0) for j in range(algebra.lattice.rank))
    phi = algebra.phi
    qs = phi(sub_points(q, s))
    pk = sub_points(p, k)
    c1 = phi(add_points(pk, scale_point(2 * r, h)))
    c2 = phi(add_points(pk, scale_point(2 * m, h)))
    o1 = differentiator(algebra, 2 * m + 2 * r - 1,
                        add_points(add_points(k, p), scale_point(2 * r, h)),
                        sub_points(add_points(s, q), scale_point(2 * r, h)), h)
    o2 = differentiator(algebra, 2 * m + 2 * r - 1,
                        add_points(add_points(k, p), scale_point(2 * r - 1, h)),
                        sub_points(add_points(s, q), scale_point(2 * r - 1, h)), h)
    return (o1.scale(c1) - o2.scale(c2)).scale(qs)


def _intro_rhs(algebra, m, k, s, p, q) -> UEAElement:
    """(q-s)(p-k+2m) Omega^{(4m)}_{k+p+2m, s+q-2m} (the m = r special form)."""
    h = tuple(int(j == 0) for j in range(algebra.lattice.rank))
    phi = algebra.phi
    qs = phi(sub_points(q, s))
    c = phi(add_points(sub_points(p, k), scale_point(2 * m, h)))
    o = differentiator(algebra, 4 * m,
                       add_points(add_points(k, p), scale_point(2 * m, h)),
                       sub_points(add_points(s, q), scale_point(2 * m, h)), h)
    return o.scale(qs * c)


def verify_key_identity(m: int, r: int, mode: str = "symbolic",
                        grid_range: tuple = (-2, 2),
                        intro_form: bool = False) -> IdentityReport:
    """Check the quadratic differentiator identity.

    symbolic mode works over the lattice with formal generators k,s,p,q and
    polynomial coefficients in the same symbols; grid mode sweeps concrete
    integer tuples (catching the degenerate index collisions that generic
    symbolic ordering excludes). With intro_form=True (requires m == r) the
    right side is the single-term specialization with Omega^{(4m)}.
    """
    if m < 2 or r < 2:
        raise AlgebraError("the identity requires m, r >= 2")
    if intro_form and m != r:
        raise AlgebraError("the single-term form requires m == r")
    report = IdentityReport()
    if mode == "symbolic":
        alg = symbolic_witt_algebra(("k", "s", "p", "q"))
        lat = alg.lattice
        k, s, p, q = (lat.generator(n) for n in ("k", "s", "p", "q"))
        lhs = _identity_lhs(alg, m, r, k, s, p, q)
        rhs = (_intro_rhs(alg, m, k, s, p, q) if intro_form
               else _identity_rhs(alg, m, r, k, s, p, q))
        residue = pbw_normal_form(lhs - rhs)
        report.records.append(IdentityRecord(
            mode="symbolic", m=m, r=r, tuple_values=None, h=None,
            residue_term_count=len(residue.terms), passed=residue.is_zero()))
    elif mode == "grid":
        alg = witt_algebra()
        lo, hi = grid_range
        values = range(lo, hi + 1)
        for kv, sv, pv, qv in itertools.product(values, repeat=4):
            k, s, p, q = (kv,), (sv,), (pv,), (qv,)
            lhs = _identity_lhs(alg, m, r, k, s, p, q)
            rhs = (_intro_rhs(alg, m, k, s, p, q) if intro_form
                   else _identity_rhs(alg, m, r, k, s, p, q))
            residue = pbw_normal_form(lhs - rhs)
            report.records.append(IdentityRecord(
                mode="grid", m=m, r=r, tuple_values=(kv, sv, pv, qv), h=None,
                residue_term_count=len(residue.terms), passed=residue.is_zero()))
    else:
        raise AlgebraError(f"unknown mode {mode!r}")
    return report


def verify_solenoidal_identity(m: int, r: int, n: int = 2,
                               h_box: int = 2) -> IdentityReport:
    """Solenoidal variant: symbolic mu in C^n (generic), formal k,s,p,q in
    Gamma_mu, and the step h ranging over lattice points with sup-norm at
    most h_box."""
    if m < 2 or r < 2:
        raise AlgebraError("the identity requires m, r >= 2")
    mu_names = tuple(f"mu{i+1}" for i in range(n))
    ctx = PolyContext(("k", "s", "p", "q") + mu_names)
    names = ("k", "s", "p", "q") + tuple(f"a{i+1}" for i in range(n))
    phi = tuple(ctx.sym(x) for x in ("k", "s", "p", "q")) + tuple(
        ctx.sym(x) for x in mu_names)
    alg = Rank1Algebra(IndexLattice(names), phi)
    lat = alg.lattice
    k, s, p, q = (lat.generator(x) for x in ("k", "s", "p", "q"))
    report = IdentityReport()
    for hvec in itertools.product(range(-h_box, h_box + 1), repeat=n):
        h = (0, 0, 0, 0) + hvec
        lhs = _identity_lhs(alg, m, r, k, s, p, q, h)
        rhs = _identity_rhs(alg, m, r, k, s, p, q, h)
        residue = pbw_normal_form(lhs - rhs)
        report.records.append(IdentityRecord(
            mode="solenoidal", m=m, r=r, tuple_values=None, h=hvec,
            residue_term_count=len(residue.terms), passed=residue.is_zero()))
    return report
