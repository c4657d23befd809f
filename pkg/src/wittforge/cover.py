"""A-covers of rank-1 weight modules.

An element of the coinduced space Hom(A, M) at weight w assigns to each
Laurent mode t^m a vector in the weight-(w+m) space of M. The cover is the
span of the generators psi(e_k, u) with psi(e_k, u)(t^m) = e_{k+m} u; for a
module with polynomial action coefficients these values are quasi-polynomial
in m: a polynomial part per fiber label plus finitely many exceptional
modes. That makes the cover amenable to exact finite linear algebra: fix a
degree bound and the exceptional mode set, and a weight space of the cover
is a subspace of a finite coordinate space.

Degree bounds are not known a priori; interpolations are verified on extra
sample points and grown geometrically up to a ceiling (overridable via the
WITTFORGE_DEGREE_CEILING environment variable). Running out of ceiling
raises InconclusiveError — never a silent wrong answer.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import linalg
from .lie import Rank1Algebra, WnAlgebra
from .modules import (ActionTerm, ModuleError, ModuleVector, PolyWeightModule,
                      act, eval_poly)
from .scalars import PolyContext, PolyScalar, is_zero_scalar, scalar_str


class CoverError(Exception):
    pass


class DegreeBoundError(CoverError):
    """An interpolation failed verification at the current degree bound."""


class InconclusiveError(CoverError):
    """The adaptive degree bound hit its ceiling without stabilizing."""


_MCTX = PolyContext(("m",))


def _require_rank1_concrete(M: PolyWeightModule):
    if isinstance(M.algebra, WnAlgebra) or M.n != 1:
        raise ModuleError("covers are implemented for rank-1 modules")
    if M.param_symbols():
        raise ModuleError("covers need concrete (non-symbolic) parameters")


def base_degree(M: PolyWeightModule) -> int:
    return max((t.poly.total_degree() for t in M.terms), default=0) or 1


def degree_ceiling(initial: int) -> int:
    env = os.environ.get("WITTFORGE_DEGREE_CEILING")
    if env is not None:
        return int(env)
    return 4 * initial


class QuasiPolyVector:
    """Weight-w element of the coinduced space with quasi-polynomial values.

    value(m) is a fiber vector of M at weight offset w+m: per label, the
    polynomial part evaluated at m, except at the explicitly overridden
    modes, where the stored exact value applies.
    """

    __slots__ = ("module", "weight", "poly", "overrides")

    def __init__(self, module: PolyWeightModule, weight: int,
                 poly: Mapping[str, PolyScalar], overrides: Mapping):
        self.module = module
        self.weight = int(weight)
        self.poly = {lab: p for lab, p in poly.items() if not p.is_zero()}
        self.overrides = dict(overrides)

    def override_modes(self) -> set:
        return {m for (m, _lab) in self.overrides}

    def component(self, m: int, lab: str):
        if (m, lab) in self.overrides:
            return self.overrides[(m, lab)]
        p = self.poly.get(lab)
        if p is None:
            return Fraction(0)
        return p.specialize({"m": Fraction(m)})

    def value(self, m: int) -> ModuleVector:
        M = self.module
        out = {}
        for lab in M.fiber:
            c = self.component(m, lab)
            if not is_zero_scalar(c):
                out[((self.weight + m,), lab)] = c
        return ModuleVector(M, out)

    def is_zero(self) -> bool:
        return not self.poly and all(is_zero_scalar(v)
                                     for v in self.overrides.values())

    def __add__(self, other: "QuasiPolyVector") -> "QuasiPolyVector":
        if other.module is not self.module or other.weight != self.weight:
            raise CoverError("mismatched quasi-polynomial vectors")
        poly = dict(self.poly)
        for lab, p in other.poly.items():
            poly[lab] = poly[lab] + p if lab in poly else p
        modes = self.override_modes() | other.override_modes()
        overrides = {}
        for m in modes:
            for lab in self.module.fiber:
                overrides[(m, lab)] = self.component(m, lab) + \
                    other.component(m, lab)
        return QuasiPolyVector(self.module, self.weight, poly, overrides)

    def scale(self, c) -> "QuasiPolyVector":
        return QuasiPolyVector(
            self.module, self.weight,
            {lab: c * p for lab, p in self.poly.items()},
            {k: c * v for k, v in self.overrides.items()})

    def __repr__(self):
        parts = [f"{lab}: {p}" for lab, p in sorted(self.poly.items())]
        ov = {k: scalar_str(v) for k, v in sorted(self.overrides.items())
              if not is_zero_scalar(v)}
        return (f"QuasiPolyVector(w={self.weight}, poly={{{', '.join(parts)}}},"
                f" overrides={ov})")


def _forced_modes(M: PolyWeightModule, w: int) -> set:
    """Modes where the fiber of M at offset w+m is not generic."""
    return {off[0] - w for off in M.exceptional_offsets()}


def _constraint_modes(M: PolyWeightModule, w: int, p: int) -> set:
    """Modes m where some constraint term can fire when the degree-p
    generator acts on the value at offset w+m."""
    out = set()
    for t in M.terms:
        c = t.constraint
        if c is None:
            continue
        cm, cs = c.m_coeffs[0], c.s_coeffs[0]
        if cs == 0:
            continue  # mode-independent; the generic samples see it
        # cm*p + cs*(beta + w + m) == const
        m = (Fraction(c.const) - cm * p - cs * (M.beta[0] + w)) / cs
        if m.denominator == 1:
            out.add(int(m))
    return out


def _interpolate(values: Mapping[int, object]) -> PolyScalar:
    """Exact Lagrange interpolation through the given (mode, value) pairs."""
    mvar = _MCTX.sym("m")
    total = _MCTX.zero()
    nodes = sorted(values)
    for xi in nodes:
        num = _MCTX.const(values[xi])
        den = Fraction(1)
        for xj in nodes:
            if xj == xi:
                continue
            num = num * (mvar - Fraction(xj))
            den = den * Fraction(xi - xj)
        total = total + num * (1 / den)
    return total


def qpv_from_function(M: PolyWeightModule, w: int,
                      fn: Callable[[int], ModuleVector],
                      degree: int, extra_modes: Sequence[int] = (),
                      verify: int = 2) -> QuasiPolyVector:
    """Materialize m |-> fn(m) (a weight-(w+m) vector of M) as a
    QuasiPolyVector, given that it is polynomial of degree <= `degree` away
    from the forced/extra modes. Interpolations are confirmed on `verify`
    additional samples; disagreement raises DegreeBoundError.
    """
    exc = _forced_modes(M, w) | set(extra_modes)
    start = max((abs(m) for m in exc), default=0) + 1
    samples = list(range(start, start + degree + 1 + verify))

    def components(m):
        vec = fn(m)
        out = {lab: Fraction(0) for lab in M.fiber}
        for ((off,), lab), c in vec.terms.items():
            if off != w + m:
                raise CoverError(
                    f"value at mode {m} is not homogeneous of weight offset "
                    f"{w + m}")
            out[lab] = c
        return out

    table = {m: components(m) for m in samples}
    poly = {}
    for lab in M.fiber:
        p = _interpolate({m: table[m][lab] for m in samples[:degree + 1]})
        for m in samples[degree + 1:]:
            got = p.specialize({"m": Fraction(m)})
            if not is_zero_scalar(got - table[m][lab]):
                raise DegreeBoundError(
                    f"degree bound {degree} too small for label {lab!r}")
        poly[lab] = p
    overrides = {}
    for m in sorted(exc):
        comp = components(m)
        for lab in M.fiber:
            overrides[(m, lab)] = comp[lab]
    return QuasiPolyVector(M, w, poly, overrides)


def _adaptive(M: PolyWeightModule, build: Callable[[int], object]):
    """Run `build` with growing degree bounds up to the ceiling."""
    d = base_degree(M) + 2
    ceiling = degree_ceiling(d)
    d = min(d, ceiling)
    while True:
        try:
            return build(d)
        except DegreeBoundError:
            if d >= ceiling:
                raise InconclusiveError(
                    f"degree ceiling {ceiling} reached without a stable "
                    f"interpolation")
            d = min(2 * d, ceiling)


@dataclass(frozen=True)
class PsiGenerator:
    """Descriptor of psi(e_k, u_{j,t}); its cover weight is j + k."""

    k: int
    j: int
    label: str

    @property
    def weight(self) -> int:
        return self.k + self.j

    def __str__(self):
        return f"psi(e[{self.k}], {self.label}[{self.j}])"


def psi_evaluate(M: PolyWeightModule, g: PsiGenerator) -> QuasiPolyVector:
    """psi(e_k, u)(t^m) = e_{k+m} u, materialized."""
    _require_rank1_concrete(M)
    u = M.basis_vector((g.j,), g.label)
    w = g.weight

    def fn(m):
        return act(M.algebra.basis((g.k + m,)), u)

    extra = set()
    for t in M.terms:
        c = t.constraint
        if c is None:
            continue
        cm, cs = c.m_coeffs[0], c.s_coeffs[0]
        if cm == 0:
            continue
        # cm*(k+m) + cs*(beta + j) == const
        m = (Fraction(c.const) - cs * (M.beta[0] + g.j)) / cm - g.k
        if m.denominator == 1:
            extra.add(int(m))
    return _adaptive(M, lambda d: qpv_from_function(M, w, fn, d, extra))


# -- linear algebra over quasi-polynomial coordinates -------------------------


def _common_frame(vectors: Sequence[QuasiPolyVector]):
    """Shared coordinate frame: (degree, fiber label) polynomial slots
    followed by (mode, label) override slots."""
    if not vectors:
        return 0, []
    M = vectors[0].module
    degree = 0
    modes = set()
    for v in vectors:
        for p in v.poly.values():
            degree = max(degree, p.total_degree())
        modes |= v.override_modes()
    return degree, sorted(modes)


def _extend_overrides(v: QuasiPolyVector, modes) -> QuasiPolyVector:
    overrides = dict(v.overrides)
    for m in modes:
        for lab in v.module.fiber:
            overrides.setdefault((m, lab), v.component(m, lab))
    return QuasiPolyVector(v.module, v.weight, v.poly, overrides)


def _coordinates(v: QuasiPolyVector, degree: int, modes) -> list:
    M = v.module
    row = []
    for d in range(degree + 1):
        for lab in M.fiber:
            p = v.poly.get(lab)
            row.append(p.coefficient_of("m", d).constant_value()
                       if p is not None else Fraction(0))
    for m in modes:
        for lab in M.fiber:
            row.append(v.component(m, lab))
    return row


def _from_coordinates(M: PolyWeightModule, w: int, row, degree: int,
                      modes) -> QuasiPolyVector:
    mvar = _MCTX.sym("m")
    poly = {lab: _MCTX.zero() for lab in M.fiber}
    i = 0
    for d in range(degree + 1):
        for lab in M.fiber:
            c = row[i]
            i += 1
            if not is_zero_scalar(c):
                poly[lab] = poly[lab] + _MCTX.const(c) * mvar ** d
    overrides = {}
    for m in modes:
        for lab in M.fiber:
            overrides[(m, lab)] = row[i]
            i += 1
    return QuasiPolyVector(M, w, poly, overrides)


def span_basis(vectors: Sequence[QuasiPolyVector]):
    """Row-echelon basis of the span, with the shared coordinate frame."""
    vectors = [v for v in vectors if not v.is_zero()]
    if not vectors:
        return [], (0, [])
    M = vectors[0].module
    w = vectors[0].weight
    degree, modes = _common_frame(vectors)
    rows = [_coordinates(_extend_overrides(v, modes), degree, modes)
            for v in vectors]
    ech, pivots = linalg.row_echelon(rows)
    basis = [_from_coordinates(M, w, r, degree, modes)
             for r in ech[:len(pivots)]]
    return basis, (degree, modes)


def coords_in_basis(v: QuasiPolyVector, basis, frame):
    """Coefficients of v over the echelon basis, or None if outside."""
    degree, modes = frame
    vdeg, vmodes = _common_frame([v])
    if vdeg > degree or any(m not in modes for m in vmodes):
        # target needs slots the basis does not span
        degree = max(degree, vdeg)
        modes = sorted(set(modes) | set(vmodes))
    rows = [_coordinates(_extend_overrides(b, modes), degree, modes)
            for b in basis]
    target = _coordinates(_extend_overrides(v, modes), degree, modes)
    return linalg.solve_in_span(rows, target)


# -- the cover ----------------------------------------------------------------


@dataclass
class CoverWeightSpace:
    weight: int
    basis: list
    frame: tuple
    witnesses: dict = field(default_factory=dict)  # PsiGenerator -> coords

    @property
    def rank(self) -> int:
        return len(self.basis)


class CoverModule:
    """Finite per-weight bases of the A-cover of a rank-1 module."""

    def __init__(self, M: PolyWeightModule):
        _require_rank1_concrete(M)
        self.module = M
        self.spaces: dict = {}

    def weight_space(self, w: int) -> CoverWeightSpace:
        if w not in self.spaces:
            self.spaces[w] = cover_basis(self.module, w)
        return self.spaces[w]

    def rank(self, w: int) -> int:
        return self.weight_space(w).rank


def _generator_pool(M: PolyWeightModule, w: int) -> list:
    """The psi generators whose span is provably the full weight-w space:
    degree+1 consecutive generic j (Vandermonde-extraction of the polynomial
    coefficient family) plus every exceptional j."""
    d = base_degree(M)
    exc_offsets = sorted(off[0] for off in M.exceptional_offsets())
    start = max((abs(j) for j in exc_offsets), default=0) + 1
    js = list(range(start, start + d + 2)) + exc_offsets
    gens = []
    for j in js:
        for lab in M.labels_at((j,)):
            gens.append(PsiGenerator(w - j, j, lab))
    return gens


def cover_basis(M: PolyWeightModule, w: int) -> CoverWeightSpace:
    gens = _generator_pool(M, w)
    vectors = [psi_evaluate(M, g) for g in gens]
    basis, frame = span_basis(vectors)
    space = CoverWeightSpace(w, basis, frame)
    for g, v in zip(gens, vectors):
        coords = coords_in_basis(v, basis, frame)
        if coords is None:
            raise CoverError(f"generator {g} escaped its own span")
        space.witnesses[g] = coords
    return space


# -- induced action ------------------------------------------------------------


def lie_action(theta: QuasiPolyVector, p: int) -> QuasiPolyVector:
    """(e_p theta)(t^m) = e_p(theta(t^m)) - m * theta(t^{m+p})."""
    M = theta.module
    w = theta.weight

    def fn(m):
        first = act(M.algebra.basis((p,)), theta.value(m))
        second = theta.value(m + p).scale(Fraction(m))
        return first - second

    extra = set()
    for m0 in theta.override_modes():
        extra.add(m0)
        extra.add(m0 - p)
    for m0 in _constraint_modes(M, w + p, p):
        extra.add(m0)
    deg_hint = base_degree(M) + max(
        (pp.total_degree() for pp in theta.poly.values()), default=0) + 1

    def build(d):
        return qpv_from_function(M, w + p, fn, max(d, deg_hint), extra)

    return _adaptive(M, build)


def a_action(theta: QuasiPolyVector, p: int) -> QuasiPolyVector:
    """(t^p theta)(t^m) = theta(t^{m+p})."""
    M = theta.module
    poly = {}
    mvar = _MCTX.sym("m")
    for lab, q in theta.poly.items():
        poly[lab] = q.substitute({"m": mvar + Fraction(p)})
    overrides = {(m - p, lab): v for (m, lab), v in theta.overrides.items()}
    return QuasiPolyVector(M, theta.weight + p, poly, overrides)


def pi_map(theta: QuasiPolyVector) -> ModuleVector:
    """Evaluation at the unit function (mode 0)."""
    return theta.value(0)


@dataclass
class ActionMatrices:
    """Induced action of e_p and t^p from weight w to weight w+p, columns
    over the weight-w basis, rows over the weight-(w+p) basis."""

    p: int
    weight: int
    lie_matrix: list
    a_matrix: list


def induced_action(C: CoverModule, p: int, w: int) -> ActionMatrices:
    src = C.weight_space(w)
    tgt = C.weight_space(w + p)
    lie_cols, a_cols = [], []
    for b in src.basis:
        eb = lie_action(b, p)
        coords = coords_in_basis(eb, tgt.basis, tgt.frame)
        if coords is None:
            raise CoverError(
                f"e_{p} image of a weight-{w} basis vector is outside the "
                f"weight-{w + p} cover basis")
        lie_cols.append(coords)
        tb = a_action(b, p)
        coords = coords_in_basis(tb, tgt.basis, tgt.frame)
        if coords is None:
            raise CoverError(
                f"t^{p} image of a weight-{w} basis vector is outside the "
                f"weight-{w + p} cover basis")
        a_cols.append(coords)
    return ActionMatrices(p, w, lie_cols, a_cols)


@dataclass
class CuspidalityCertificate:
    module: str
    window: list
    ranks: dict
    uniform: bool
    a_action_invertible: bool
    failing_weight: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": "cuspidality",
            "module": self.module,
            "window": list(self.window),
            "ranks": {str(w): r for w, r in sorted(self.ranks.items())},
            "uniform_rank": self.uniform,
            "a_action_invertible": self.a_action_invertible,
            "failing_weight": self.failing_weight,
            "passed": self.uniform and self.a_action_invertible,
        }


def cuspidality_certificate(C: CoverModule, window: Sequence[int]
                            ) -> CuspidalityCertificate:
    window = sorted(window)
    ranks = {w: C.rank(w) for w in window}
    uniform = len(set(ranks.values())) == 1
    cert = CuspidalityCertificate(C.module.name or repr(C.module),
                                  window, ranks, uniform, True)
    if not uniform:
        vals = list(ranks.values())
        for w in window:
            if ranks[w] != vals[0]:
                cert.failing_weight = w
                break
        cert.a_action_invertible = False
        return cert
    for w in window[:-1]:
        mats = induced_action(C, 1, w)
        if linalg.rank(mats.a_matrix) != ranks[w]:
            cert.a_action_invertible = False
            cert.failing_weight = w
            break
    return cert


def pi_surjectivity_check(C: CoverModule, w: int, kbox: int = 4) -> dict:
    """Compare the rank of pi on the weight-w cover basis against the rank
    of the algebra's action landing in the weight-w space of M."""
    M = C.module
    space = C.weight_space(w)
    labels = list(M.fiber)

    def as_row(vec: ModuleVector):
        return [vec.terms.get(((w,), lab), Fraction(0)) for lab in labels]

    pi_rows = [as_row(pi_map(b)) for b in space.basis]
    pi_rank = linalg.rank(pi_rows) if pi_rows else 0
    act_rows = []
    for k in range(-kbox, kbox + 1):
        for lab in M.labels_at((w - k,)):
            v = act(M.algebra.basis((k,)), M.basis_vector((w - k,), lab))
            act_rows.append(as_row(v))
    act_rank = linalg.rank(act_rows) if act_rows else 0
    return {"weight": w, "pi_rank": pi_rank, "action_rank": act_rank,
            "surjective_onto_action": pi_rank >= act_rank}


def pi_homomorphism_check(C: CoverModule, w: int, pbox: int = 2) -> bool:
    """pi(e_p . c) == e_p . pi(c) on every basis vector of the weight-w
    space, for |p| <= pbox."""
    M = C.module
    space = C.weight_space(w)
    for p in range(-pbox, pbox + 1):
        for b in space.basis:
            lhs = pi_map(lie_action(b, p))
            rhs = act(M.algebra.basis((p,)), pi_map(b))
            if lhs != rhs:
                return False
    return True


# -- emission as a weight module ------------------------------------------------


def _bivariate_interpolate(samples: Mapping, dm: int, ds: int,
                           ctx: PolyContext) -> PolyScalar:
    """Exact interpolation of f(p, w) on a (dm+1) x (ds+1) grid of samples,
    keyed (p, w); extra samples are used as verification points."""
    mvar, svar = ctx.sym("m"), ctx.sym("s")
    ps = sorted({p for p, _ in samples})
    ws = sorted({w for _, w in samples})
    grid_p, grid_w = ps[:dm + 1], ws[:ds + 1]
    total = ctx.zero()
    for pi in grid_p:
        for wi in grid_w:
            num = ctx.const(samples[(pi, wi)])
            den = Fraction(1)
            for pj in grid_p:
                if pj != pi:
                    num = num * (mvar - Fraction(pj))
                    den = den * Fraction(pi - pj)
            for wj in grid_w:
                if wj != wi:
                    num = num * (svar - Fraction(wj))
                    den = den * Fraction(wi - wj)
            total = total + num * (1 / den)
    for (p, w), val in samples.items():
        got = total.specialize({"m": Fraction(p), "s": Fraction(w)})
        if not is_zero_scalar(got - val):
            raise DegreeBoundError(
                f"induced action entry is not polynomial of degree "
                f"({dm},{ds}) at sample ({p},{w})")
    return total


def emit_induced_module(C: CoverModule, degree: int | None = None,
                        verify: int = 2) -> PolyWeightModule:
    """Package the induced Lie action as a PolyWeightModule with fiber
    b1..br: entries are interpolated in (generator exponent, weight) on a
    sample grid away from the source module's exceptional weights and
    verified on the spare samples."""
    M = C.module
    d = degree if degree is not None else base_degree(M) + 2
    ceiling = degree_ceiling(d)
    while True:
        try:
            return _emit_at_degree(C, d, verify)
        except DegreeBoundError:
            if d >= ceiling:
                raise InconclusiveError(
                    f"induced action not polynomial up to the degree "
                    f"ceiling {ceiling}")
            d = min(2 * d, ceiling)


def _emit_at_degree(C: CoverModule, d: int, verify: int) -> PolyWeightModule:
    M = C.module
    exc = sorted(abs(off[0]) for off in M.exceptional_offsets())
    start = (exc[-1] if exc else 0) + 1 + d + verify
    ws = list(range(start, start + d + 1 + verify))
    ps = list(range(-(d // 2) - 1, d // 2 + d % 2 + 1 + verify))
    rank = C.rank(ws[0])
    labels = tuple(f"b{i+1}" for i in range(rank))
    samples = {(i, jj): {} for i in range(rank) for jj in range(rank)}
    for w in ws:
        if C.rank(w) != rank:
            raise CoverError(f"rank changes inside the sampling window at {w}")
        for p in ps:
            mats = induced_action(C, p, w)
            for isrc in range(rank):
                for itgt in range(rank):
                    samples[(isrc, itgt)][(p, w)] = \
                        mats.lie_matrix[isrc][itgt]
    ctx = PolyContext(("m", "s"))
    terms = []
    for isrc in range(rank):
        for itgt in range(rank):
            poly = _bivariate_interpolate(samples[(isrc, itgt)], d, d, ctx)
            if not poly.is_zero():
                terms.append(ActionTerm(1, labels[isrc], labels[itgt], poly))
    return PolyWeightModule(M.algebra, M.beta, labels, terms,
                            name=f"cover({M.name})" if M.name else "cover")


# -- pairing with the dual cover -------------------------------------------------


def dual_pairing(xi: ModuleVector, v: ModuleVector):
    """Pairing of a graded-dual vector (at dual offset j) with a module
    vector (at offset -j), label against label."""
    total = Fraction(0)
    for ((j,), lab), c in xi.terms.items():
        other = v.terms.get(((-j,), lab))
        if other is not None:
            total = total + c * other
    return total


def pi_star_check(M: PolyWeightModule, dual: PolyWeightModule,
                  samples: int = 100, seed: int = 0, box: int = 4) -> dict:
    """The dual of pi: pi*(u) pairs with psi(e_k, xi) as xi(e_k u). Checks
    the homomorphism identity <pi*(e_p u), psi(e_k, xi)> =
    -<pi*(u), e_p psi(e_k, xi)> on random samples, and that pi*(u) = 0
    exactly when the algebra kills u over the probe window."""
    import random
    rng = random.Random(seed)

    def pair_pistar(u: ModuleVector, k: int, xi: ModuleVector):
        return dual_pairing(xi, act(M.algebra.basis((k,)), u))

    failures = []
    checked = 0
    for _ in range(samples):
        p = rng.randint(-box, box)
        k = rng.randint(-box, box)
        ju = rng.randint(-box, box)
        jxi = rng.randint(-box, box)
        labs_u = M.labels_at((ju,))
        labs_xi = dual.labels_at((jxi,))
        if not labs_u or not labs_xi:
            continue
        u = M.basis_vector((ju,), rng.choice(labs_u))
        xi = dual.basis_vector((jxi,), rng.choice(labs_xi))
        lhs = pair_pistar(act(M.algebra.basis((p,)), u), k, xi)
        # e_p psi(e_k, xi) = (k - p) psi(e_{k+p}, xi) + psi(e_k, e_p xi)
        rhs = -(Fraction(k - p) * pair_pistar(u, k + p, xi)
                + pair_pistar(u, k, act(dual.algebra.basis((p,)), xi)))
        checked += 1
        if not is_zero_scalar(lhs - rhs):
            failures.append((p, k, ju, jxi, scalar_str(lhs - rhs)))

    kernel_rows = []
    for j in range(-2, 3):
        for lab in M.labels_at((j,)):
            u = M.basis_vector((j,), lab)
            killed = all(act(M.algebra.basis((k,)), u).is_zero()
                         for k in range(-box, box + 1))
            vanishes = True
            for k in range(-box, box + 1):
                v = act(M.algebra.basis((k,)), u)
                for jxi in range(-box - 3, box + 4):
                    for xl in dual.labels_at((jxi,)):
                        if not is_zero_scalar(
                                dual_pairing(dual.basis_vector((jxi,), xl), v)):
                            vanishes = False
                            break
                    if not vanishes:
                        break
                if not vanishes:
                    break
            kernel_rows.append({"offset": j, "label": lab,
                                "algebra_kills": killed,
                                "pi_star_zero": vanishes})
    kernel_ok = all(r["algebra_kills"] == r["pi_star_zero"]
                    for r in kernel_rows)
    return {"checked": checked, "failures": failures,
            "kernel_rows": kernel_rows,
            "passed": not failures and kernel_ok}


# -- the adjoint-module cover in closed-form coordinates ------------------------


def expand_in_family(v: QuasiPolyVector, family: Sequence[QuasiPolyVector]):
    """Coefficients of v over an arbitrary (not necessarily echelon) family,
    or None if v is outside its span."""
    deg, modes = _common_frame(list(family) + [v])
    rows = [_coordinates(_extend_overrides(b, modes), deg, modes)
            for b in family]
    target = _coordinates(_extend_overrides(v, modes), deg, modes)
    return linalg.solve_in_span(rows, target)


def adjoint_cover_frame(V: PolyWeightModule, j: int) -> list:
    """The closed-form weight-j frame (tau_j, theta_j, eta_j) of the cover
    of the two-label central-extension preset:

        tau_j(t^m) = (j+m) u_{j+m},  theta_j(t^m) = u_{j+m},
        eta_j(t^m) = [j+m=0] z.
    """
    tau = qpv_from_function(
        V, j, lambda m: V.basis_vector((j + m,), "u").scale(Fraction(j + m)),
        2, ())
    theta = qpv_from_function(V, j, lambda m: V.basis_vector((j + m,), "u"),
                              2, ())
    eta = qpv_from_function(
        V, j,
        lambda m: V.basis_vector((0,), "z") if j + m == 0 else V.vector({}),
        2, ())
    return [tau, theta, eta]


def adjoint_cover_report(V: PolyWeightModule, pbox: int = 3, jbox: int = 3
                         ) -> dict:
    """Induced action and pi values of the adjoint-module cover in the
    (tau, theta, eta) frame; entries are exact coefficient triples."""
    rows = []
    ok = True
    for p in range(-pbox, pbox + 1):
        for j in range(-jbox, jbox + 1):
            frame_tgt = adjoint_cover_frame(V, j + p)
            frame_src = adjoint_cover_frame(V, j)
            coeffs = [expand_in_family(lie_action(b, p), frame_tgt)
                      for b in frame_src]
            expected = [
                [Fraction(j - 2 * p), Fraction(2 * p * p), Fraction(-p ** 4)],
                [Fraction(0), Fraction(j - p), Fraction(p ** 3)],
                [Fraction(0), Fraction(0), Fraction(j + p)],
            ]
            match = [list(c) if c is not None else None for c in coeffs] \
                == expected
            ok = ok and match
            rows.append({"p": p, "j": j, "match": match,
                         "coeffs": [[str(x) for x in c] if c else None
                                    for c in coeffs]})
    pi_ok = True
    for j in range(-jbox, jbox + 1):
        tau, theta, eta = adjoint_cover_frame(V, j)
        pi_ok = pi_ok and pi_map(tau) == V.basis_vector((j,), "u").scale(
            Fraction(j))
        pi_ok = pi_ok and pi_map(theta) == V.basis_vector((j,), "u")
        expected_eta = V.basis_vector((0,), "z") if j == 0 else V.vector({})
        pi_ok = pi_ok and pi_map(eta) == expected_eta
    return {"kind": "adjoint_cover", "action_match": ok, "pi_match": pi_ok,
            "rows": rows, "passed": ok and pi_ok}
