from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wittforge.scalars import (ContextMismatchError, MissingSymbolError,
                               PolyContext, QuadExtScalar, format_rational,
                               parse_poly, parse_rational, parse_scalar)

CTX = PolyContext(("a", "b", "c"))


def rationals():
    return st.fractions(min_value=-50, max_value=50, max_denominator=7)


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)),
        rationals(), max_size=4))
    from wittforge.scalars import PolyScalar
    return PolyScalar(CTX, terms)


class TestRationals:
    def test_format_round_trip(self):
        for x in [Fraction(0), Fraction(3), Fraction(-7, 2), Fraction(22, 7)]:
            assert parse_rational(format_rational(x)) == x


class TestQuadExt:
    def test_conjugate_product(self):
        a = QuadExtScalar(Fraction(7, 2), Fraction(-1, 2), 19)
        b = QuadExtScalar(Fraction(7, 2), Fraction(1, 2), 19)
        assert a * b == QuadExtScalar(Fraction(15, 2), 0, 19)

    def test_inverse(self):
        x = QuadExtScalar(Fraction(3), Fraction(2), 19)
        assert x * (1 / x) == QuadExtScalar(1, 0, 19)

    def test_mixed_field_ops(self):
        x = QuadExtScalar(1, 1, 19)
        assert x + Fraction(1, 2) == QuadExtScalar(Fraction(3, 2), 1, 19)
        assert Fraction(2) * x == QuadExtScalar(2, 2, 19)

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            1 / QuadExtScalar(0, 0, 19)


class TestPolyRing:
    @settings(max_examples=60, deadline=None)
    @given(polys(), polys(), polys())
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r

    @settings(max_examples=40, deadline=None)
    @given(polys(), polys())
    def test_specialize_is_a_homomorphism(self, p, q):
        vals = {"a": Fraction(2), "b": Fraction(-1, 3), "c": Fraction(5)}
        assert (p * q).specialize(vals) == p.specialize(vals) * q.specialize(vals)
        assert (p + q).specialize(vals) == p.specialize(vals) + q.specialize(vals)

    @settings(max_examples=40, deadline=None)
    @given(polys())
    def test_str_parse_round_trip(self, p):
        assert parse_poly(str(p), CTX) == p

    def test_substitute(self):
        a, b = CTX.sym("a"), CTX.sym("b")
        p = a ** 2 + 3 * b
        assert p.substitute({"a": b + 1}) == (b + 1) ** 2 + 3 * b

    def test_context_mismatch(self):
        other = PolyContext(("x",))
        with pytest.raises(ContextMismatchError):
            CTX.sym("a") + other.sym("x")

    def test_missing_symbol(self):
        with pytest.raises(MissingSymbolError):
            (CTX.sym("a") + CTX.sym("b")).specialize({"a": 1})


class TestParsing:
    def test_literal(self):
        p = parse_poly("3*a^2*b - 1/2", CTX)
        a, b = CTX.sym("a"), CTX.sym("b")
        assert p == 3 * a ** 2 * b - Fraction(1, 2)

    def test_sqrt_coefficients(self):
        ctx = PolyContext(("m",))
        p = parse_poly("(7/2 - 1/2*sqrt(19))*m", ctx)
        coeff = p.coefficient_of("m", 1).constant_value()
        assert coeff == QuadExtScalar(Fraction(7, 2), Fraction(-1, 2), 19)
        assert parse_poly(str(p), ctx) == p

    def test_parse_scalar_plain(self):
        assert parse_scalar("-5/3") == Fraction(-5, 3)
