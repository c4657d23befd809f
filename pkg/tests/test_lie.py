import itertools
from fractions import Fraction

import pytest

from wittforge.lie import (AlgebraError, LatticeAutomorphism, WnAlgebra,
                           apply_automorphism, bracket, jacobi_check,
                           parse_element, solenoidal_algebra,
                           solenoidal_embed, symbolic_witt_algebra,
                           witt_algebra)

WITT = witt_algebra()


class TestWittBrackets:
    def test_examples(self):
        e = lambda k: WITT.basis((k,))
        assert bracket(e(1), e(-1)) == e(0).scale(-2)
        assert bracket(e(2), e(3)) == e(5)
        assert bracket(e(0), e(4)) == e(4).scale(4)
        assert bracket(e(3), e(3)).is_zero()

    def test_antisymmetry(self):
        e = lambda k: WITT.basis((k,))
        for r, s in itertools.product(range(-3, 4), repeat=2):
            assert bracket(e(r), e(s)) == -bracket(e(s), e(r))

    def test_linearity(self):
        e = lambda k: WITT.basis((k,))
        x = e(1).scale(2) - e(-2)
        y = e(0) + e(2).scale(Fraction(1, 3))
        assert bracket(x, y) == bracket(e(1), y).scale(2) - bracket(e(-2), y)


class TestWnBrackets:
    def test_rank_two_examples(self):
        alg = WnAlgebra(2)
        b = alg.basis
        # [t^(1,0) d_1, t^(0,1) d_2]: both structure coefficients vanish.
        assert bracket(b((1, 0), 1), b((0, 1), 2)).is_zero()
        # [t^(1,0) d_2, t^(0,1) d_1] = t^(1,1) d_1 - t^(1,1) d_2
        got = bracket(b((1, 0), 2), b((0, 1), 1))
        assert got == b((1, 1), 1) - b((1, 1), 2)
        # Cartan element t^0 d_1 reads off the first exponent.
        assert bracket(b((0, 0), 1), b((3, -2), 2)) == b((3, -2), 2).scale(3)

    def test_rank_one_matches_witt(self):
        alg = WnAlgebra(1)
        b = alg.basis
        for r, s in itertools.product(range(-2, 3), repeat=2):
            got = bracket(b((r,), 1), b((s,), 1))
            assert got == b((r + s,), 1).scale(s - r)


class TestJacobi:
    def test_witt_box_exhaustive(self):
        pts = [(k,) for k in range(-3, 4)]
        report = jacobi_check(WITT, itertools.combinations(pts, 3))
        assert report.passed and report.checked == 35

    def test_w2_box_exhaustive(self):
        alg = WnAlgebra(2)
        gens = [(r, a) for r in itertools.product(range(-1, 2), repeat=2)
                for a in (1, 2)]
        report = jacobi_check(alg, itertools.combinations(gens, 3))
        assert report.passed

    def test_w3_box_sampled_combinations(self):
        alg = WnAlgebra(3)
        gens = [(r, a) for r in itertools.product(range(-1, 2), repeat=3)
                for a in (1, 2, 3)]
        triples = list(itertools.combinations(gens, 3))[::37]
        report = jacobi_check(alg, triples)
        assert report.passed and report.checked == len(triples)

    def test_symbolic_triples(self):
        alg = symbolic_witt_algebra(("k", "s", "p"))
        pts = [alg.lattice.generator(n) for n in ("k", "s", "p")]
        report = jacobi_check(alg, [tuple(pts)])
        assert report.passed

    def test_solenoidal_box(self):
        alg = solenoidal_algebra((Fraction(2), Fraction(3)))
        pts = list(itertools.product(range(-1, 2), repeat=2))
        report = jacobi_check(alg, itertools.combinations(pts, 3))
        assert report.passed


class TestSolenoidalEmbed:
    def test_bracket_compatibility(self):
        mu = (Fraction(2), Fraction(3))
        alg = solenoidal_algebra(mu)
        target = WnAlgebra(2)
        pts = list(itertools.product(range(-1, 2), repeat=2))
        for r, s in itertools.product(pts, repeat=2):
            x, y = alg.basis(r), alg.basis(s)
            lhs = solenoidal_embed(bracket(x, y), target)
            rhs = bracket(solenoidal_embed(x, target),
                          solenoidal_embed(y, target))
            assert lhs == rhs


class TestAutomorphisms:
    def test_identity(self):
        g = LatticeAutomorphism.identity(2)
        alg = WnAlgebra(2)
        x = alg.basis((2, -1), 1) + alg.basis((0, 1), 2).scale(3)
        assert apply_automorphism(g, x) == x

    def test_bracket_preserved(self):
        g = LatticeAutomorphism([[1, 1], [0, 1]])
        alg = WnAlgebra(2)
        pts = [(1, 0), (0, 1), (-1, 2)]
        for (r, a), (s, b) in itertools.product(
                [(p, d) for p in pts for d in (1, 2)], repeat=2):
            x, y = alg.basis(r, a), alg.basis(s, b)
            assert (apply_automorphism(g, bracket(x, y))
                    == bracket(apply_automorphism(g, x),
                               apply_automorphism(g, y)))

    def test_composition_and_inverse(self):
        g = LatticeAutomorphism([[1, 1], [0, 1]])
        h = LatticeAutomorphism([[0, -1], [1, 0]])
        alg = WnAlgebra(2)
        x = alg.basis((2, -1), 1) - alg.basis((1, 1), 2)
        assert (apply_automorphism(g, apply_automorphism(h, x))
                == apply_automorphism(g.compose(h), x))
        assert apply_automorphism(g.inverse(), apply_automorphism(g, x)) == x

    def test_non_unimodular_rejected(self):
        with pytest.raises(AlgebraError):
            LatticeAutomorphism([[2, 0], [0, 1]])


class TestParsing:
    def test_rank_one(self):
        e = lambda k: WITT.basis((k,))
        got = parse_element("(2)*e[3] + (-1/2)*e[-1]", WITT)
        assert got == e(3).scale(2) - e(-1).scale(Fraction(1, 2))

    def test_wn(self):
        alg = WnAlgebra(2)
        got = parse_element("t[1,0]d2 + (3)*t[0,-1]d1", alg)
        assert got == alg.basis((1, 0), 2) + alg.basis((0, -1), 1).scale(3)

    def test_rejects_garbage(self):
        with pytest.raises(AlgebraError):
            parse_element("e[1] * e[2]", WITT)
