import copy
import itertools
from fractions import Fraction

import pytest

from wittforge.lie import LatticeAutomorphism, WnAlgebra, witt_algebra
from wittforge.modules import (GLnRepData, JPlusRepData, ModuleError,
                               PRESET_NAMES, action_polynomials, act,
                               annihilates, build_preset, check_aw_compat,
                               check_module_axioms, gamma_tensor_module,
                               graded_dual, jets_module, module_from_json,
                               module_to_json, natural_rep, tensor_density,
                               tensor_field, trivial_rep, twist,
                               weight_report, wedge_rep)
from wittforge.scalars import QuadExtScalar

WITT = witt_algebra()


def e(k):
    return WITT.basis((k,))


class TestTensorDensity:
    def test_action_example(self):
        # e_k v_s = (s + alpha k + beta) v_{s+k}; alpha=3, beta=0, k=2, s=1
        td = tensor_density(Fraction(3), Fraction(0))
        got = act(e(2), td.basis_vector(1, "v"))
        assert got.terms == {((3,), "v"): Fraction(7)}

    def test_symbolic_axioms(self):
        td = tensor_density("alpha", "beta")
        assert check_module_axioms(td).passed

    def test_numeric_axioms(self):
        td = tensor_density(Fraction(2, 3), Fraction(1, 5))
        assert check_module_axioms(td).passed


class TestPresets:
    def test_names(self):
        assert set(PRESET_NAMES) == {"punctured_functions", "virasoro_adjoint",
                                     "feigin_fuks_length2"}

    def test_punctured(self):
        P = build_preset("punctured_functions")
        assert act(e(2), P.basis_vector(3, "u")).terms == {((5,), "u"): Fraction(3)}
        # the weight-0 vector is punctured out, in both directions
        assert act(e(-3), P.basis_vector(3, "u")).is_zero()
        rep = weight_report(P, 2)
        dims = {tuple(r["offset"]): r["dim"] for r in rep["rows"]}
        assert dims[(0,)] == 0 and dims[(1,)] == 1

    def test_virasoro_adjoint(self):
        M = build_preset("virasoro_adjoint")
        got = act(e(2), M.basis_vector(-2, "u"))
        assert got.terms == {((0,), "u"): Fraction(-4), ((0,), "z"): Fraction(8)}
        # central line exists only at offset 0 and the action kills it
        assert act(e(3), M.basis_vector(0, "z")).is_zero()
        rep = weight_report(M, 1)
        dims = {tuple(r["offset"]): r["dim"] for r in rep["rows"]}
        assert dims[(0,)] == 2 and dims[(1,)] == 1

    def test_feigin_fuks_polynomials(self):
        F = build_preset("feigin_fuks_length2")
        ap = action_polynomials(F)
        assert ap[(1, "u", "u")] == "(7/2 - 1/2*sqrt(19))*m + s"
        assert ap[(1, "w", "w")] == "-(5/2 + 1/2*sqrt(19))*m + s"
        assert ap[(1, "w", "u")] == ("-(11/2 + 5/4*sqrt(19))*m^7"
                                     " - (31/2 + 7/2*sqrt(19))*m^6*s"
                                     " - (25/2 + 7/2*sqrt(19))*m^5*s^2"
                                     " - 5*m^4*s^3 + 5*m^3*s^4 + 2*m^2*s^5")

    def test_feigin_fuks_sample(self):
        F = build_preset("feigin_fuks_length2")
        got = act(e(1), F.basis_vector(-1, "u"))
        assert got.terms == {((0,), "u"): QuadExtScalar(Fraction(5, 2),
                                                        Fraction(-1, 2), 19)}

    def test_all_presets_satisfy_axioms(self):
        for name in PRESET_NAMES:
            assert check_module_axioms(build_preset(name)).passed, name

    def test_unknown_preset(self):
        with pytest.raises(ModuleError):
            build_preset("nope")


class TestAnnihilation:
    def test_order_three_kills_density_modules(self):
        cert = annihilates(3, tensor_density("alpha", "beta"))
        assert cert.annihilates
        data = cert.to_json()
        assert data["symbolic_residues"] == [] and data["window_failures"] == []

    def test_order_two_does_not(self):
        cert = annihilates(2, tensor_density(Fraction(2, 3), Fraction(1, 5)))
        assert not cert.annihilates
        assert cert.to_json()["witness"] == [-3, -3, -3, "v"]

    def test_virasoro_needs_higher_order(self):
        # the central extension obstructs order-3 annihilation
        assert not annihilates(3, build_preset("virasoro_adjoint")).annihilates

    def test_punctured_inherits_density_bound(self):
        assert annihilates(3, build_preset("punctured_functions")).annihilates


class TestGLnReps:
    def test_natural_rep_relations(self):
        natural_rep(3)  # validation happens in the constructor

    def test_wedge_dimensions(self):
        for n in range(1, 5):
            for k in range(n + 1):
                U = wedge_rep(n, k)
                from math import comb
                assert U.dim == comb(n, k)

    def test_wedge_labels(self):
        assert wedge_rep(3, 2).labels == ("e1^e2", "e1^e3", "e2^e3")
        assert wedge_rep(2, 0).labels == ("1",)

    def test_corrupted_rep_rejected(self):
        bad = {(1, 2): [[0, 1], [1, 0]], (2, 1): [[0, 1], [1, 0]]}
        with pytest.raises(ModuleError):
            GLnRepData(2, 2, bad)


class TestTensorFields:
    def test_action_formula(self):
        # (t^m d_a)(t^s x e_b) = s_a t^{s+m} e_b + sum_p m_p t^{s+m} E_pa e_b
        U = natural_rep(2)
        M = tensor_field(U, (Fraction(0), Fraction(0)))
        alg = M.algebra
        got = act(alg.basis((1, 0), 2), M.basis_vector((2, 3), "e1"))
        # s_2 = 3 on the diagonal, plus E_12 e1 = 0, E_22-part for p=2 absent
        assert got.terms == {((3, 3), "e1"): Fraction(3)}
        got2 = act(alg.basis((1, 0), 1), M.basis_vector((2, 3), "e1"))
        # s_1 = 2 plus m_1 E_11 e1 = e1
        assert got2.terms == {((3, 3), "e1"): Fraction(3)}

    def test_axioms_and_aw(self):
        M = tensor_field(natural_rep(2), (Fraction(1, 2), Fraction(0)))
        assert check_module_axioms(M).passed
        assert check_aw_compat(M).passed

    def test_trivial_rep_matches_density(self):
        M = tensor_field(trivial_rep(1), (Fraction(0),))
        assert action_polynomials(M) == {(1, "1", "1"): "s1"}

    def test_gamma_extension(self):
        M = gamma_tensor_module(trivial_rep(2), (Fraction(0), Fraction(0)),
                                Fraction(1, 3))
        assert isinstance(M.algebra, WnAlgebra) and M.algebra.n == 3
        assert M.beta == (Fraction(0), Fraction(0), Fraction(1, 3))
        assert check_module_axioms(M, window=1).passed
        assert check_aw_compat(M, window=1).passed

    def test_gamma_extension_rejects_nontrivial_action(self):
        # zero-padding the gl_n matrices is only consistent for trivial U
        with pytest.raises(ModuleError):
            gamma_tensor_module(natural_rep(2), (Fraction(0), Fraction(0)),
                                Fraction(1, 3))


class TestJets:
    def _rep(self):
        # nilpotent 2-dim rep of the nonnegative jet algebra in one variable
        return JPlusRepData(1, 2, 1, {((1,), 1): [[0, 1], [0, 0]]})

    def test_axioms(self):
        M = jets_module(self._rep(), (Fraction(1, 2),))
        assert check_module_axioms(M).passed
        assert check_aw_compat(M).passed

    def test_action_values(self):
        M = jets_module(self._rep(), (Fraction(0),))
        alg = M.algebra
        # (t^m d)(t^s x v2) = s t^{s+m} v2 + m t^{s+m} v1
        got = act(alg.basis((2,), 1), M.basis_vector((3,), "v2"))
        assert got.terms == {((5,), "v2"): Fraction(3), ((5,), "v1"): Fraction(2)}

    def test_corrupted_rep_rejected(self):
        # [t d, t^2 d] = t^2 d requires [A, B] = B; commuting A, B with B != 0 fail
        with pytest.raises(ModuleError):
            JPlusRepData(1, 2, 2, {((1,), 1): [[0, 1], [0, 0]],
                                   ((2,), 1): [[0, 1], [0, 0]]})


class TestDuality:
    def test_dual_satisfies_axioms(self):
        for name in PRESET_NAMES:
            D = graded_dual(build_preset(name))
            assert check_module_axioms(D).passed, name

    def test_double_dual_round_trip(self):
        for name in PRESET_NAMES:
            M = build_preset(name)
            DD = graded_dual(graded_dual(M))
            assert action_polynomials(DD) == action_polynomials(M)
            assert DD.punctures == M.punctures
            assert DD.beta == M.beta
            assert DD.restricted_support == M.restricted_support

    def test_dual_weight_support_mirrors(self):
        P = build_preset("punctured_functions")
        D = graded_dual(P)
        dims = {tuple(r["offset"]): r["dim"] for r in weight_report(D, 2)["rows"]}
        assert dims[(0,)] == 0 and dims[(-1,)] == 1


class TestTwist:
    def test_identity_twist(self):
        M = tensor_field(natural_rep(2), (Fraction(0), Fraction(0)))
        T = twist(M, LatticeAutomorphism.identity(2))
        assert action_polynomials(T) == action_polynomials(M)

    def test_twisted_module_satisfies_axioms(self):
        M = tensor_field(natural_rep(2), (Fraction(1, 3), Fraction(0)))
        g = LatticeAutomorphism([[1, 1], [0, 1]])
        assert check_module_axioms(twist(M, g)).passed

    def test_composition_law(self):
        M = tensor_field(wedge_rep(2, 1), (Fraction(0), Fraction(0)))
        g = LatticeAutomorphism([[1, 1], [0, 1]])
        h = LatticeAutomorphism([[0, -1], [1, 0]])
        lhs = twist(twist(M, h), g)
        rhs = twist(M, h.compose(g))
        assert action_polynomials(lhs) == action_polynomials(rhs)
        assert lhs.beta == rhs.beta

    def test_rank_one_rejected(self):
        with pytest.raises(ModuleError):
            twist(build_preset("punctured_functions"),
                  LatticeAutomorphism.identity(1))


class TestSerialization:
    def test_preset_round_trips(self):
        for name in PRESET_NAMES:
            M = build_preset(name)
            R = module_from_json(module_to_json(M))
            assert module_to_json(R) == module_to_json(M)
            assert check_module_axioms(R).passed

    def test_tensor_field_round_trip(self):
        M = tensor_field(natural_rep(2), (Fraction(1, 2), Fraction(0)))
        R = module_from_json(module_to_json(M))
        assert module_to_json(R) == module_to_json(M)

    def test_corrupted_action_fails_axioms(self):
        data = module_to_json(build_preset("punctured_functions"))
        data["terms"][0]["poly"] = "s^2"
        bad = module_from_json(data)
        report = check_module_axioms(bad)
        assert not report.passed

    def test_malformed_json_rejected(self):
        data = module_to_json(build_preset("punctured_functions"))
        del data["fiber"]
        with pytest.raises((ModuleError, KeyError)):
            module_from_json(data)
