from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssp.errors import BudgetExceededError, ValidationError
from ssp.ftables import field_table
from ssp.groups import (
    GroupSpec,
    QuatModP,
    conjugacy_class_data,
    gl2_order_enumerated,
    gsp_order_enumerated,
    gusplit_group_elements,
    hyperbolic_pair_count,
    irrep_dim_bound,
    irrep_sum_bound,
    lemma_gp_check,
    order_gsp_mod,
    order_gu,
    order_gusplit,
    order_su,
    order_u,
    p_regular_class_count_enumerated,
    p_regular_classes,
    su_group_elements,
    sylow_p_order,
    unitary_group_elements,
)


class TestOrderFormulas:
    def test_frozen_values(self):
        assert order_su(2, 3) == 24
        assert order_u(1, 3) == 4
        assert order_gusplit(1, 1, 3) == 32
        assert order_gusplit(2, 0, 3) == 192
        assert order_gsp_mod(1, 3) == 48
        assert order_gsp_mod(2, 3) == 103680
        assert order_gsp_mod(1, 1) == 1

    def test_trivial_conventions(self):
        for p in (3, 5):
            assert order_su(0, p) == order_su(1, p) == 1
            assert order_u(0, p) == 1

    def test_gusplit_is_ur_us_p_minus_1(self):
        for p in (3, 5, 7):
            for r in range(4):
                for s in range(4):
                    assert order_gusplit(r, s, p) == order_u(r, p) * order_u(s, p) * (p - 1)

    def test_group_spec_dispatch(self):
        assert GroupSpec("gusplit", (1, 1, 3)).order() == 32
        assert GroupSpec("su", (2, 3)).order() == 24
        assert GroupSpec("gsp_mod", (2, 3)).order() == 103680
        with pytest.raises(ValidationError):
            GroupSpec("nope", (1,)).order()


class TestEnumerationOracles:
    @pytest.mark.parametrize("t, p", [(0, 3), (1, 3), (2, 3), (1, 5), (2, 5)])
    def test_su_and_u_vs_enumeration(self, t, p):
        assert len(unitary_group_elements(t, p)) == order_u(t, p)
        assert len(su_group_elements(t, p)) == order_su(t, p)

    @pytest.mark.parametrize("r, s, p", [(1, 1, 3), (2, 0, 3), (0, 2, 3), (1, 1, 5)])
    def test_gusplit_vs_enumeration(self, r, s, p):
        assert len(gusplit_group_elements(r, s, p)) == order_gusplit(r, s, p)

    def test_gu_vs_enumeration(self):
        # GU_t = gusplit(t, 0)
        assert len(gusplit_group_elements(2, 0, 3)) == order_gu(2, 3) == 192

    def test_gsp_1_3_vs_gl2(self):
        assert gl2_order_enumerated(3) == order_gsp_mod(1, 3) == 48

    def test_gsp_hyperbolic_recursion(self):
        assert hyperbolic_pair_count(1, 3) == (3**2 - 1) * 3
        assert gsp_order_enumerated(1, 3) == order_gsp_mod(1, 3)
        assert gsp_order_enumerated(2, 3) == order_gsp_mod(2, 3) == 103680

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            unitary_group_elements(3, 5, budget=100)


class TestMultiplicativity:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 2), st.integers(1, 30), st.integers(1, 30))
    def test_gsp_order_multiplicative(self, g, n1, n2):
        if gcd(n1, n2) == 1:
            assert order_gsp_mod(g, n1 * n2) == order_gsp_mod(g, n1) * order_gsp_mod(g, n2)

    def test_prime_power_lift(self):
        dim = 2 * 1 * 1 + 1 + 1  # 2g^2 + g + 1 at g = 1
        assert order_gsp_mod(1, 9) == order_gsp_mod(1, 3) * 3**dim


class TestClassCounts:
    def test_formula_values(self):
        assert p_regular_classes(1, 1, 3) == 32
        assert p_regular_classes(2, 0, 3) == 24
        assert p_regular_classes(1, 1, 5) == 144
        assert p_regular_classes(2, 2, 3) == 3**2 * 2 * 16

    @pytest.mark.parametrize("r, s, p", [(1, 1, 3), (2, 0, 3), (1, 1, 5)])
    def test_formula_vs_enumeration(self, r, s, p):
        assert p_regular_class_count_enumerated(r, s, p) == p_regular_classes(r, s, p)

    def test_abelian_case_all_classes_regular(self):
        elements = gusplit_group_elements(1, 1, 3)
        reps, regular = conjugacy_class_data(elements, 3)
        assert len(reps) == regular == 32

    def test_center_order_at_1_1_3(self):
        # G(U_1 x U_1)(F_9) is its own center, of order (p-1)(p+1)^2
        elements = gusplit_group_elements(1, 1, 3)
        table = field_table(3)
        center = [
            x
            for x in elements
            if all(table.mat_mul(x, y) == table.mat_mul(y, x) for y in elements)
        ]
        assert len(center) == 2 * 16


class TestSylowAndDimBounds:
    @pytest.mark.parametrize("r, s, p", [(1, 1, 3), (2, 0, 3)])
    def test_sylow_matches_exponent(self, r, s, p):
        order = len(gusplit_group_elements(r, s, p))
        assert sylow_p_order(order, p) == p ** ((r * (r - 1) + s * (s - 1)) // 2)

    def test_dim_bounds(self):
        assert irrep_dim_bound(1, 1, 3) == 1
        assert irrep_sum_bound(1, 1, 3) == 32
        assert irrep_dim_bound(2, 0, 3) == 3
        assert irrep_sum_bound(2, 0, 3) == 72
        assert irrep_dim_bound(2, 2, 3) == 9
        assert irrep_sum_bound(2, 2, 3) == 2592


class TestQuatModP:
    def test_stated_relations(self):
        q = QuatModP(3, -1)
        assert q.mul(q.U, q.U) == q.el(a=-1)
        assert q.mul(q.PI, q.PI) == q.el()
        assert q.mul(q.PI, q.U) == q.neg(q.mul(q.U, q.PI))
        assert q.mul(q.U, q.PI) == q.UPI

    def test_associativity_on_all_basis_triples(self):
        q = QuatModP(3, -1)
        basis = q.basis()
        for x in basis:
            for y in basis:
                for z in basis:
                    assert q.mul(q.mul(x, y), z) == q.mul(x, q.mul(y, z))

    def test_conjugation_is_an_antiautomorphism(self):
        q = QuatModP(5, -2)
        basis = q.basis()
        for x in basis:
            for y in basis:
                assert q.conj(q.mul(x, y)) == q.mul(q.conj(y), q.conj(x))

    def test_rejects_residue_alpha(self):
        with pytest.raises(ValidationError):
            QuatModP(3, 1)


class TestLemmaGp:
    def test_level_p_exact_sequence_at_3(self):
        rep = lemma_gp_check(3, -1, 1, 1)
        assert rep.gp_order == 32
        assert rep.surjective and rep.image_size == 32
        assert rep.kernel_is_identity_mod_pi
        assert rep.group_order == rep.kernel_size * 32
        assert rep.kernel_size == 9  # one F_9 parameter of Pi-congruences
        assert rep.offdiag_probes_rejected == rep.offdiag_probes_total == 2
        assert rep.ok

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            lemma_gp_check(3, -1, 1, 1, budget=10)
