import random
from fractions import Fraction

import pytest

from ssp import linalg
from ssp.dieudonne import (
    DieudonneModule,
    HodgePolygon,
    NewtonPolygon,
    build_a_half,
    build_superspecial_unitary,
    canonical_lie_action,
    check_axioms,
    determinant_condition,
    endpoint_admissibility,
    graded_quotient_dims,
    hodge_polygon,
    induced_quotient_action,
    is_basic_gl,
    is_isoclinic,
    module_from_dict,
    module_to_dict,
    newton_polygon,
    newton_polygon_with_retry,
)
from ssp.errors import InsufficientPrecisionError, ValidationError
from ssp.gf import field_ctx
from ssp.witt import witt_ring


def toy_module(ring, f_diag, v_diag):
    zero = ring.zero()
    n = len(f_diag)
    F = linalg.freeze([[ring.el(f_diag[i]) if i == j else zero for j in range(n)] for i in range(n)])
    V = linalg.freeze([[ring.el(v_diag[i]) if i == j else zero for j in range(n)] for i in range(n)])
    return DieudonneModule(ring=ring, rank=n, f_matrix=F, v_matrix=V)


class TestAxioms:
    def test_a_half_passes(self):
        m = build_a_half(witt_ring(3, 2, 2))
        assert check_axioms(m).ok

    def test_etale_times_p_toy_passes(self):
        ring = witt_ring(3, 1, 3)
        m = toy_module(ring, [1, 1], [3, 3])
        assert check_axioms(m).ok

    def test_identity_identity_fails(self):
        ring = witt_ring(3, 1, 3)
        m = toy_module(ring, [1, 1], [1, 1])
        rep = check_axioms(m)
        assert not rep.ok
        assert any(name == "fv-equals-p" for name, _ in rep.failures())

    def test_dimension_mismatch_is_an_error(self):
        ring = witt_ring(3, 2, 2)
        good = build_a_half(ring)
        bad = DieudonneModule(
            ring=ring, rank=3, f_matrix=good.f_matrix, v_matrix=good.v_matrix
        )
        with pytest.raises(ValidationError):
            check_axioms(bad)


class TestAHalf:
    def test_f_plus_v_vanishes(self):
        m = build_a_half(witt_ring(3, 2, 2))
        assert m.f_matrix == linalg.mat_neg(m.v_matrix)

    def test_newton_polygon_is_half_half(self):
        m = build_a_half(witt_ring(3, 2, 6))
        np_ = newton_polygon(m)
        assert np_.slopes == ((Fraction(1, 2), 2),)
        assert is_isoclinic(np_) and is_basic_gl(np_)

    def test_pairing_compatibility_on_basis(self):
        m = build_a_half(witt_ring(5, 2, 3))
        ring = m.ring
        for i in range(2):
            for j in range(2):
                x, y = m.basis_vector(i), m.basis_vector(j)
                lhs = m.pairing(m.apply_f(x), y)
                rhs = ring.sigma(m.pairing(x, m.apply_v(y)))
                assert lhs == rhs


class TestSuperspecialUnitary:
    @pytest.mark.parametrize("r, s", [(1, 1), (2, 0), (0, 2), (2, 2)])
    @pytest.mark.parametrize("n", [2, 4])
    def test_axioms_and_f_plus_v(self, r, s, n):
        m = build_superspecial_unitary(3, n, -1, r, s)
        assert m.rank == 2 * (r + s)
        assert check_axioms(m).ok
        assert m.f_matrix == linalg.mat_neg(m.v_matrix)

    def test_action_squares_to_alpha_and_commutes(self):
        m = build_superspecial_unitary(3, 2, -1, 1, 1)
        ring = m.ring
        jj = linalg.mat_mul(m.ok_action, m.ok_action)
        assert jj == linalg.scalar_matrix(4, ring.el(-1), ring.zero())

    def test_eigen_ranks_are_g_each(self):
        from ssp.dieudonne import action_eigen_indices

        for r, s in [(1, 1), (2, 0), (2, 2)]:
            m = build_superspecial_unitary(3, 2, -1, r, s)
            minus, plus = action_eigen_indices(m)
            assert len(minus) == len(plus) == r + s

    @pytest.mark.parametrize("r, s", [(1, 1), (2, 0), (0, 2), (2, 2), (3, 1)])
    def test_quotient_action_orientation(self, r, s):
        m = build_superspecial_unitary(3, 2, -1, r, s)
        ctx = m.ring.gf_ctx
        got = induced_quotient_action(m)
        assert got == canonical_lie_action(ctx, -1, r, s)

    @pytest.mark.parametrize("r, s", [(1, 1), (2, 2), (2, 0), (1, 3)])
    def test_graded_quotient_dims(self, r, s):
        m = build_superspecial_unitary(3, 2, -1, r, s)
        assert graded_quotient_dims(m) == (r, s)

    def test_isotropy_and_swapping(self):
        from ssp.dieudonne import action_eigen_indices

        m = build_superspecial_unitary(3, 3, -1, 2, 2)
        minus, plus = action_eigen_indices(m)
        zero = m.ring.zero()
        for idxs in (minus, plus):
            for i in idxs:
                for j in idxs:
                    assert m.pairing(m.basis_vector(i), m.basis_vector(j)) == zero
        # V M_+ and F M_+ land in M_-, and symmetrically
        for src, dst in ((plus, minus), (minus, plus)):
            for i in src:
                for vec in (m.apply_v(m.basis_vector(i)), m.apply_f(m.basis_vector(i))):
                    for j, c in enumerate(vec):
                        if j not in dst:
                            assert c == zero

    def test_rejects_odd_g(self):
        with pytest.raises(ValidationError):
            build_superspecial_unitary(3, 2, -1, 1, 2)

    def test_newton_polygon_rank_4(self):
        m = build_superspecial_unitary(3, 2 * 4 + 2, -1, 1, 1)
        assert newton_polygon(m).slopes == ((Fraction(1, 2), 4),)

    def test_newton_polygon_censored_at_low_truncation(self):
        # det of the linearized Frobenius has valuation 4, so n = 4 censors it
        m = build_superspecial_unitary(3, 4, -1, 1, 1)
        with pytest.raises(InsufficientPrecisionError):
            newton_polygon(m)


class TestNewton:
    def test_ordinary_toy(self):
        ring = witt_ring(3, 1, 4)
        m = toy_module(ring, [1, 3], [3, 1])
        np_ = newton_polygon(m)
        assert np_.slopes == ((Fraction(0), 1), (Fraction(1), 1))
        assert not is_isoclinic(np_)

    def test_insufficient_precision_raises(self):
        ring = witt_ring(3, 1, 2)
        m = toy_module(ring, [9, 9], [1, 1])  # det F = 81 = 0 at level 2
        with pytest.raises(InsufficientPrecisionError):
            newton_polygon(m)

    def test_sigma_conjugacy_invariance(self):
        rng = random.Random(7)
        m = build_superspecial_unitary(3, 10, -1, 1, 1)
        ring = m.ring
        np0 = newton_polygon(m)
        for _ in range(5):
            while True:
                P = linalg.freeze(
                    [
                        [ring.el((rng.randrange(ring.pn), rng.randrange(ring.pn))) for _ in range(4)]
                        for _ in range(4)
                    ]
                )
                if linalg.det(P, ring.one(), ring.zero()).val() == 0:
                    break
            Pinv = linalg.inverse_witt(P, ring)
            F2 = linalg.mat_mul(linalg.mat_mul(Pinv, m.f_matrix), m.sigma_mat(P))
            V2 = linalg.mat_mul(linalg.mat_mul(Pinv, m.v_matrix), m.sigma_inv_mat(P))
            m2 = DieudonneModule(ring=ring, rank=4, f_matrix=F2, v_matrix=V2)
            assert check_axioms(m2).ok
            assert newton_polygon(m2) == np0

    def test_total_slope_matches_det_valuation(self):
        from ssp.dieudonne import _linear_frobenius_matrix

        m = build_superspecial_unitary(3, 18, -1, 2, 2)
        np_ = newton_polygon(m)
        B = _linear_frobenius_matrix(m)
        d = linalg.det(B, m.ring.one(), m.ring.zero())
        assert np_.total_slope == Fraction(d.val(), m.ring.s)


class TestPolygonTypes:
    def test_invalid_ordering_rejected(self):
        with pytest.raises(ValidationError):
            NewtonPolygon(((Fraction(1), 1), (Fraction(0), 1)))

    def test_merging_constructor(self):
        np_ = NewtonPolygon.from_pairs([(Fraction(1, 2), 1), (Fraction(1, 2), 1)])
        assert np_.slopes == ((Fraction(1, 2), 2),)


class TestEndpoints:
    @pytest.mark.parametrize("r, s", [(1, 1), (2, 2)])
    def test_superspecial_endpoints_match(self, r, s):
        g = r + s
        m = build_superspecial_unitary(3, 2 * 2 * g + 2, -1, r, s)
        rep = endpoint_admissibility(newton_polygon(m), hodge_polygon(m))
        assert rep.t_newton == rep.t_hodge == g
        assert rep.endpoints_equal and rep.newton_at_or_above

    def test_failing_case(self):
        np_ = NewtonPolygon(((Fraction(0), 2),))
        hp = HodgePolygon(((1, 2),))
        rep = endpoint_admissibility(np_, hp)
        assert not rep.newton_at_or_above and not rep.endpoints_equal

    def test_height_mismatch(self):
        with pytest.raises(ValidationError):
            endpoint_admissibility(
                NewtonPolygon(((Fraction(0), 2),)), HodgePolygon(((0, 3),))
            )


class TestDeterminantCondition:
    @pytest.mark.parametrize("r, s", [(1, 1), (2, 0), (0, 2), (1, 3), (2, 2), (4, 0), (3, 1), (0, 4)])
    def test_accepts_canonical_matrix(self, r, s):
        ctx = field_ctx(3, 2)
        L = canonical_lie_action(ctx, -1, r, s)
        assert determinant_condition(r, s, -1, L)

    def test_rejects_wrong_multiplicities(self):
        ctx = field_ctx(3, 2)
        for r, s in [(1, 1), (2, 0), (1, 3), (2, 2)]:
            g = r + s
            for r2 in range(g + 1):
                s2 = g - r2
                L = canonical_lie_action(ctx, -1, r2, s2)
                assert determinant_condition(r, s, -1, L) == ((r2, s2) == (r, s))

    def test_conjugation_invariance(self):
        rng = random.Random(11)
        ctx = field_ctx(3, 2)
        L = canonical_lie_action(ctx, -1, 1, 1)
        for _ in range(10):
            while True:
                P = linalg.freeze(
                    [
                        [ctx.el((rng.randrange(3), rng.randrange(3))) for _ in range(2)]
                        for _ in range(2)
                    ]
                )
                if linalg.is_invertible(P):
                    break
            Lc = linalg.mat_mul(linalg.mat_mul(linalg.inverse(P, ctx.one(), ctx.zero()), L), P)
            assert determinant_condition(1, 1, -1, Lc)

    def test_non_square_rejected(self):
        ctx = field_ctx(3, 2)
        with pytest.raises(ValidationError):
            determinant_condition(1, 1, -1, ((ctx.one(),),))


class TestJsonRoundTrip:
    def test_round_trip(self):
        m = build_superspecial_unitary(3, 2, -1, 1, 1)
        d = module_to_dict(m)
        m2 = module_from_dict(d)
        assert m2 == m

    def test_retry_bumps_truncation(self):
        # exact integer data declared at a hopeless truncation level
        d = {
            "p": 3,
            "s": 2,
            "n": 1,
            "rank": 2,
            "F": [[0, 1], [-3, 0]],
            "V": [[0, -1], [3, 0]],
        }
        np_, n_used = newton_polygon_with_retry(d)
        assert np_.slopes == ((Fraction(1, 2), 2),)
        assert n_used > 1

    def test_retry_gives_up_on_genuinely_censored_input(self):
        ring = witt_ring(3, 1, 2)
        zero, one = ring.zero(), ring.one()
        m = DieudonneModule(
            ring=ring,
            rank=2,
            f_matrix=((zero, zero), (zero, zero)),
            v_matrix=((one, zero), (zero, one)),
        )
        with pytest.raises(InsufficientPrecisionError):
            newton_polygon_with_retry(module_to_dict(m))
