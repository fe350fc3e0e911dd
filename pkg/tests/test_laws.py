from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from padic_hua.laws import (
    HuaParams,
    chain_product_rep1,
    chain_product_rep2,
    descending_tuples,
    haar_orbit_mass,
    kernel_p,
    kernel_row,
    m_n_direct,
    m_n_profile,
    m_n_truncated_law,
    nu_bracket,
    nu_chain_bracket,
    nu_k1_below,
    nu_truncated_law,
    pi_n,
    pi_n_boundary_tv,
    pi_s_bracket,
    pi_s_tail_bound,
    rewrite_identity_check,
    rewrite_identity_sides,
    rr_cdf,
    tilde_pi_n,
    vol_singular_law,
)
from padic_hua.partitions import LProfile, Partition, partitions_in_box
from padic_hua.qseries import Bracket, pochhammer

HP2 = HuaParams(2, F(1))
HP2S1 = HuaParams(2, F(1, 2))
HP3 = HuaParams(3, F(1))

descending = st.lists(st.integers(-6, 6), min_size=1, max_size=8).map(
    lambda v: tuple(sorted(v, reverse=True)))


class TestHuaParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            HuaParams(2, F(2))
        with pytest.raises(ValueError):
            HuaParams(2, F(0))
        with pytest.raises(ValueError):
            HuaParams(4, F(1))

    def test_s_exponent(self):
        assert HuaParams(2, F(1)).s_exponent() == 0
        assert HuaParams(2, F(1, 4)).s_exponent() == 2
        assert HuaParams(3, F(2)).s_exponent() is None
        assert HuaParams(3, F(2, 3)).s_exponent() is None


class TestKernel:
    def test_absorbing_state(self):
        for hp in (HP2, HP2S1, HP3):
            assert kernel_p(hp, 0, 0) == 1

    def test_worked_row(self):
        assert kernel_p(HP2, 1, 0) == F(1, 2)
        assert kernel_p(HP2, 1, 1) == F(1, 2)

    def test_indicator(self):
        assert kernel_p(HP2, 3, 4) == 0
        assert kernel_p(HP2S1, 0, 2) == 0

    @given(x1=st.integers(0, 30),
           hp=st.sampled_from([HP2, HP2S1, HP3, HuaParams(5, F(3, 2))]))
    @settings(max_examples=60)
    def test_row_stochastic(self, x1, hp):
        row = kernel_row(hp, x1)
        assert sum(row) == 1
        assert all(mass > 0 for mass in row)


class TestEntranceLaws:
    def test_pi_bracket_values(self):
        mpmath.mp.dps = 30
        qp_half = mpmath.qp(0.5, 0.5)
        b0 = pi_s_bracket(HP2, 0, F(1, 10**9))
        assert float(b0.lower) <= float(qp_half) <= float(b0.upper)
        b1 = pi_s_bracket(HP2, 1, F(1, 10**9))
        assert abs(float(b1.midpoint) - 2 * float(qp_half)) < 1e-8

    def test_pi_sums_to_one(self):
        total = Bracket.exact(0)
        for x in range(41):
            total = total + pi_s_bracket(HP2, x, F(1, 10**12))
        assert total.upper <= 1 + F(41, 10**12)
        assert total.lower >= 1 - F(1, 10**9)

    def test_tail_bound_dominates(self):
        bound = pi_s_tail_bound(HP2, 5)
        tail = Bracket.exact(0)
        for x in range(5, 60):
            tail = tail + pi_s_bracket(HP2, x, F(1, 10**15))
        assert tail.upper <= bound

    def test_pi_n_worked_value(self):
        assert pi_n(HP2, 1, 1) == F(2, 3)

    def test_completeness(self):
        for hp in (HP2, HP2S1, HP3):
            for n in (1, 2, 7, 30):
                assert sum(pi_n(hp, n, x) for x in range(n + 1)) == 1
                assert sum(tilde_pi_n(hp, n, x) for x in range(n + 1)) == 1

    def test_out_of_range_is_zero(self):
        assert pi_n(HP2, 3, 4) == 0
        assert tilde_pi_n(HP2, 3, -1) == 0


class TestSingularLaw:
    def test_size_one_masses(self):
        assert m_n_direct(HP2, (0,)) == F(1, 3)
        assert m_n_direct(HP2, (-1,)) == F(1, 6)
        assert m_n_direct(HP2, (1,)) == F(1, 6)

    def test_size_one_total_mass_exact(self):
        # Independent completeness oracle: geometric tails in closed form.
        cap = 40
        body = sum(m_n_direct(HP2, (k,)) for k in range(-cap, cap + 1))
        # masses are 2^k/3 for k <= 0 and 2^-k/3 for k >= 1 at p=2, t=1
        tail = 2 * F(1, 3) * F(1, 2**cap)
        assert body + tail == 1

    def test_profile_form_exhaustive_grid(self):
        for hp in (HP2, HuaParams(3, F(1, 2))):
            for n in (1, 2, 3, 4):
                for k in descending_tuples(n, -4, 4):
                    assert m_n_direct(hp, k) == m_n_profile(
                        hp, LProfile.from_singular_values(k))

    @given(k=descending, hp=st.sampled_from([HP2, HP2S1, HP3]))
    @settings(max_examples=100)
    def test_chain_representations(self, k, hp):
        profile = LProfile.from_singular_values(k)
        reference = m_n_direct(hp, k)
        assert chain_product_rep1(hp, profile) == reference
        assert chain_product_rep2(hp, profile) == reference

    def test_positivity_on_grid(self):
        grid = [HuaParams(p, t) for p in (2, 3, 5)
                for t in (F(1), F(1, 2), F(3, 2))]
        for hp in grid:
            for k in descending_tuples(2, -3, 3):
                assert m_n_direct(hp, k) > 0
            for x in range(6):
                assert pi_n(hp, 5, x) > 0
                assert tilde_pi_n(hp, 5, x) > 0

    def test_markers_rejected(self):
        from padic_hua.matrix import SingularTuple

        marked = SingularTuple(2, (1, None), floor=-3)
        with pytest.raises(Exception):
            m_n_direct(HP2, marked)


class TestReferenceMeasures:
    def test_vol_shells_size_one(self):
        for j in range(5):
            assert vol_singular_law(2, 1, (-j,)) == F(1, 2 ** (j + 1))

    def test_vol_gl_mass(self):
        assert vol_singular_law(2, 2, (0, 0)) == F(3, 8)

    def test_vol_total_mass_nonpositive(self):
        total = sum(vol_singular_law(2, 2, k) for k in descending_tuples(2, -14, 0))
        assert 1 - total < F(1, 2**10)

    def test_haar_unit_masses(self):
        assert haar_orbit_mass(2, 3, (0, 0, 0)) == 1
        for k in (-3, 0, 5):
            assert haar_orbit_mass(2, 1, (k,)) == 1

    @given(k=descending)
    @settings(max_examples=60)
    def test_vol_haar_relation(self, k):
        n = len(k)
        q = F(1, 2)
        assert vol_singular_law(2, n, k) == \
            pochhammer(q, q, n) * F(2) ** (n * sum(k)) * haar_orbit_mass(2, n, k)


class TestLimitingLaw:
    def test_empty_and_single_part_agree(self):
        b_empty = nu_bracket(HP2, Partition(()), F(1, 10**9))
        b_one = nu_bracket(HP2, Partition((1,)), F(1, 10**9))
        assert b_empty.overlaps(b_one)
        assert abs(float(b_empty.midpoint) - 0.2887880951) < 1e-6

    def test_chain_factorization_boxed(self):
        for lam in partitions_in_box(4, 4):
            direct = nu_bracket(HP2S1, lam, F(1, 10**9))
            chained = nu_chain_bracket(HP2S1, lam, F(1, 10**9))
            assert direct.overlaps(chained)

    def test_truncated_law_mass(self):
        law = nu_truncated_law(HP2, 3, 6)
        total = law.total_mass()
        assert total.lower <= 1 <= total.upper + law.tail.width + F(1, 10**6)
        assert law.tail.lower >= 0


class TestLargestPartCdf:
    def test_direct_vs_product(self):
        rr = rr_cdf(2, 0, 2, F(1, 10**10))
        direct = nu_k1_below(HP2, 2, F(1, 10**10))
        assert rr.overlaps(direct)

    def test_monotone_in_x(self):
        values = [rr_cdf(3, 0, x, F(1, 10**8)) for x in (2, 3, 4, 6)]
        for a, b in zip(values, values[1:]):
            assert b.upper >= a.lower

    def test_tends_to_one(self):
        assert rr_cdf(2, 0, 20, F(1, 10**8)).lower > 1 - F(1, 10**5)

    def test_s_one_variant(self):
        # the i = 1 factor is excluded for the deformed variant; including
        # it would halve the value at p = 2 and kill the overlap
        b = rr_cdf(2, 1, 2, F(1, 10**10))
        assert b.lower > F(3, 5)
        assert b.overlaps(nu_k1_below(HP2S1, 2, F(1, 10**10)))

    def test_domain(self):
        with pytest.raises(ValueError):
            rr_cdf(2, 2, 2, F(1, 10))
        with pytest.raises(ValueError):
            rr_cdf(2, 0, 1, F(1, 10))
        with pytest.raises(ValueError):
            nu_k1_below(HuaParams(2, F(3, 2)), 2, F(1, 10))


class TestRewritingIdentities:
    def test_worked_example(self):
        sides = rewrite_identity_sides((2, 1, 1, -1))
        assert sides == ((10, 10), (1, 1), (4, 4))

    def test_zero_tuple(self):
        assert rewrite_identity_sides((0, 0, 0)) == ((0, 0), (0, 0), (0, 0))

    @given(k=descending)
    @settings(max_examples=200)
    def test_random_tuples(self, k):
        assert all(rewrite_identity_check(k))


def test_boundary_tv_decreasing_small():
    tv5 = pi_n_boundary_tv(HP2, 5)
    tv10 = pi_n_boundary_tv(HP2, 10)
    tv20 = pi_n_boundary_tv(HP2, 20)
    assert tv10.upper < tv5.lower
    assert tv20.upper < tv10.lower
    assert tv20.upper < F(1, 10**6)


def test_m_n_truncated_law_tail():
    law = m_n_truncated_law(HP2, 2, 8)
    assert sum(law.masses.values()) + law.tail == 1
    assert law.tail > 0
