"""Tests for the ideal structure engine."""

from itertools import product

import pytest
from conftest import BIQUADRATIC_TABLE, SMALL_CASES, admissible_b

from scaffold_gms.errors import DomainError, SizeLimitError
from scaffold_gms.padic import digits, dominating, preceq
from scaffold_gms.scaffold_core import (
    D,
    H,
    IdealExponent,
    ScaffoldParams,
    StructureReport,
    a_func,
    analyze,
    b_func,
    bfunction_bijective,
    d,
    dd_set,
    ee_set,
    epsilon,
    inverse_different_free,
    ring_of_integers_free,
    valuation_criterion_b,
    w,
    w_jform,
    w_window,
)

# Shift parameters that are not all equal, for the digit-shift identities
MIXED_PARAMS = [
    ScaffoldParams(2, 2, (1, 3)),
    ScaffoldParams(2, 3, (3, 1, 5)),
    ScaffoldParams(3, 1, (2,)),
    ScaffoldParams(3, 2, (2, 7)),
    ScaffoldParams(3, 2, (-4, 11)),
    ScaffoldParams(5, 2, (3, 14)),
]


class TestScaffoldParams:
    def test_uniform(self):
        params = ScaffoldParams.uniform(2, 2, 3)
        assert params.b == (3, 3)
        assert params.order == 4

    def test_rejects_composite_p(self):
        with pytest.raises(DomainError):
            ScaffoldParams(4, 1, (1,))

    def test_rejects_bad_rank(self):
        with pytest.raises(DomainError):
            ScaffoldParams(2, 0, ())

    def test_rejects_length_mismatch(self):
        with pytest.raises(DomainError):
            ScaffoldParams(3, 2, (1,))

    def test_rejects_shift_divisible_by_p(self):
        with pytest.raises(DomainError, match="b_2"):
            ScaffoldParams(3, 2, (1, 6))

    def test_is_hashable(self):
        assert ScaffoldParams(3, 2, (1, 2)) == ScaffoldParams(3, 2, [1, 2])
        assert len({ScaffoldParams(3, 2, (1, 2)), ScaffoldParams(3, 2, (1, 2))}) == 1


class TestShiftMaps:
    def test_b_func_examples(self):
        params = ScaffoldParams.uniform(2, 2, 3)
        assert b_func(0, params) == 0
        assert b_func(3, params) == 9
        assert b_func(2, params) == 6

    def test_b_func_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            b_func(4, ScaffoldParams.uniform(2, 2, 3))

    def test_a_func_examples(self):
        params = ScaffoldParams.uniform(2, 2, 3)
        assert a_func(0, params) == 0
        assert a_func(3, params) == 3
        # a_func reads t modulo p^n
        assert a_func(-1, params) == a_func(3, params)

    def test_valuation_criterion_examples(self):
        p5 = ScaffoldParams(5, 1, (3,))
        assert valuation_criterion_b(0, p5) == 3
        assert valuation_criterion_b(2, p5) == 3
        assert valuation_criterion_b(1, ScaffoldParams.uniform(2, 2, 3)) == 3

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_valuation_criterion_window(self, params):
        """Test b is the unique t in the window of h with a(t) = p^n - 1."""
        for h in range(-params.order, params.order):
            hits = [t for t in range(h, h + params.order) if a_func(t, params) == params.order - 1]
            assert hits == [valuation_criterion_b(h, params)]

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_a_inverts_b(self, params):
        """Test b(a(t)) ≡ -t and a(-b(s)) = s."""
        q = params.order
        for t in range(-q, 2 * q):
            assert (b_func(a_func(t, params), params) + t) % q == 0
        for s in range(q):
            assert a_func(-b_func(s, params), params) == s

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_b_func_additive_on_carry_free_pairs(self, params):
        """Test s ⪯ t gives b(s) + b(t - s) = b(t) exactly."""
        p, n = params.p, params.n
        for s, t in product(range(params.order), repeat=2):
            if preceq(s, t, p, n):
                assert b_func(s, params) + b_func(t - s, params) == b_func(t, params)

    @pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)])
    def test_congruent_shifts_act_by_multiplication(self, p, n):
        """Test b_i ≡ b_n mod p^i makes b(s) ≡ b_n·s mod p^n."""
        q = p**n
        for bn in admissible_b(p, n):
            params = ScaffoldParams(p, n, tuple(bn % p**i for i in range(1, n)) + (bn,))
            for s in range(q):
                assert (b_func(s, params) - bn * s) % q == 0

    def test_tables_depend_on_shifts_mod_p_i(self):
        """Test a and r∘b only see b_i mod p^i."""
        base = ScaffoldParams(3, 2, (2, 7))
        moved = ScaffoldParams(3, 2, (2 + 3 * 4, 7 - 9 * 2))
        assert base.a_table == moved.a_table
        assert [base.r(x) for x in base.b_table] == [moved.r(x) for x in moved.b_table]


class TestIdealExponent:
    def test_window(self):
        ideal = IdealExponent(-2, 4)
        assert list(ideal.window) == [-2, -1, 0, 1]
        assert ideal.residue == 2
        assert 1 in ideal
        assert 2 not in ideal

    def test_check(self):
        with pytest.raises(DomainError, match="outside the window"):
            IdealExponent(0, 4).check(4)


class TestBiquadraticTable:
    @pytest.mark.parametrize("b,h,d_vec,w_vec,dd,ee", BIQUADRATIC_TABLE)
    def test_row(self, b, h, d_vec, w_vec, dd, ee):
        report = analyze(h, ScaffoldParams.uniform(2, 2, b))
        assert report.d == d_vec
        assert report.w == w_vec
        assert report.dd == dd
        assert report.ee == ee
        assert report.free == (d_vec == w_vec)
        assert report.min_generators == len(dd)
        assert report.embedding_dimension == len(ee)

    def test_module_functions_agree_with_report(self):
        params = ScaffoldParams.uniform(2, 2, 1)
        assert [d(s, -2, params) for s in range(4)] == [0, 1, 1, 1]
        assert [w(s, -2, params) for s in range(4)] == [0, 0, 0, 1]
        assert dd_set(-2, params) == [0, 1, 2]
        assert ee_set(-2, params) == [0, 1, 2, 3]
        assert dd_set(2, ScaffoldParams.uniform(2, 2, 3)) == [0]
        assert ee_set(2, ScaffoldParams.uniform(2, 2, 3)) == [0, 1, 2]


class TestDAndH:
    def test_examples(self):
        params = ScaffoldParams.uniform(2, 2, 3)
        assert D(1, 3, 1, params) == 1
        assert H(1, 3, 1, params) == 2

    def test_t_outside_window(self):
        params = ScaffoldParams.uniform(2, 2, 3)
        with pytest.raises(DomainError):
            D(1, 5, 1, params)
        with pytest.raises(DomainError):
            H(1, 0, 1, params)

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_division_identity(self, params):
        """Test t + b(s) = H(s, t) + p^n·D(s, t) with H in the window."""
        q = params.order
        for h in range(q):
            for s in range(q):
                for t in range(h, h + q):
                    value = H(s, t, h, params)
                    assert h <= value < h + q
                    assert t + b_func(s, params) == value + q * D(s, t, h, params)

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_d_is_D_at_b(self, params):
        for h in range(params.order):
            b = valuation_criterion_b(h, params)
            assert all(d(s, h, params) == D(s, b, h, params) for s in range(params.order))
            assert d(0, h, params) == 0


class TestW:
    def test_prime_degree_example(self):
        params = ScaffoldParams(5, 1, (3,))
        assert [d(s, 0, params) for s in range(5)] == [0, 1, 1, 2, 3]
        assert [w(s, 0, params) for s in range(5)] == [0, 0, 1, 2, 3]

    @pytest.mark.parametrize("p,n", SMALL_CASES)
    def test_three_forms_agree(self, p, n):
        for b in admissible_b(p, n):
            params = ScaffoldParams.uniform(p, n, b)
            for h in range(p**n):
                for s in range(p**n):
                    value = w(s, h, params)
                    assert value == w_jform(s, h, params) == w_window(s, h, params)

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_three_forms_agree_for_mixed_shifts(self, params):
        for h in range(-params.order, params.order):
            for s in range(params.order):
                assert w(s, h, params) == w_jform(s, h, params) == w_window(s, h, params)

    @pytest.mark.parametrize("p,n", SMALL_CASES)
    def test_superadditive(self, p, n):
        """Test w(r + s) >= w(r) + w(s) when r + s has no carries."""
        q = p**n
        for b in admissible_b(p, n):
            params = ScaffoldParams.uniform(p, n, b)
            for h in range(q):
                for r, s in product(range(q), repeat=2):
                    if preceq(s, q - 1 - r, p, n):
                        assert w(r + s, h, params) >= w(r, h, params) + w(s, h, params)

    @pytest.mark.parametrize("p,n,m", [(2, 2, (1, 1)), (2, 3, (2, 0, 1)), (3, 2, (1, 2)), (5, 2, (3, 1))])
    def test_minus_one_shifts(self, p, n, m):
        """Test b_i = -1 + m_i·p^i at h = 0 makes d = w digit-linear in m."""
        params = ScaffoldParams(p, n, tuple(-1 + mi * p**i for i, mi in enumerate(m, start=1)))
        report = analyze(0, params)
        for s in range(p**n):
            vec = digits(s, p, n)
            expected = sum(vec.digit(n - i) * mi for i, mi in enumerate(m, start=1))
            assert report.d[s] == report.w[s] == expected
            assert report.w[s] == sum(vec.digit(k) * report.w[p**k] for k in range(n))
        assert report.free


class TestEpsilon:
    def test_examples(self):
        params = ScaffoldParams.uniform(2, 2, 3)
        assert epsilon(1, 3, 1, params) == 1
        assert epsilon(0, 3, 1, params) == 0
        assert epsilon(1, 3, 0, ScaffoldParams(5, 1, (3,))) == 1

    def test_precondition(self):
        params = ScaffoldParams(5, 1, (3,))
        # a(2) = 1 and 2 is not below 1
        assert a_func(2, params) == 1
        with pytest.raises(DomainError, match="epsilon needs"):
            epsilon(2, 2, 0, params)

    def test_t_outside_window(self):
        with pytest.raises(DomainError):
            epsilon(1, 5, 0, ScaffoldParams(5, 1, (3,)))

    @pytest.mark.parametrize("p,n", SMALL_CASES)
    def test_values_and_minimizer(self, p, n):
        """Test epsilon is 0 or 1 and vanishes somewhere on every admissible t-set."""
        q = p**n
        for b in admissible_b(p, n):
            params = ScaffoldParams.uniform(p, n, b)
            for h in range(q):
                for s in range(q):
                    values = [
                        epsilon(s, t, h, params)
                        for t in range(h, h + q)
                        if preceq(s, a_func(t, params), p, n)
                    ]
                    assert set(values) <= {0, 1}
                    assert 0 in values


class TestWindowIdentities:
    @pytest.mark.parametrize("params", MIXED_PARAMS + [ScaffoldParams.uniform(5, 2, 7)], ids=str)
    def test_t_to_u_bijection(self, params):
        """Test u + a(t) = p^n - 1 + s matches D(s, t) with d(u) - d(u - s)."""
        p, n, q = params.p, params.n, params.order
        for h in range(q):
            b = valuation_criterion_b(h, params)
            for s in range(q):
                window = [t for t in range(h, h + q) if preceq(s, a_func(t, params), p, n)]
                us = [q - 1 + s - a_func(t, params) for t in window]
                assert sorted(us) == list(dominating(s, p, n))
                for t, u in zip(window, us):
                    assert H(s, t, h, params) == H(u, b, h, params)
                    assert D(s, t, h, params) == d(u, h, params) - d(u - s, h, params)

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_a_of_H(self, params):
        """Test s ⪯ a(t) gives a(H(s, t)) = a(t) - s."""
        p, n, q = params.p, params.n, params.order
        for h in range(q):
            for t in range(h, h + q):
                at = a_func(t, params)
                for s in range(q):
                    if preceq(s, at, p, n):
                        assert a_func(H(s, t, h, params), params) == at - s


class TestAnalyze:
    def test_prime_degree_report(self):
        report = analyze(0, ScaffoldParams(5, 1, (3,)))
        assert report.b_exponent == 3
        assert report.w == (0, 0, 1, 2, 3)
        assert not report.free
        assert report.dd == (0, 1)
        assert report.ee == (0, 1, 2, 3, 4)
        assert report.min_generators == 2
        assert report.embedding_dimension == 5
        assert report.tolerance_required == 8

    def test_free_examples(self):
        assert analyze(0, ScaffoldParams(5, 1, (2,))).free
        report = analyze(1, ScaffoldParams.uniform(2, 2, 3))
        assert not report.free
        assert report.min_generators == 3
        assert report.embedding_dimension == 4

    def test_weak_example(self):
        report = analyze(2, ScaffoldParams.uniform(3, 2, 1))
        assert report.min_generators == 3
        assert report.embedding_dimension == 4

    @pytest.mark.parametrize("p,n", SMALL_CASES)
    def test_report_invariants(self, p, n):
        for b in admissible_b(p, n):
            params = ScaffoldParams.uniform(p, n, b)
            for h in range(p**n):
                report = analyze(h, params)
                assert report.d[0] == report.w[0] == 0
                assert all(0 <= wv <= dv for dv, wv in zip(report.d, report.w))
                assert report.free == (report.min_generators == 1)
                assert 0 in report.dd
                assert {0, *(p**k for k in range(n))} <= set(report.ee)
                assert report.embedding_dimension >= n + 1
                assert h <= report.b_exponent < h + p**n

    def test_negative_shift_parameters(self):
        """Test shift parameters of either sign give a report with w <= d."""
        params = ScaffoldParams(3, 2, (-4, 11))
        assert analyze(-8, params).w == (0, 1, 2, -2, -1, 1, -3, -2, -1)
        for h in range(-9, 9):
            report = analyze(h, params)
            assert report.d[0] == report.w[0] == 0
            assert all(wv <= dv for dv, wv in zip(report.d, report.w))
            assert min(report.w) < 0
            assert report.free == (report.min_generators == 1)

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_residue_invariance(self, params):
        """Test h and h + p^n give the same structure."""
        q = params.order
        for h in range(-q, q):
            low, high = analyze(h, params), analyze(h + q, params)
            assert low.structure() == high.structure()
            assert high.b_exponent == low.b_exponent + q
            assert high.h == low.h + q

    @pytest.mark.parametrize("params", MIXED_PARAMS, ids=str)
    def test_shift_perturbation(self, params):
        """Test b_i -> b_i + c_i·p^i moves d and w by the same digit-linear amount."""
        p, n, q = params.p, params.n, params.order
        cs = tuple(range(1, n + 1))
        moved = ScaffoldParams(p, n, tuple(bi + c * p**i for i, (bi, c) in enumerate(zip(params.b, cs), start=1)))
        for h in range(q):
            base, other = analyze(h, params), analyze(h, moved)
            assert other.b_exponent == base.b_exponent
            for s in range(q):
                vec = digits(s, p, n)
                shift = sum(c * vec.digit(n - i) for i, c in enumerate(cs, start=1))
                assert other.d[s] - base.d[s] == shift
                assert other.w[s] - base.w[s] == shift
            assert other.free == base.free
            assert other.dd == base.dd
            assert other.ee == base.ee
            assert other.tolerance_required == base.tolerance_required

    def test_report_dict_round_trip(self):
        report = analyze(-2, ScaffoldParams.uniform(2, 2, 1))
        data = report.to_dict()
        assert data["d"] == [0, 1, 1, 1]
        assert data["b"] == [1, 1]
        assert StructureReport.from_dict(data) == report


class TestRingCriteria:
    def test_ring_free_with_witness(self):
        result = ring_of_integers_free(ScaffoldParams(3, 2, (8, 8)))
        assert result.free
        assert result.residue == 8
        assert result.witness == 2

    def test_ring_not_free(self):
        result = ring_of_integers_free(ScaffoldParams(5, 1, (3,)))
        assert not result.free
        assert result.witness is None

    def test_congruence_precondition_names_index(self):
        with pytest.raises(DomainError, match="b_1"):
            ring_of_integers_free(ScaffoldParams(3, 2, (1, 2)))

    def test_inverse_different(self):
        assert inverse_different_free(ScaffoldParams.uniform(2, 2, 3))
        assert not inverse_different_free(ScaffoldParams.uniform(2, 2, 1))

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    @pytest.mark.parametrize("n", [1, 2])
    def test_divisibility_criteria(self, p, n):
        """Test both criteria across every congruent class with n <= 2."""
        q = p**n
        for bn in admissible_b(p, n):
            params = ScaffoldParams(p, n, (bn % p, bn) if n == 2 else (bn,))
            result = ring_of_integers_free(params)
            divides = any((p**m - 1) % bn == 0 for m in range(1, n + 1))
            assert result.free == divides
            assert inverse_different_free(params) == (bn == q - 1)


class TestBFunction:
    def test_bijective(self):
        result = bfunction_bijective((2, 1), 2, 2)
        assert result.bijective
        assert result.valuations == (1, 0)
        assert result.relabeling == (0, 1)
        assert result.collision is None

    def test_collision(self):
        result = bfunction_bijective((1, 1), 2, 2)
        assert not result.bijective
        assert result.collision == ((0, 1), (1, 0))
        assert result.relabeling is None

    def test_relabeling(self):
        result = bfunction_bijective((3, 2), 2, 2)
        assert result.bijective
        assert result.valuations == (0, 1)
        assert result.relabeling == (1, 0)

    def test_valuation_too_high(self):
        result = bfunction_bijective((4, 1), 2, 2)
        assert not result.bijective
        assert result.valuations == (2, 0)

    def test_zero_coefficient(self):
        result = bfunction_bijective((0, 1), 2, 2)
        assert not result.bijective
        assert result.valuations == (None, 0)

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            bfunction_bijective((1, 3, 9), 3, 3, limit=10)

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            bfunction_bijective((1,), 3, 2)

    @pytest.mark.slow
    @pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
    def test_exhaustive(self, p, n):
        """Test brute force and the valuation profile agree on every small tuple."""
        q = p**n
        coefficients = range(-q, q + 1)
        for a in product(coefficients, repeat=n):
            result = bfunction_bijective(a, p, n)
            if result.bijective:
                relabeled = [result.valuations[i] for i in result.relabeling]
                assert relabeled == list(range(n - 1, -1, -1))
