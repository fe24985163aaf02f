"""Recurrence construction and polynomial reconstruction."""

from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from quadtables import (BigNum, MonicPolynomial, Polynomial,
                        PrecisionLossError, RecurrenceTable, build_recurrence,
                        context, cosine_kernel, generic_low_degree_check,
                        inner_product, log_kernel, moment_sequence, normalize,
                        pi_decimal, polynomial_from_recurrence)
from quadtables.orthopoly import conditioning_guard

F = Fraction


class TestPolynomial:
    def test_degree_and_evaluate(self):
        p = Polynomial((F(1), F(-3), F(2)))  # 2x^2 - 3x + 1
        assert p.degree == 2
        assert p.evaluate(F(2)) == 3
        assert p.evaluate(F(1, 2)) == 0

    def test_derivative(self):
        p = Polynomial((F(5), F(-3), F(0), F(4)))
        assert p.derivative().coefficients == (F(-3), F(0), F(12))

    def test_constant_derivative_is_zero(self):
        assert Polynomial((F(7),)).derivative().coefficients == (F(0),)

    def test_monic_requires_unit_leading_coefficient(self):
        MonicPolynomial((F(1, 3), F(1)))
        with pytest.raises(ValueError):
            MonicPolynomial((F(1), F(2)))


class TestInnerProduct:
    def test_constant_against_itself_is_mu0(self):
        mu = moment_sequence(log_kernel(1), 2)
        one = Polynomial((F(1),))
        assert inner_product(one, one, mu) == 1

    def test_first_orthogonal_norm(self):
        # <x - 1/4, x - 1/4> for the plain log weight is 7/144
        mu = moment_sequence(log_kernel(1), 2)
        p1 = Polynomial((F(-1, 4), F(1)))
        assert inner_product(p1, p1, mu) == F(7, 144)

    def test_orthogonality(self):
        mu = moment_sequence(log_kernel(1), 3)
        one = Polynomial((F(1),))
        p1 = Polynomial((F(-1, 4), F(1)))
        assert inner_product(one, p1, mu) == 0


class TestRecurrenceTableValidation:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            RecurrenceTable(log_kernel(1), a=(F(0),), b=(F(0), F(1)),
                            norms=(F(1), F(1)))

    def test_b0_must_vanish(self):
        with pytest.raises(ValueError):
            RecurrenceTable(log_kernel(1), a=(F(0), F(0)), b=(F(1), F(1)),
                            norms=(F(1), F(1), F(1)))

    def test_positive_norms_and_offdiagonals(self):
        with pytest.raises(ValueError):
            RecurrenceTable(log_kernel(1), a=(F(0), F(0)), b=(F(0), F(-1)),
                            norms=(F(1), F(1), F(1)))
        with pytest.raises(ValueError):
            RecurrenceTable(log_kernel(1), a=(F(0), F(0)), b=(F(0), F(1)),
                            norms=(F(1), F(0), F(1)))

    def test_symmetric_kernel_needs_zero_diagonal(self):
        with pytest.raises(ValueError):
            RecurrenceTable(cosine_kernel(), a=(F(1, 2),), b=(F(0),),
                            norms=(F(1), F(1)))


class TestExactLogRecurrence:
    def test_first_coefficients(self):
        t = build_recurrence(log_kernel(1), 2)
        assert t.digits is None
        assert t.n_max == 2
        assert t.a[0] == F(1, 4)
        assert t.a[1] == F(13, 28)
        assert t.b[1] == F(7, 144)
        assert t.norms[0] == 1

    @pytest.mark.parametrize("m, n, coefficients", [
        (1, 3, (F(-4679, 258800), F(5751, 16175), F(-3105, 2588), F(1))),
        (2, 2, (F(217, 7992), F(-19, 37), F(1))),
        (3, 1, (F(-1, 16), F(1))),
    ])
    def test_reconstructed_polynomials(self, m, n, coefficients):
        t = build_recurrence(log_kernel(m), n)
        assert polynomial_from_recurrence(t, n).coefficients == coefficients

    def test_degree_zero_and_top_extension(self):
        t = build_recurrence(log_kernel(1), 2)
        assert polynomial_from_recurrence(t, 0).coefficients == (F(1),)
        assert polynomial_from_recurrence(t, 3).degree == 3
        with pytest.raises(ValueError):
            polynomial_from_recurrence(t, 4)

    def test_norms_match_inner_products(self):
        t = build_recurrence(log_kernel(2), 4)
        mu = moment_sequence(log_kernel(2), 10)
        for n in range(5):
            p = polynomial_from_recurrence(t, n)
            assert t.norms[n] == inner_product(p, p, mu)

    def test_cosine_cannot_run_exact(self):
        with pytest.raises(ValueError):
            build_recurrence(cosine_kernel(), 3)


class TestDecimalRecurrence:
    def test_log_matches_exact_to_requested_digits(self):
        exact = build_recurrence(log_kernel(1), 8)
        approx = build_recurrence(log_kernel(1), 8, digits=45)
        assert approx.digits == 45
        for n in range(9):
            err = abs(Fraction(approx.a[n].value) - exact.a[n])
            assert err < Fraction(1, 10 ** 43)
            if n:
                rel = abs(Fraction(approx.b[n].value) - exact.b[n]) / exact.b[n]
                assert rel < Fraction(1, 10 ** 43)

    def test_entries_carry_the_conditioning_guard(self):
        t = build_recurrence(log_kernel(1), 8, digits=45)
        assert t.a[0].precision == 45 + conditioning_guard(log_kernel(1), 8)

    def test_cosine_diagonal_is_exactly_zero(self):
        t = build_recurrence(cosine_kernel(), 6, digits=40)
        assert all(v == 0 for v in t.a)

    def test_cosine_b1_closed_form(self):
        # b_1 = mu_2 / mu_0 = 1 - 8/pi^2
        t = build_recurrence(cosine_kernel(), 4, digits=60)
        with localcontext(context(80)):
            want = 1 - 8 / pi_decimal(80) ** 2
        err = abs(Fraction(t.b[1].value) - Fraction(want))
        assert err < Fraction(1, 10 ** 58)

    def test_cosine_p2_closed_form(self):
        # p_2 = x^2 - (1 - 8/pi^2)
        t = build_recurrence(cosine_kernel(), 3, digits=60)
        p2 = polynomial_from_recurrence(t, 2)
        assert p2.coefficients[1] == 0
        with localcontext(context(80)):
            want = 8 / pi_decimal(80) ** 2 - 1
        err = abs(Fraction(p2.coefficients[0].value) - Fraction(want))
        assert err < Fraction(1, 10 ** 58)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            build_recurrence(log_kernel(1), 0)
        with pytest.raises(ValueError):
            build_recurrence(log_kernel(1), 3, digits=0)


class TestGenericLowDegree:
    @pytest.mark.parametrize("m", range(1, 9))
    def test_closed_forms_verify(self, m):
        p1, p2 = generic_low_degree_check(m)
        assert p1.degree == 1
        assert p2.degree == 2

    def test_matches_tabulated_m1(self):
        p1, p2 = generic_low_degree_check(1)
        assert p1.coefficients == (F(-1, 4), F(1))
        assert p2.coefficients == (F(17, 252), F(-5, 7), F(1))

    def test_rejects_bad_m(self):
        with pytest.raises(ValueError):
            generic_low_degree_check(0)


class TestNormalize:
    def test_inverse_norm_squares_back(self):
        p1 = MonicPolynomial((F(-1, 4), F(1)))
        q = normalize(p1, F(7, 144), digits=50)
        inv = Fraction(q.inverse_norm.value)
        assert abs(inv * inv - Fraction(144, 7)) < Fraction(1, 10 ** 45)
        assert q.leading_coefficient is q.inverse_norm
        assert q.degree == 1

    def test_evaluate_scales(self):
        p1 = MonicPolynomial((F(-1, 4), F(1)))
        q = normalize(p1, F(7, 144), digits=50)
        got = Fraction(q.evaluate(BigNum(1, 50)).value)
        want = Fraction(3, 4) * Fraction(q.inverse_norm.value)
        assert abs(got - want) < Fraction(1, 10 ** 48)

    def test_bignum_norm_defaults_digits(self):
        n2 = BigNum(F(7, 144), 35)
        assert normalize(MonicPolynomial((F(-1, 4), F(1))), n2
                         ).inverse_norm.precision == 35

    def test_rational_norm_requires_digits(self):
        with pytest.raises(ValueError):
            normalize(MonicPolynomial((F(0), F(1))), F(1, 2))

    def test_rejects_nonpositive_norm(self):
        with pytest.raises(PrecisionLossError):
            normalize(MonicPolynomial((F(0), F(1))), F(-1), digits=30)
