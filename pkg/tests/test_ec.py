from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radlab.arith import factorize
from radlab.ec import ec, ec_bounds, ec_lemma3, ec_lemma4, ec_vector
from radlab.errors import InvalidArgument, OutOfDomain, PreconditionViolation

from oracles import coprime_upto


def F(n, table):
    return factorize(n, table)


class TestEc:
    def test_examples(self, table):
        assert ec(F(10, table), 3) == 2
        assert ec(F(10, table), 1) == 4
        assert ec(F(9, table), 2) == 3

    def test_rational_argument(self, table):
        # c/x = 35/2 -> n <= 17 coprime to 10
        assert ec(F(10, table), Fraction(4, 7)) == coprime_upto(17, 10)
        assert ec(F(12, table), Fraction(5, 2)) == coprime_upto(4, 12)

    @pytest.mark.parametrize("x", [0, -2, Fraction(-1, 3)])
    def test_nonpositive_rejected(self, table, x):
        with pytest.raises(InvalidArgument):
            ec(F(10, table), x)

    def test_oracle_small(self, table):
        for c in range(2, 300):
            f = F(c, table)
            for x in range(1, c):
                assert ec(f, x) == coprime_upto(c // x, c)

    @given(st.integers(2, 5000), st.integers(1, 5000), st.integers(1, 50))
    def test_equals_coprime_count_rational(self, table, c, u, v):
        x = Fraction(u, v)
        assert ec(F(c, table), x) == coprime_upto(int(Fraction(c) / x), c)

    def test_vector_matches_scalar(self, table):
        for c in (2, 12, 30, 210, 2310, 9973, 17640):
            f = F(c, table)
            xs = np.arange(1, min(c, 3000))
            assert ec_vector(f, xs).tolist() == [ec(f, int(x)) for x in xs]

    def test_monotone_in_x(self, table):
        for c in range(2, 400):
            f = F(c, table)
            vals = [ec(f, x) for x in range(1, c)]
            assert all(a >= b for a, b in zip(vals, vals[1:]))


class TestBounds:
    def test_ten_three(self, table):
        b = ec_bounds(F(10, table), 3)
        assert b.lower == 0 and b.value == 2 and b.upper == Fraction(10, 3)
        assert b.strict

    def test_four_three(self, table):
        b = ec_bounds(F(4, table), 3)
        assert b.value == 1 and b.lemma2_branch == "one" and b.lemma2_holds

    def test_nine_two(self, table):
        b = ec_bounds(F(9, table), 2)
        assert (b.lower, b.value, b.upper) == (2, 3, 4)
        assert b.lemma2_branch == "main" and b.lemma2_holds

    def test_domain(self, table):
        with pytest.raises(OutOfDomain):
            ec_bounds(F(10, table), 10)
        with pytest.raises(OutOfDomain):
            ec_bounds(F(1, table), Fraction(1, 2))

    @given(st.integers(2, 3000), st.integers(1, 3000), st.integers(1, 7))
    def test_envelope_at_rationals(self, table, c, u, v):
        x = Fraction(u % c or 1, v)
        if x >= c:
            return
        b = ec_bounds(F(c, table), x)
        assert b.strict and b.lemma2_holds


class TestPrimePowerIdentities:
    def test_square_power_examples(self, table):
        assert ec_lemma3(F(9, table), 0) == 2
        assert ec_lemma3(F(12, table), 0) == 2
        assert ec_lemma3(F(4, table), 0) == 1

    def test_square_power_precondition(self, table):
        with pytest.raises(PreconditionViolation):
            ec_lemma3(F(10, table), 0)

    def test_simple_prime_examples(self, table):
        assert ec_lemma4(F(10, table), 1) == 1
        assert ec_lemma4(F(10, table), 0) == 2
        assert ec_lemma4(F(6, table), 1) == 1
        assert ec_lemma4(F(3, table), 0) == 1

    def test_simple_prime_precondition(self, table):
        with pytest.raises(PreconditionViolation):
            ec_lemma4(F(12, table), 0)

    def test_identities_against_counting(self, table):
        # both identities compared to the plain count n <= c/q, (n, c) = 1
        for c in range(2, 1500):
            f = F(c, table)
            for i, (q, a) in enumerate(f.factors):
                fn = ec_lemma3 if a >= 2 else ec_lemma4
                assert fn(f, i) == coprime_upto(c // q, c)
