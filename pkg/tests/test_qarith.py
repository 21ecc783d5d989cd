import itertools
import math
from fractions import Fraction

import pytest
import sympy
from conftest import Q, from_sympy, to_sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qdeform.polycore import Unit, parse_poly
from qdeform.qarith import (
    CFWord,
    Flavor,
    IllDefinedWord,
    eval_cf_classical,
    eval_negative_cf_q,
    eval_regular_cf_q,
    expected_N,
    negative_cf,
    parse_cf_word,
    parse_fraction,
    q_int,
    q_rational,
    q_series_from_cf,
    q_series_limit,
    q_transform,
    regular_cf,
)

P = parse_poly


def sym_qint(n, var):
    if n >= 0:
        return sum((var**i for i in range(n)), sympy.Integer(0))
    return -sum((var ** (-i) for i in range(1, -n + 1)), sympy.Integer(0))


def nested_regular(a):
    """Nested q-fraction with alternating q and 1/q levels, evaluated in sympy."""
    value = None
    for i in reversed(range(len(a))):
        var = Q if i % 2 == 0 else 1 / Q
        term = sym_qint(a[i], var)
        value = term if value is None else term + var ** a[i] / value
    return sympy.cancel(value)


def nested_negative(c):
    value = None
    for x in reversed(c):
        term = sym_qint(x, Q)
        value = term if value is None else term - Q ** (x - 1) / value
    return sympy.cancel(value)


def classical_nested(coeffs, sign):
    value = Fraction(coeffs[-1])
    for x in reversed(coeffs[:-1]):
        value = x + sign / value
    return value


def as_sympy(unit: Unit, f):
    return sympy.cancel(sign_pow(unit) * to_sympy(f.num) / to_sympy(f.den))


def sign_pow(unit):
    return unit.sign * Q**unit.exp


fractions = st.builds(
    lambda r, s: Fraction(r, s), st.integers(-500, 500), st.integers(1, 300)
)
small_fractions = st.builds(lambda r, s: Fraction(r, s), st.integers(-25, 25), st.integers(1, 12))
# the sympy oracles are slow, so they get fewer examples
oracle = settings(max_examples=25)


class TestQInt:
    def test_values(self):
        assert q_int(3) == P("1+q+q^2")
        assert q_int(0) == 0
        assert q_int(-2) == P("-q^-1-q^-2")

    @given(st.integers(-30, 30))
    def test_matches_sum(self, n):
        assert q_int(n) == from_sympy(sym_qint(n, Q))
        assert q_int(n).eval_one() == n


class TestClassicalCF:
    @pytest.mark.parametrize(
        "r,s,reg,neg",
        [
            (5, 12, [0, 2, 2, 2], [1, 2, 4, 2]),
            (3, 5, [0, 1, 1, 2], [1, 3, 2]),
            (5, 3, [1, 1, 1, 1], [2, 3]),
            (12, 5, [2, 2, 1, 1], [3, 2, 3]),
            (-5, 3, [-2, 3], [-1, 2, 2]),
            (-1, 4, [-1, 1, 2, 1], [0, 4]),
        ],
    )
    def test_table(self, r, s, reg, neg):
        assert list(regular_cf(r, s).coeffs) == reg
        assert list(negative_cf(r, s).coeffs) == neg

    @given(fractions)
    def test_expansions_evaluate_back(self, x):
        reg = regular_cf(x.numerator, x.denominator)
        neg = negative_cf(x.numerator, x.denominator)
        assert len(reg.coeffs) % 2 == 0 and reg.canonical
        assert neg.canonical
        assert classical_nested(reg.coeffs, 1) == x
        assert classical_nested(neg.coeffs, -1) == x
        assert eval_cf_classical(reg) == x == eval_cf_classical(neg)

    def test_alternative_words(self):
        assert eval_cf_classical(CFWord(Flavor.REGULAR, (2, -1, -1, 2))) == Fraction(5, 3)
        assert eval_cf_classical(CFWord(Flavor.NEGATIVE, (-1, 0, 3, 3))) == Fraction(5, 3)

    def test_ill_defined(self):
        with pytest.raises(IllDefinedWord):
            eval_cf_classical(CFWord(Flavor.NEGATIVE, (1, 0)))

    def test_errors(self):
        with pytest.raises(ValueError):
            regular_cf(1, 0)
        with pytest.raises(ValueError):
            negative_cf(2, 4)


class TestQEvaluation:
    def test_five_thirds_three_ways(self):
        target = (P("1+q+2q^2+q^3"), P("1+q+q^2"))
        for word, ev in (((1, 1, 1, 1), eval_regular_cf_q), ((2, -1, -1, 2), eval_regular_cf_q),
                         ((2, 3), eval_negative_cf_q), ((-1, 0, 3, 3), eval_negative_cf_q)):
            unit, f = ev(word)
            assert unit == Unit(1, 0) and (f.num, f.den) == target

    def test_five_twelfths(self):
        unit, f = eval_regular_cf_q((0, 2, 2, 2))
        assert unit == Unit(1, 2)
        assert f.num == P("1+2q+q^2+q^3") and f.den == P("1+2q+3q^2+3q^3+2q^4+q^5")

    def test_negative_quarter(self):
        unit, f = eval_negative_cf_q((0, 4))
        assert unit == Unit(-1, -1) and f.num == 1 and f.den == P("1+q+q^2+q^3")

    def test_odd_regular_word_rejected(self):
        with pytest.raises(ValueError):
            eval_regular_cf_q((1, 2, 3))

    @given(small_fractions)
    @oracle
    def test_matches_nested_oracle(self, x):
        reg = regular_cf(x.numerator, x.denominator).coeffs
        neg = negative_cf(x.numerator, x.denominator).coeffs
        assume(len(reg) <= 10 and len(neg) <= 14)
        ours = as_sympy(*eval_regular_cf_q(reg))
        assert sympy.cancel(ours - nested_regular(reg)) == 0
        assert sympy.cancel(as_sympy(*eval_negative_cf_q(neg)) - nested_negative(neg)) == 0


class TestCanonical:
    @pytest.mark.parametrize(
        "r,s,sign,N,R,S",
        [
            (-5, 3, -1, 2, "1+2q+q^2+q^3", "1+q+q^2"),
            (-1, 4, -1, 1, "1", "1+q+q^2+q^3"),
            (5, 12, 1, -2, "1+2q+q^2+q^3", "1+2q+3q^2+3q^3+2q^4+q^5"),
            (3, 5, 1, -1, "1+q+q^2", "1+2q+q^2+q^3"),
            (5, 3, 1, 0, "1+q+2q^2+q^3", "1+q+q^2"),
            (12, 5, 1, 0, "1+2q+3q^2+3q^3+2q^4+q^5", "1+q+2q^2+q^3"),
        ],
    )
    def test_table(self, r, s, sign, N, R, S):
        x = q_rational(r, s)
        assert (x.sign, x.N, x.R, x.S) == (sign, N, P(R), P(S))

    @pytest.mark.parametrize("r", range(1, 9))
    def test_q_integer_ratios(self, r):
        big = q_rational(r + 1, r)
        assert (big.sign, big.N, big.R, big.S) == (1, 0, q_int(r + 1), q_int(r))
        neg = q_rational(-(r + 1), r)
        assert (neg.sign, neg.N, neg.R, neg.S) == (-1, 2, q_int(r + 1), q_int(r))
        small = q_rational(r, r + 1)
        assert (small.sign, small.N, small.R, small.S) == (1, -1, q_int(r), q_int(r + 1))
        neg_small = q_rational(-r, r + 1)
        assert (neg_small.sign, neg_small.N) == (-1, 1)

    def test_zero(self):
        z = q_rational(0, 1)
        assert (z.sign, z.N, z.R, z.S) == (0, 0, 0, 1)

    def test_integers(self):
        for n in range(-6, 7):
            if n:
                x = q_rational(n)
                assert x.S == 1 and x.numerator() == q_int(n)

    @given(fractions.filter(lambda x: x != 0))
    def test_properties(self, x):
        c = q_rational(x.numerator, x.denominator)
        assert c.sign == (1 if x > 0 else -1)
        for poly in (c.R, c.S):
            assert poly.min_deg == 0 and poly.has_nonneg_coeffs()
            assert poly.coeff(0) == 1 and poly.leading_coeff() == 1
        assert c.R.eval_one() == abs(x.numerator) and c.S.eval_one() == x.denominator
        assert sympy.gcd(to_sympy(c.R), to_sympy(c.S)) == 1
        N = c.N
        if x >= 1:
            assert N == 0
        elif x <= 0:
            assert -N <= x < -N + 1
        else:
            assert Fraction(1, 1 - N) <= x < Fraction(1, -N)
        assert N == expected_N(x)

    @given(fractions)
    def test_both_flavors_agree(self, x):
        c = q_rational(x.numerator, x.denominator)
        for ev, fn in ((eval_regular_cf_q, regular_cf), (eval_negative_cf_q, negative_cf)):
            unit, f = ev(fn(x.numerator, x.denominator).coeffs)
            if c.sign == 0:
                assert f.num == 0
            else:
                assert unit == c.unit and f == c.ratfn


class TestTransforms:
    def test_examples(self):
        five_thirds = q_rational(5, 3)
        assert q_transform(five_thirds, "shift") == q_rational(8, 3)
        assert q_transform(five_thirds, "negate") == q_rational(-5, 3)
        assert q_transform(five_thirds, "invert") == q_rational(3, 5)

    def test_invert_zero(self):
        with pytest.raises(ZeroDivisionError):
            q_transform(q_rational(0), "invert")

    @given(small_fractions, st.integers(-5, 5))
    @oracle
    def test_shift_identity(self, x, n):
        c = q_rational(x.numerator, x.denominator)
        lhs = as_sympy(*_parts(q_transform(c, "shift", n)))
        rhs = Q**n * as_sympy(*_parts(c)) + sym_qint(n, Q)
        assert sympy.cancel(lhs - rhs) == 0

    @given(small_fractions.filter(lambda x: x != 0))
    @oracle
    def test_negate_and_invert_identities(self, x):
        c = q_rational(x.numerator, x.denominator)
        val = as_sympy(*_parts(c))
        neg = as_sympy(*_parts(q_transform(c, "negate")))
        inv = as_sympy(*_parts(q_transform(c, "invert")))
        assert sympy.cancel(neg + val.subs(Q, 1 / Q) / Q) == 0
        assert sympy.cancel(inv * val.subs(Q, 1 / Q) - 1) == 0


def _parts(c):
    if c.sign == 0:
        return Unit(1, 0), c.ratfn
    return c.unit, c.ratfn


class TestSeriesFromCF:
    def test_twelve_fifths(self):
        s = q_rational(12, 5).series(12)
        assert s.coeff_range(0, 12) == [1, 1, 0, 0, 1, 0, -2, 1, 3, -3, -4, 7, 4]

    def test_one_plus_sqrt2_regular_stream(self):
        s = q_series_from_cf(itertools.chain([2], itertools.repeat(2)), 16)
        assert s.coeff_range(13, 16) == [-55, 18, 146, -155]

    def test_negative_stream_agrees(self):
        reg = q_series_from_cf(itertools.repeat(1), 12)
        neg = q_series_from_cf(itertools.chain([2], itertools.repeat(3)), 12, flavor="neg")
        assert reg == neg

    def test_finite_stream_is_exact(self):
        s = q_series_from_cf([1, 1, 1, 1], 10)
        assert s == q_rational(5, 3).series(10)
        assert q_series_from_cf([1, 1, 1], 10) == q_rational(3, 2).series(10)

    def test_empty_stream(self):
        with pytest.raises(ValueError):
            q_series_from_cf([], 5)

    def test_bad_coefficient(self):
        with pytest.raises(ValueError):
            q_series_from_cf([3, 1, 2], 5, flavor="neg")

    def test_decimal_truncations(self):
        approximants = [Fraction(int(math.isqrt(2 * 10 ** (2 * k))), 10**k) for k in range(1, 12)]
        via_decimals = q_series_limit(approximants, 8)
        via_cf = q_series_from_cf(itertools.chain([1], itertools.repeat(2)), 8)
        assert via_decimals == via_cf


class TestParsing:
    def test_fraction(self):
        assert parse_fraction(" -5/3 ") == Fraction(-5, 3)
        assert parse_fraction("7") == 7
        with pytest.raises(ValueError):
            parse_fraction("5/0")
        with pytest.raises(ValueError):
            parse_fraction("five")

    def test_words(self):
        assert parse_cf_word("[1, 2,3]") == CFWord(Flavor.REGULAR, (1, 2, 3))
        assert parse_cf_word("[[2,3]]") == CFWord(Flavor.NEGATIVE, (2, 3))
        with pytest.raises(ValueError):
            parse_cf_word("[1,a]")
        with pytest.raises(ValueError):
            parse_cf_word("[]")
