import itertools
import math
from fractions import Fraction

import pytest
import sympy
from sympy.ntheory.continued_fraction import continued_fraction_periodic
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qdeform.polycore import exact_divide, parse_poly
from qdeform.qarith import Flavor, q_series_from_cf, q_series_limit
from qdeform.qmodular import QMat2, m_neg_word, mobius_series
from qdeform.qquadratic import (
    NotHyperbolic,
    PeriodicCF,
    QSurd,
    QuadNumber,
    Surd,
    abc,
    desnanot_jacobi_check,
    mobius_apply_qsurd,
    negative_cf_stream,
    parse_surd,
    periodic_negative_cf,
    prs,
    q_quadratic,
    qsurd_series,
    surd_compare,
)

P = parse_poly


def non_square(p):
    return math.isqrt(p) ** 2 != p


surds = st.builds(
    Surd,
    st.integers(-20, 20),
    st.sampled_from([1, -1]),
    st.integers(2, 200).filter(non_square),
    st.integers(1, 10),
)
periods = st.lists(st.integers(2, 5), min_size=1, max_size=5).filter(lambda c: max(c) > 2)


def sym(x: Surd):
    return (x.r + x.sign * sympy.sqrt(x.p)) / x.s


def sympy_hj(x: Surd, n):
    """First n Hirzebruch-Jung coefficients by exact ceiling in sympy."""
    v, out = sym(x), []
    for _ in range(n):
        c = int(sympy.floor(v)) + 1
        out.append(c)
        v = sympy.nsimplify(1 / (c - v))
        v = sympy.radsimp(v)
    return out


def regular_convergents(x: Surd, n):
    """Convergents of the regular continued fraction, from sympy's periodic expansion."""
    cf = continued_fraction_periodic(x.r, x.s, x.p, x.sign)
    head, period = [a for a in cf if not isinstance(a, list)], cf[-1]
    coeffs = head + list(itertools.islice(itertools.cycle(period), n))
    h0, h1, k0, k1 = 1, coeffs[0], 0, 1
    yield Fraction(h1, k1)
    for a in coeffs[1:]:
        h0, h1, k0, k1 = h1, a * h1 + h0, k1, a * k1 + k0
        yield Fraction(h1, k1)


# -- classical side -----------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(surds)
def test_periodic_cf_matches_exact_ceiling(x):
    cf = periodic_negative_cf(x)
    got = list(itertools.islice(cf.stream(), 12))
    assert got == sympy_hj(x, 12)


@settings(max_examples=100)
@given(surds)
def test_periodic_cf_shape(x):
    cf = periodic_negative_cf(x)
    assert cf.period and all(c >= 2 for c in cf.period)
    assert max(cf.period) > 2
    # the periodic tail is a fixed point of M(period), so trace > 2 at q = 1
    assert m_neg_word(cf.period).trace().eval_one() > 2


def test_periodic_cf_examples():
    assert str(periodic_negative_cf(parse_surd("(1+sqrt(5))/2"))) == "[[2,(3)*]]"
    assert periodic_negative_cf(parse_surd("sqrt(2)")) == PeriodicCF((2,), (2, 4))
    assert periodic_negative_cf(parse_surd("(3+sqrt(5))/2")) == PeriodicCF((), (3,))
    assert list(itertools.islice(negative_cf_stream(parse_surd("1+sqrt(2)")), 5)) == [3, 2, 4, 2, 4]


@settings(max_examples=200)
@given(surds, st.fractions(min_value=-30, max_value=30, max_denominator=20))
def test_surd_compare(x, t):
    assert surd_compare(x, t) == (1 if sym(x) > sympy.Rational(t.numerator, t.denominator) else -1)


@settings(max_examples=200)
@given(surds)
def test_floor_and_value(x):
    assert x.floor() == int(sympy.floor(sym(x)))
    assert math.isclose(float(x), float(sym(x)))
    assert math.isclose(float(x.quad()), float(x))


def test_surd_validation():
    with pytest.raises(ValueError):
        Surd(1, 1, 4, 1)
    with pytest.raises(ValueError):
        Surd(1, 1, 5, 0)
    with pytest.raises(ValueError):
        Surd(1, 2, 5, 1)


def test_quad_number_reduces_squares():
    assert QuadNumber.make(2, 1, 8, 2) == QuadNumber.make(1, 1, 2, 1)
    assert Surd(0, 1, 8, 2).same_value(Surd(0, 1, 2, 1))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("(1+sqrt(5))/2", Surd(1, 1, 5, 2)),
        ("(3 - sqrt(13)) / 2", Surd(3, -1, 13, 2)),
        ("sqrt(7)", Surd(0, 1, 7, 1)),
        ("-sqrt(7)", Surd(0, -1, 7, 1)),
        ("2+sqrt(5)", Surd(2, 1, 5, 1)),
        ("1+2sqrt(3)", Surd(1, 1, 12, 1)),
        ("(sqrt(3))/4", Surd(0, 1, 3, 4)),
        ("sqrt(3)/4", Surd(0, 1, 3, 4)),
    ],
)
def test_parse_surd(text, expected):
    assert parse_surd(text) == expected


@pytest.mark.parametrize("text", ["1+sqrt(5)/2", "(1+sqrt(5)/2", "sqrt(4)", "sqrt5", "(1+sqrt(5))/0", ""])
def test_parse_surd_rejects(text):
    with pytest.raises(ValueError):
        parse_surd(text)


# -- quadratic equations ------------------------------------------------------


@pytest.mark.parametrize("c", [(1, 1, 1), (2, 2, 2), (2,), (1,), (2, 2)])
def test_not_hyperbolic(c):
    with pytest.raises(NotHyperbolic):
        abc(c)
    with pytest.raises(NotHyperbolic):
        prs(c)


def test_golden_equation():
    A, B, C = abc((3,))
    assert (A, B, C) == (P("1"), P("1 + q + q^2"), P("q^2"))
    Pp, R, S = prs((3,))
    assert Pp == P("1 + 2*q + 3*q^2 + 2*q^3 + q^4 - 4*q^2")
    assert R == P("1 + q + q^2")
    assert S == P("2")


@settings(max_examples=60)
@given(periods)
def test_prs_root_satisfies_abc(c):
    y = QSurd(prs(c).R, prs(c).P, prs(c).S)
    eq = abc(c)
    assert y.satisfies(eq)
    assert y.conjugate().satisfies(eq)
    # product of the roots is C / A
    assert (y.R * y.R - y.P) * eq.A == eq.C * y.S * y.S


@settings(max_examples=60)
@given(periods)
def test_discriminant_palindromic(c):
    assert prs(c).P.is_palindrome()


@settings(max_examples=100)
@given(st.lists(st.integers(-4, 6), min_size=1, max_size=8))
def test_desnanot_jacobi(c):
    assert desnanot_jacobi_check(c)


@settings(max_examples=40)
@given(periods)
def test_prs_root_is_fixed_point(c):
    y = QSurd(prs(c).R, prs(c).P, prs(c).S)
    m = m_neg_word(c)
    f = y.series(30)
    assert mobius_series(m, f, 15) == f.truncate(15)


# -- closed forms -------------------------------------------------------------


def test_golden_closed_form():
    y = q_quadratic(parse_surd("(1+sqrt(5))/2"))
    assert y.R == P("q^2 + q - 1")
    assert y.S == P("2*q")
    assert y.P == P("1 - q + q^2") * P("1 + 3*q + q^2")
    assert y.branch == 1
    assert str(y).startswith("(-1 + q + q^2 + sqrt(")


@settings(max_examples=40, deadline=None)
@given(surds)
def test_closed_form_specializes(x):
    y = q_quadratic(x)
    assert y.at_one() == x.quad()
    assert y == y.canonical()


@settings(max_examples=25, deadline=None)
@given(surds)
def test_closed_form_series_vs_regular_convergents(x):
    y = q_quadratic(x)
    oracle = q_series_limit(regular_convergents(x, 60), 12)
    assert y.series(12) == oracle


@settings(max_examples=25, deadline=None)
@given(surds)
def test_closed_form_series_vs_negative_stream(x):
    y = q_quadratic(x)
    assert y.series(20) == q_series_from_cf(negative_cf_stream(x), 20, Flavor.NEGATIVE)


@settings(max_examples=40, deadline=None)
@given(periods, st.lists(st.integers(-3, 5), min_size=1, max_size=3))
def test_mobius_on_closed_forms(c, pre):
    y = QSurd(prs(c).R, prs(c).P, prs(c).S)
    m = m_neg_word(pre)
    try:
        z = mobius_apply_qsurd(m, y)
    except ZeroDivisionError:
        assume(False)
    assume(z.S.lowest_coeff() and z.S.min_deg <= 2)
    f = y.series(40)
    try:
        want = mobius_series(m, f, 10)
    except (ValueError, ZeroDivisionError):
        assume(False)
    assert z.series(10) == want


def test_mobius_rejects_rational_image():
    y = QSurd(P("1"), P("5"), P("2"))
    with pytest.raises(ValueError):
        # rank one: sends everything to 1
        mobius_apply_qsurd(QMat2.of(1, 1, 1, 1), y)


def test_canonical_removes_common_factor():
    t = P("1 + q")
    y = QSurd(P("q^2 + q - 1") * t, P("1 + 2*q + 3*q^2 + 2*q^3 + q^4") * t * t, P("2*q") * t)
    c = y.canonical()
    assert (c.R, c.S) == (P("q^2 + q - 1"), P("2*q"))
    z = QSurd(P("-3"), P("45"), P("-6")).canonical()
    assert (z.R, z.P, z.S, z.branch) == (P("1"), P("5"), P("2"), -1)


def test_same_value_across_representatives():
    y = q_quadratic(parse_surd("1+sqrt(2)"))
    t = P("2 + q")
    scaled = QSurd(y.R * t, y.P * t * t, y.S * t, y.branch)
    assert scaled.same_value(y)
    assert not y.conjugate().same_value(y)


@pytest.mark.parametrize("text", ["(1+sqrt(5))/2", "1+sqrt(2)", "(3+sqrt(13))/2", "2+sqrt(5)"])
def test_radicand_factor_over_cyclotomic(text):
    assert exact_divide(q_quadratic(parse_surd(text)).P, P("1 - q + q^2")) is not None


def test_cyclotomic_factor_not_universal():
    assert exact_divide(prs((4,)).P, P("1 - q + q^2")) is None


def test_series_of_qsurd_handles_shifted_denominator():
    y = q_quadratic(parse_surd("(1+sqrt(5))/2"))
    s = qsurd_series(y, 10)
    assert s.coeff_range(0, 6) == [1, 0, 1, -1, 2, -4, 8]
