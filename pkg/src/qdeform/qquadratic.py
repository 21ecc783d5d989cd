"""Quadratic irrationals and their q-deformations ``(R ± sqrt(P)) / S``."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

from .polycore import ZERO, LaurentPoly, QSeries, exact_divide, poly_gcd, series_sqrt
from .qmodular import QMat2, continuant, m_neg_word

__all__ = [
    "Surd",
    "PeriodicCF",
    "QSurd",
    "ABC",
    "PRS",
    "NotHyperbolic",
    "surd_compare",
    "periodic_negative_cf",
    "negative_cf_stream",
    "abc",
    "prs",
    "mobius_apply_qsurd",
    "q_quadratic",
    "qsurd_series",
    "desnanot_jacobi_check",
    "parse_surd",
]

Poly = LaurentPoly


class NotHyperbolic(ValueError):
    """The word's matrix has |trace| <= 2 at q = 1, so no quadratic fixed point."""


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class QuadNumber:
    """``a + sign * sqrt(d)`` with rational a and d >= 0.

    When d is not a rational square, ``sqrt(d)`` is irrational, so two such
    numbers are equal exactly when a, d and sign agree.  Rational values are
    stored with d = 0 and sign = 0.  No factoring is needed, which matters
    because d can be a very large integer.
    """

    a: Fraction
    d: Fraction
    sign: int

    @classmethod
    def make(cls, r, sign: int, p, s) -> "QuadNumber":
        """``(r + sign * sqrt(p)) / s``."""
        if p < 0:
            raise ValueError("negative radicand")
        s = Fraction(s)
        a, d = Fraction(r) / s, Fraction(p) / (s * s)
        sign = sign if s > 0 else -sign
        root = _rational_sqrt(d)
        if root is not None:
            return cls(a + sign * root, Fraction(0), 0)
        return cls(a, d, sign)

    def __float__(self) -> float:
        # scaled integer square root avoids overflow for huge d
        n, m = self.d.numerator, self.d.denominator
        root = math.isqrt((n << 128) // m) / 2.0**64
        return float(self.a) + self.sign * root


@dataclass(frozen=True)
class Surd:
    """Real quadratic irrational ``(r + sign * sqrt(p)) / s``."""

    r: int
    sign: int
    p: int
    s: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.p <= 0 or math.isqrt(self.p) ** 2 == self.p:
            raise ValueError(f"{self.p} must be a positive non-square")
        if self.s <= 0:
            raise ValueError("denominator must be positive")

    def quad(self) -> QuadNumber:
        return QuadNumber.make(self.r, self.sign, self.p, self.s)

    def same_value(self, other: "Surd") -> bool:
        return self.quad() == other.quad()

    def conjugate(self) -> "Surd":
        return Surd(self.r, -self.sign, self.p, self.s)

    def floor(self) -> int:
        m = math.isqrt(self.p)
        # sqrt(p) lies strictly between m and m + 1
        if self.sign > 0:
            return (self.r + m) // self.s
        return (self.r - m - 1) // self.s

    def ceil(self) -> int:
        return self.floor() + 1

    def __float__(self) -> float:
        return (self.r + self.sign * math.sqrt(self.p)) / self.s

    def __str__(self) -> str:
        op = "+" if self.sign > 0 else "-"
        return f"({self.r}{op}sqrt({self.p}))/{self.s}"


def surd_compare(x: Surd, t) -> int:
    """Sign of ``x - t`` for rational t, exactly; never 0 since x is irrational."""
    u = Fraction(x.r) - Fraction(t) * x.s
    # sign of u + sign * sqrt(p)
    if x.sign > 0:
        if u >= 0:
            return 1
        return 1 if x.p > u * u else -1
    if u <= 0:
        return -1
    return 1 if u * u > x.p else -1


@dataclass(frozen=True)
class PeriodicCF:
    """``[[b1, ..., bl, (c1, ..., ck) repeated]]``."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def stream(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def __str__(self) -> str:
        head = ",".join(map(str, self.preperiod))
        body = ",".join(map(str, self.period))
        return f"[[{head}{',' if head else ''}({body})*]]"


def _hj_states(x: Surd) -> Iterator[tuple[tuple[int, int], int]]:
    """Negative-CF steps on the exact state ``(P + sqrt(D)) / Q``."""
    D = x.p * x.s * x.s
    P, Q = x.sign * x.r * x.s, x.sign * x.s * x.s
    m = math.isqrt(D)
    while True:
        fl = (P + m) // Q if Q > 0 else -((P + m) // -Q) - 1
        c = fl + 1
        yield (P, Q), c
        P = c * Q - P
        Q = (P * P - D) // Q


def periodic_negative_cf(x: Surd, max_steps: int = 100_000) -> PeriodicCF:
    """Eventually periodic Hirzebruch-Jung expansion with minimal preperiod and period."""
    seen: dict[tuple[int, int], int] = {}
    coeffs: list[int] = []
    for i, (state, c) in enumerate(_hj_states(x)):
        if state in seen:
            j = seen[state]
            return PeriodicCF(tuple(coeffs[:j]), tuple(coeffs[j:]))
        if i >= max_steps:
            raise RuntimeError(f"no period found for {x} within {max_steps} steps")
        seen[state] = i
        coeffs.append(c)
    raise AssertionError("unreachable")


def negative_cf_stream(x: Surd) -> Iterator[int]:
    return periodic_negative_cf(x).stream()


# -- continuant formulas ------------------------------------------------------


def _E(c: Sequence[int], i: int, j: int) -> Poly:
    """Continuant of ``c[i:j]``; length -1 gives 0."""
    if j - i == -1:
        return ZERO
    return continuant(c[i:j])


class ABC(NamedTuple):
    """Coefficients of ``A X^2 - B X + C = 0``."""

    A: Poly
    B: Poly
    C: Poly


class PRS(NamedTuple):
    P: Poly
    R: Poly
    S: Poly


def _check_hyperbolic(c: Sequence[int]) -> QMat2:
    if not c:
        raise ValueError("empty period")
    m = m_neg_word(c)
    t = m.trace().eval_one()
    if abs(t) <= 2:
        raise NotHyperbolic(f"M{list(c)} has trace {t} at q=1")
    return m


def abc(c: Sequence[int]) -> ABC:
    """Quadratic equation satisfied by the q-deformed fixed point of ``M(c)``."""
    c = tuple(c)
    _check_hyperbolic(c)
    k = len(c)
    A = _E(c, 1, k)
    B = _E(c, 0, k) + _E(c, 1, k - 1).shift(c[-1] - 1)
    C = _E(c, 0, k - 1).shift(c[-1] - 1)
    return ABC(A, B, C)


def prs(c: Sequence[int]) -> PRS:
    c = tuple(c)
    m = _check_hyperbolic(c)
    k = len(c)
    total = sum(x - 1 for x in c)
    P = m.trace() * m.trace() - LaurentPoly.monomial(total, 4)
    R = _E(c, 0, k) + _E(c, 1, k - 1).shift(c[-1] - 1)
    S = _E(c, 1, k).scale(2)
    return PRS(P, R, S)


def desnanot_jacobi_check(c: Sequence[int]) -> bool:
    c = tuple(c)
    k = len(c)
    if k < 1:
        raise ValueError("need at least one coefficient")
    lhs = _E(c, 1, k) * _E(c, 0, k - 1).shift(c[-1] - 1) - _E(c, 0, k) * _E(c, 1, k - 1).shift(c[-1] - 1)
    return lhs == LaurentPoly.monomial(sum(x - 1 for x in c))


# -- closed forms ------------------------------------------------------------


def _divide_square_factors(R: Poly, P: Poly, S: Poly) -> tuple[Poly, Poly, Poly]:
    """Remove every factor t with t | R, t | S and t^2 | P."""
    while True:
        g = poly_gcd(R, S).primitive()
        t = poly_gcd(g, P).primitive()
        reduced = False
        while t.max_deg > 0:
            sq = exact_divide(P, t * t)
            if sq is not None:
                R, S, P = exact_divide(R, t), exact_divide(S, t), sq
                reduced = True
                break
            rest = exact_divide(P, t)
            t2 = poly_gcd(t, rest).primitive()
            if t2 == t:
                break
            t = t2
        if not reduced:
            break
    # integer content
    g = math.gcd(R.content(), S.content())
    cp = P.content()
    for f in range(g, 1, -1):
        if g % f == 0 and cp % (f * f) == 0:
            R, S, P = _div_int(R, f), _div_int(S, f), _div_int(P, f * f)
            break
    return R, P, S


def _div_int(p: Poly, k: int) -> Poly:
    return LaurentPoly.from_coeffs([x // k for x in p.coeff_list()], p.min_deg) if p else p


@dataclass(frozen=True)
class QSurd:
    """``(R + branch * sqrt(P)) / S``.

    ``sqrt(P)`` is the series root with positive lowest coefficient.
    """

    R: Poly
    P: Poly
    S: Poly
    branch: int = 1

    def canonical(self) -> "QSurd":
        """Representative under ``(R, P, S) -> (tR, t^2 P, tS)``.

        P becomes an ordinary polynomial of valuation 0 or 1, common factors
        t of R and S with t^2 | P are removed, and S gets a positive leading
        coefficient.
        """
        if self.P.is_zero():
            raise ValueError("zero radicand")
        if self.S.is_zero():
            raise ZeroDivisionError("zero denominator")
        R, P, S, br = self.R, self.P, self.S, self.branch
        j = P.min_deg // 2
        R, P, S = R.shift(-j), P.shift(-2 * j), S.shift(-j)
        R, P, S = _divide_square_factors(R, P, S)
        if S.leading_coeff() < 0:
            R, S, br = -R, -S, -br
        return QSurd(R, P, S, br)

    def conjugate(self) -> "QSurd":
        return QSurd(self.R, self.P, self.S, -self.branch)

    def at_one(self) -> QuadNumber:
        s1 = self.S.eval_one()
        if s1 == 0:
            raise ZeroDivisionError("S vanishes at q=1")
        p1 = self.P.eval_one()
        return QuadNumber.make(self.R.eval_one(), self.branch, p1, s1)

    def series(self, order: int) -> QSeries:
        return qsurd_series(self, order)

    def same_value(self, other: "QSurd", order: int = 20) -> bool:
        """Equal canonical forms, or the same quadratic data plus equal series."""
        a, b = self.canonical(), other.canonical()
        if a == b:
            return True
        if a.R * b.S != b.R * a.S or a.P * b.S * b.S != b.P * a.S * a.S:
            return False
        return a.series(order) == b.series(order)

    def satisfies(self, eq: ABC) -> bool:
        """Check ``A y^2 - B y + C = 0`` by splitting rational and radical parts."""
        A, B, C = eq
        R, P, S = self.R, self.P, self.S
        rational = A * (R * R + P) - B * R * S + C * S * S
        radical = (A * R).scale(2) - B * S
        return rational.is_zero() and radical.is_zero()

    def to_json(self) -> dict:
        return {"R": self.R.to_json(), "P": self.P.to_json(), "S": self.S.to_json(), "branch": self.branch}

    def __str__(self) -> str:
        op = "+" if self.branch > 0 else "-"
        return f"({self.R} {op} sqrt({self.P})) / ({self.S})"


def mobius_apply_qsurd(m: QMat2, y: QSurd) -> QSurd:
    """``(a y + b) / (c y + d)``, rationalized and put in canonical form."""
    beta = y.branch
    N1, N2 = m.a * y.R + m.b * y.S, m.a
    D1, D2 = m.c * y.R + m.d * y.S, m.c
    R = N1 * D1 - N2 * D2 * y.P
    K = N2 * D1 - N1 * D2
    S = D1 * D1 - D2 * D2 * y.P
    if S.is_zero():
        raise ZeroDivisionError("vanishing denominator")
    if K.is_zero():
        raise ValueError("image is rational, not a quadratic surd")
    # K * sqrt(P) = sign * sqrt(K^2 P) with the positive-lowest-coefficient root
    branch = beta * (1 if K.lowest_coeff() > 0 else -1)
    return QSurd(R, K * K * y.P, S, branch).canonical()


def q_quadratic(x: Surd) -> QSurd:
    """Closed form of ``[x]_q`` from the periodic negative continued fraction of x."""
    cf = periodic_negative_cf(x)
    P, R, S = prs(cf.period)
    y = QSurd(R, P, S, 1)
    if cf.preperiod:
        y = mobius_apply_qsurd(m_neg_word(cf.preperiod), y)
    else:
        y = y.canonical()
    target = x.quad()
    if y.at_one() != target:
        flipped = y.conjugate()
        if flipped.at_one() != target:
            raise AssertionError(f"closed form for {x} does not specialize correctly")
        y = flipped
    return y


def qsurd_series(y: QSurd, order: int) -> QSeries:
    """Series of ``(R + branch * sqrt(P)) / S`` exact through ``order``."""
    if y.S.is_zero():
        raise ZeroDivisionError("zero denominator")
    vs = y.S.min_deg
    root = series_sqrt(y.P, order + vs).scale(y.branch)
    num = root + QSeries.from_poly(y.R, root.order)
    return (num / y.S).truncate(order)


# -- text input --------------------------------------------------------------

_SURD = re.compile(
    r"""\s*(?P<open>\()?\s*
        (?:(?P<r>[+-]?\d+)\s*(?P<op>[+-])|(?P<lead>[+-]))?\s*
        (?:(?P<m>\d+)\s*\*?\s*)?sqrt\s*\(\s*(?P<p>\d+)\s*\)\s*
        (?P<close>\))?\s*(?:/\s*(?P<s>\d+))?\s*""",
    re.VERBOSE,
)


def parse_surd(text: str) -> Surd:
    """``(r+sqrt(p))/s``, ``(r-sqrt(p))/s``, ``sqrt(p)``, ``a+sqrt(p)``, ``a+2sqrt(p)``."""
    m = _SURD.fullmatch(text)
    if not m or bool(m.group("open")) != bool(m.group("close")):
        raise ValueError(f"not a quadratic surd: {text!r}")
    if m.group("s") and not m.group("open") and m.group("r"):
        raise ValueError(f"ambiguous surd {text!r}: parenthesize the numerator")
    r = int(m.group("r")) if m.group("r") else 0
    op = m.group("op") or m.group("lead") or "+"
    mult = int(m.group("m")) if m.group("m") else 1
    s = int(m.group("s")) if m.group("s") else 1
    if s == 0:
        raise ValueError("zero denominator")
    return Surd(r, 1 if op == "+" else -1, mult * mult * int(m.group("p")), s)
