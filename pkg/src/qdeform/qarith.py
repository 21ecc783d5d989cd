"""q-integers, continued fractions of rationals and their q-deformations."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .polycore import (
    ONE,
    ZERO,
    LaurentPoly,
    QSeries,
    RatFn,
    Unit,
    ratfn_make,
    series_expand,
)

__all__ = [
    "Flavor",
    "CFWord",
    "CanonicalQRational",
    "IllDefinedWord",
    "q_int",
    "regular_cf",
    "negative_cf",
    "eval_cf_classical",
    "eval_regular_cf_q",
    "eval_negative_cf_q",
    "q_rational",
    "q_transform",
    "q_series_from_cf",
    "q_series_limit",
    "expected_N",
    "parse_fraction",
    "parse_cf_word",
]


class IllDefinedWord(ValueError):
    """The nested fraction divides by zero."""


class Flavor(str, Enum):
    REGULAR = "reg"
    NEGATIVE = "neg"


@dataclass(frozen=True)
class CFWord:
    flavor: Flavor
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def canonical(self) -> bool:
        cs = self.coeffs
        if not cs:
            return False
        if self.flavor is Flavor.REGULAR:
            return len(cs) % 2 == 0 and all(a >= 1 for a in cs[1:])
        return all(c >= 2 for c in cs[1:])

    def __str__(self) -> str:
        body = ",".join(map(str, self.coeffs))
        return f"[{body}]" if self.flavor is Flavor.REGULAR else f"[[{body}]]"


def q_int(n: int) -> LaurentPoly:
    """``[n]_q``: ``1 + ... + q^(n-1)`` for n > 0, ``-q^-1 - ... - q^-n`` for n < 0."""
    if n > 0:
        return LaurentPoly.from_coeffs([1] * n)
    if n < 0:
        return LaurentPoly.from_coeffs([-1] * (-n), n)
    return ZERO


def _check_fraction(r: int, s: int) -> None:
    if s <= 0:
        raise ValueError(f"denominator must be positive, got {s}")
    if math.gcd(r, s) != 1:
        raise ValueError(f"{r}/{s} is not in lowest terms")


def regular_cf(r: int, s: int) -> CFWord:
    """Even-length expansion ``[a1, ..., a2m]`` with ``a_i >= 1`` for ``i >= 2``."""
    _check_fraction(r, s)
    out = []
    while True:
        a, rem = divmod(r, s)
        out.append(a)
        if rem == 0:
            break
        r, s = s, rem
    if len(out) % 2:
        out[-1:] = [out[-1] - 1, 1]
    return CFWord(Flavor.REGULAR, tuple(out))


def negative_cf(r: int, s: int) -> CFWord:
    """Hirzebruch-Jung expansion ``[[c1, ..., ck]]`` with ``c_i >= 2`` for ``i >= 2``."""
    _check_fraction(r, s)
    out = []
    while True:
        c = -((-r) // s)
        out.append(c)
        rem = c * s - r
        if rem == 0:
            break
        r, s = s, rem
    return CFWord(Flavor.NEGATIVE, tuple(out))


def _classical_matrix(w: CFWord) -> tuple[int, int, int, int]:
    a, b, c, d = 1, 0, 0, 1
    off = 1 if w.flavor is Flavor.REGULAR else -1
    for x in w.coeffs:
        a, b, c, d = a * x + b, a * off, c * x + d, c * off
    return a, b, c, d


def eval_cf_classical(w: CFWord) -> Fraction:
    if not w.coeffs:
        raise IllDefinedWord("empty word")
    a, _, c, _ = _classical_matrix(w)
    if c == 0:
        raise IllDefinedWord(f"{w} has a vanishing denominator")
    return Fraction(a, c)


def _regular_factor(i: int, x: int) -> tuple[LaurentPoly, LaurentPoly]:
    # odd positions (0-based) use [x]_{1/q} and q^-x
    if i % 2 == 0:
        return q_int(x), LaurentPoly.monomial(x)
    return q_int(x).reverse(), LaurentPoly.monomial(-x)


def _regular_q_column(coeffs: Sequence[int]) -> tuple[LaurentPoly, LaurentPoly]:
    # running first column of the product; the second column is tracked too
    a, b, c, d = ONE, ZERO, ZERO, ONE
    for i, x in enumerate(coeffs):
        top, off = _regular_factor(i, x)
        a, b, c, d = a * top + b, a * off, c * top + d, c * off
    return a, c


def _mul4(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h


def _pow4(x, n: int):
    out = None
    while n:
        if n & 1:
            out = x if out is None else _mul4(out, x)
        n >>= 1
        if n:
            x = _mul4(x, x)
    return out


def _negative_q_column(coeffs: Sequence[int]) -> tuple[LaurentPoly, LaurentPoly]:
    # negative words are mostly long runs of 2s: take each run as a power,
    # then multiply the runs in a balanced tree
    if not coeffs:
        return ONE, ZERO
    leaves = [
        _pow4((q_int(x), LaurentPoly.monomial(x - 1, -1), ONE, ZERO), len(list(run)))
        for x, run in itertools.groupby(coeffs)
    ]
    while len(leaves) > 1:
        paired = [_mul4(leaves[i], leaves[i + 1]) for i in range(0, len(leaves) - 1, 2)]
        if len(leaves) % 2:
            paired.append(leaves[-1])
        leaves = paired
    a, _, c, _ = leaves[0]
    return a, c


def eval_regular_cf_q(w: Union[CFWord, Sequence[int]]) -> tuple[Unit, RatFn]:
    coeffs = w.coeffs if isinstance(w, CFWord) else tuple(w)
    if not coeffs or len(coeffs) % 2:
        raise ValueError("q-deformed regular continued fractions need an even, nonzero length")
    eval_cf_classical(CFWord(Flavor.REGULAR, coeffs))
    num, den = _regular_q_column(coeffs)
    # first column of a matrix with unit determinant: already coprime
    return ratfn_make(num, den, coprime=True)


def eval_negative_cf_q(w: Union[CFWord, Sequence[int]]) -> tuple[Unit, RatFn]:
    coeffs = w.coeffs if isinstance(w, CFWord) else tuple(w)
    eval_cf_classical(CFWord(Flavor.NEGATIVE, coeffs))
    num, den = _negative_q_column(coeffs)
    return ratfn_make(num, den, coprime=True)


def expected_N(x: Fraction) -> int:
    """The exponent N in ``[x]_q = ±q^-N R/S`` predicted from the size of x."""
    if x >= 1:
        return 0
    if x <= 0:
        return -math.floor(x)
    # 1/(1-N) <= x < 1/(-N); the left end is attained by x = 1/n
    return 1 - math.ceil(1 / x)


@dataclass(frozen=True)
class CanonicalQRational:
    """``[r/s]_q = sign * q^(-N) * R / S`` with R, S coprime ordinary polynomials.

    ``N`` is signed: positive rationals below one carry a positive power of q.
    """

    value: Fraction
    sign: int
    N: int
    R: LaurentPoly
    S: LaurentPoly

    @property
    def unit(self) -> Unit:
        return Unit(self.sign, -self.N)

    @property
    def ratfn(self) -> RatFn:
        return RatFn(self.R, self.S)

    def numerator(self) -> LaurentPoly:
        """``sign * q^-N * R`` as one Laurent polynomial."""
        return self.R.scale(self.sign).shift(-self.N)

    def series(self, order: int) -> QSeries:
        return series_expand((self.unit, self.ratfn), order)

    @classmethod
    def from_parts(cls, value: Fraction, unit: Unit, f: RatFn) -> "CanonicalQRational":
        if f.num.is_zero():
            return cls(Fraction(0), 0, 0, ZERO, ONE)
        return cls(Fraction(value), unit.sign, -unit.exp, f.num, f.den)

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        prefix = "-" if self.sign < 0 else ""
        if self.N:
            prefix += "q" if self.N == -1 else f"q^{-self.N}"
            prefix += " * "
        if self.S == ONE:
            return f"{prefix}({self.R})"
        return f"{prefix}({self.R})/({self.S})"


def q_rational(r: int, s: int = 1) -> CanonicalQRational:
    """``[r/s]_q`` in canonical form."""
    if isinstance(r, Fraction):
        r, s = r.numerator, r.denominator
    _check_fraction(r, s)
    if r == 0:
        return CanonicalQRational(Fraction(0), 0, 0, ZERO, ONE)
    unit, f = eval_negative_cf_q(negative_cf(r, s))
    return CanonicalQRational.from_parts(Fraction(r, s), unit, f)


def q_transform(x: CanonicalQRational, t: str, n: int = 1) -> CanonicalQRational:
    """Apply ``shift`` (x -> x + n), ``negate`` (x -> -x) or ``invert`` (x -> 1/x).

    The result is computed from the rational function alone, via
    ``[x+n] = q^n [x] + [n]``, ``[-x] = -q^-1 [x](1/q)`` and ``[1/x] = 1 / [x](1/q)``.
    """
    num, den = x.numerator(), x.S
    if t == "shift":
        value = x.value + n
        num, den = num.shift(n) + q_int(n) * den, den
    elif t == "negate":
        if x.sign == 0:
            return x
        value = -x.value
        num, den = -num.reverse().shift(-1), den.reverse()
    elif t == "invert":
        if x.sign == 0:
            raise ZeroDivisionError("cannot invert [0]_q")
        value = 1 / x.value
        num, den = den.reverse(), num.reverse()
    else:
        raise ValueError(f"unknown transformation {t!r}")
    if num.is_zero():
        return CanonicalQRational(Fraction(0), 0, 0, ZERO, ONE)
    unit, f = ratfn_make(num, den)
    return CanonicalQRational.from_parts(value, unit, f)


# -- infinite expansions ----------------------------------------------------


def _difference_valuation(a: tuple[LaurentPoly, LaurentPoly], b: tuple[LaurentPoly, LaurentPoly]) -> float:
    """q-valuation of ``a0/a1 - b0/b1``."""
    top = a[0] * b[1] - b[0] * a[1]
    if top.is_zero():
        return math.inf
    return top.min_deg - a[1].min_deg - b[1].min_deg


def _limit_series(
    convergents: Iterable[tuple[Fraction, LaurentPoly, LaurentPoly]],
    order: int,
    guard: int,
) -> QSeries:
    prev: Optional[tuple[LaurentPoly, LaurentPoly]] = None
    stable = 0
    last = None
    for _, num, den in convergents:
        cur = (num, den)
        if prev is not None:
            if _difference_valuation(prev, cur) > order:
                stable += 1
            else:
                stable = 0
        prev = last = cur
        if stable >= guard:
            break
    else:
        if last is None:
            raise ValueError("empty stream")
    return series_expand(ratfn_make(*last, coprime=True), order)


def _negative_convergents(stream: Iterable[int]) -> Iterator[tuple[Fraction, LaurentPoly, LaurentPoly]]:
    a, b, c, d = ONE, ZERO, ZERO, ONE
    for i, x in enumerate(stream):
        x = int(x)
        if i and x < 2:
            raise ValueError(f"coefficient {x} at position {i + 1} breaks the c_i >= 2 rule")
        top, off = q_int(x), LaurentPoly.monomial(x - 1, -1)
        a, b, c, d = a * top + b, a * off, c * top + d, c * off
        yield Fraction(a.eval_one(), c.eval_one()), a, c


def _regular_convergents(stream: Iterable[int]) -> Iterator[tuple[Fraction, LaurentPoly, LaurentPoly]]:
    a, b, c, d = ONE, ZERO, ZERO, ONE
    pending = None
    i = -1
    for i, x in enumerate(stream):
        x = int(x)
        if i and x < 1:
            raise ValueError(f"coefficient {x} at position {i + 1} breaks the a_i >= 1 rule")
        top, off = _regular_factor(i, x)
        saved = (a, b, c, d)
        a, b, c, d = a * top + b, a * off, c * top + d, c * off
        if i % 2 == 1:
            yield Fraction(a.eval_one(), c.eval_one()), a, c
            pending = None
        else:
            pending = (saved, x)
    if pending is not None:
        # odd-length finite word: rewrite the tail x as (x - 1, 1)
        (a, b, c, d), x = pending
        for j, y in ((i, x - 1), (i + 1, 1)):
            top, off = _regular_factor(j, y)
            a, b, c, d = a * top + b, a * off, c * top + d, c * off
        yield Fraction(a.eval_one(), c.eval_one()), a, c


def q_series_from_cf(
    stream: Iterable[int],
    order: int,
    flavor: Union[Flavor, str] = Flavor.REGULAR,
    guard: int = 2,
) -> QSeries:
    """Series of ``[x]_q`` from a (possibly infinite) stream of CF coefficients.

    Stops once ``guard`` consecutive convergents agree with their predecessor
    beyond ``order``.  A finite stream that runs out first denotes the rational
    given by the whole word, whose series is returned exactly.
    """
    flavor = Flavor(flavor)
    conv = _regular_convergents(stream) if flavor is Flavor.REGULAR else _negative_convergents(stream)
    return _limit_series(conv, order, guard)


def q_series_limit(rationals: Iterable[Union[Fraction, tuple[int, int]]], order: int, guard: int = 2) -> QSeries:
    """Series of ``[x]_q`` from any sequence of rationals converging to x."""

    def gen():
        for x in rationals:
            x = Fraction(*x) if isinstance(x, tuple) else Fraction(x)
            qr = q_rational(x.numerator, x.denominator)
            yield x, qr.numerator(), qr.S

    return _limit_series(gen(), order, guard)


# -- text input -------------------------------------------------------------

_FRACTION = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*")


def parse_fraction(text: str) -> Fraction:
    m = _FRACTION.fullmatch(text)
    if not m:
        raise ValueError(f"not a fraction: {text!r}")
    s = int(m.group(2)) if m.group(2) else 1
    if s == 0:
        raise ValueError("zero denominator")
    return Fraction(int(m.group(1)), s)


def parse_cf_word(text: str) -> CFWord:
    """``[a1,a2,...]`` is regular, ``[[c1,c2,...]]`` is negative."""
    t = text.strip()
    if t.startswith("[[") and t.endswith("]]"):
        flavor, body = Flavor.NEGATIVE, t[2:-2]
    elif t.startswith("[") and t.endswith("]"):
        flavor, body = Flavor.REGULAR, t[1:-1]
    else:
        raise ValueError(f"not a continued fraction word: {text!r}")
    try:
        coeffs = tuple(int(x) for x in body.split(",") if x.strip())
    except ValueError as exc:
        raise ValueError(f"bad coefficient in {text!r}") from exc
    if not coeffs:
        raise ValueError("empty continued fraction")
    return CFWord(flavor, coeffs)
