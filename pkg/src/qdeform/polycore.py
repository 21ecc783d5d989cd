"""Exact Laurent polynomials, normalized rational functions and truncated series.

Everything here works over the integers with Python's arbitrary precision
ints.  Nothing is ever approximated by a float.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

__all__ = [
    "LaurentPoly",
    "RatFn",
    "Unit",
    "QSeries",
    "TruncationError",
    "q",
    "poly_gcd",
    "exact_divide",
    "ratfn_make",
    "series_expand",
    "series_sqrt",
]

IntLike = Union[int, "LaurentPoly"]

# above this many multiply-adds the numpy path wins
_NUMPY_THRESHOLD = 64
_INT64_SAFE = 2**62


def _kronecker(a: Sequence[int], b: Sequence[int], bound: int) -> list[int]:
    """Product by Kronecker substitution: pack into one integer per factor.

    Each coefficient is stored with an offset of half the digit size, so
    packing and unpacking are plain byte slicing and no borrows occur.
    """
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)

    def offset(n: int) -> int:
        return int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * n, "little")

    def pack(xs: Sequence[int]) -> int:
        return int.from_bytes(b"".join((x + half).to_bytes(nbytes, "little") for x in xs), "little") - offset(len(xs))

    n = len(a) + len(b) - 1
    raw = (pack(a) * pack(b) + offset(n)).to_bytes(n * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half for i in range(n)]


def _convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        k = b[0]
        return [x * k for x in a]
    if len(a) * len(b) >= _NUMPY_THRESHOLD:
        bound = max(map(abs, a)) * max(map(abs, b)) * len(b)
        if bound < _INT64_SAFE:
            out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            return [int(x) for x in out]
        return _kronecker(a, b, bound)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class LaurentPoly:
    """Integer Laurent polynomial in ``q``.

    Stored densely as a valuation plus a coefficient tuple whose first and last
    entries are nonzero; the empty tuple is the zero polynomial.  The sparse view
    is available through :attr:`terms`.
    """

    __slots__ = ("_val", "_coeffs", "_hash")

    def __init__(self, terms: Union[Mapping[int, int], int, None] = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {0: terms} if terms else {}
        items = {int(e): int(c) for e, c in terms.items() if c}
        if not items:
            self._val, self._coeffs = 0, ()
        else:
            lo, hi = min(items), max(items)
            self._val = lo
            self._coeffs = tuple(items.get(e, 0) for e in range(lo, hi + 1))
        self._hash = None

    @classmethod
    def _raw(cls, val: int, coeffs: Sequence[int]) -> "LaurentPoly":
        lo, hi = 0, len(coeffs)
        while lo < hi and not coeffs[lo]:
            lo += 1
        while hi > lo and not coeffs[hi - 1]:
            hi -= 1
        p = cls.__new__(cls)
        if lo == hi:
            p._val, p._coeffs = 0, ()
        else:
            p._val, p._coeffs = val + lo, tuple(coeffs[lo:hi])
        p._hash = None
        return p

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], val: int = 0) -> "LaurentPoly":
        """Build ``sum(coeffs[i] * q**(val + i))``."""
        return cls._raw(val, [int(c) for c in coeffs])

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw(exp, (coeff,))

    @classmethod
    def coerce(cls, x: IntLike) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls._raw(0, (x,))
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        return {self._val + i: c for i, c in enumerate(self._coeffs) if c}

    @property
    def min_deg(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no degree")
        return self._val

    @property
    def max_deg(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no degree")
        return self._val + len(self._coeffs) - 1

    def coeff(self, e: int) -> int:
        i = e - self._val
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return 0

    def coeff_list(self) -> list[int]:
        """Coefficients from ``min_deg`` to ``max_deg``, interior zeros included."""
        return list(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_polynomial(self) -> bool:
        return not self._coeffs or self._val >= 0

    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def is_unit(self) -> bool:
        """True for ``±q^N``, the units of Z[q, 1/q]."""
        return len(self._coeffs) == 1 and abs(self._coeffs[0]) == 1

    def lowest_coeff(self) -> int:
        return self._coeffs[0] if self._coeffs else 0

    def leading_coeff(self) -> int:
        return self._coeffs[-1] if self._coeffs else 0

    def content(self) -> int:
        return math.gcd(*self._coeffs) if self._coeffs else 0

    def __len__(self) -> int:
        return sum(1 for c in self._coeffs if c)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: IntLike) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._coeffs:
            return self
        if not self._coeffs:
            return other
        lo = min(self._val, other._val)
        hi = max(self._val + len(self._coeffs), other._val + len(other._coeffs))
        out = [0] * (hi - lo)
        for i, c in enumerate(self._coeffs, self._val - lo):
            out[i] += c
        for i, c in enumerate(other._coeffs, other._val - lo):
            out[i] += c
        return LaurentPoly._raw(lo, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self._val, [-c for c in self._coeffs])

    def __pos__(self) -> "LaurentPoly":
        return self

    def __sub__(self, other: IntLike) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: IntLike) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: IntLike) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return ZERO
        return LaurentPoly._raw(self._val + other._val, _convolve(self._coeffs, other._coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ValueError("only units ±q^N have negative powers")
            return LaurentPoly.monomial(self._val * n, self._coeffs[0] ** (-n))
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by ``q**n``."""
        if not self._coeffs:
            return self
        return LaurentPoly._raw(self._val + n, self._coeffs)

    def scale(self, k: int) -> "LaurentPoly":
        if not k:
            return ZERO
        return LaurentPoly._raw(self._val, [k * c for c in self._coeffs])

    def reverse(self) -> "LaurentPoly":
        """Substitute ``q -> 1/q``."""
        if not self._coeffs:
            return self
        return LaurentPoly._raw(-self.max_deg, self._coeffs[::-1])

    def exact_divide(self, d: "LaurentPoly") -> Optional["LaurentPoly"]:
        return exact_divide(self, d)

    # -- evaluation -------------------------------------------------------

    def eval_one(self) -> int:
        return sum(self._coeffs)

    def evaluate(self, x: Union[int, Fraction]) -> Union[int, Fraction]:
        if not self._coeffs:
            return 0
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc * x**self._val

    # -- predicates -------------------------------------------------------

    def is_palindrome(self) -> bool:
        return self._coeffs == self._coeffs[::-1]

    def is_unimodal(self) -> bool:
        """Coefficients (interior zeros counted) weakly rise, then weakly fall."""
        cs = self._coeffs
        i, n = 0, len(cs)
        while i + 1 < n and cs[i] <= cs[i + 1]:
            i += 1
        while i + 1 < n and cs[i] >= cs[i + 1]:
            i += 1
        return i + 1 >= n

    def has_interior_zero(self) -> bool:
        return 0 in self._coeffs

    def has_nonneg_coeffs(self) -> bool:
        return all(c >= 0 for c in self._coeffs)

    # -- normalization ----------------------------------------------------

    def split_unit(self) -> tuple["Unit", "LaurentPoly"]:
        """Write ``self = sign * q**exp * p`` with ``p(0) > 0``."""
        if not self._coeffs:
            return Unit(1, 0), self
        sign = 1 if self._coeffs[0] > 0 else -1
        return Unit(sign, self._val), LaurentPoly._raw(0, self._coeffs if sign > 0 else [-c for c in self._coeffs])

    def primitive(self) -> "LaurentPoly":
        """Divide by the integer content, keeping the sign."""
        c = self.content()
        if c <= 1:
            return self
        return LaurentPoly._raw(self._val, [x // c for x in self._coeffs])

    # -- protocol ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._val == other._val and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._val, self._coeffs))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, pairs: Iterable[Sequence[int]]) -> "LaurentPoly":
        out: dict[int, int] = {}
        for e, c in pairs:
            out[int(e)] = out.get(int(e), 0) + int(c)
        return cls(out)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
q = LaurentPoly.monomial(1)


class Unit(NamedTuple):
    """The unit ``sign * q**exp`` of Z[q, 1/q]."""

    sign: int
    exp: int

    def poly(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.exp, self.sign)

    def __mul__(self, other: "Unit") -> "Unit":  # type: ignore[override]
        return Unit(self.sign * other.sign, self.exp + other.exp)

    def __str__(self) -> str:
        return format_poly(self.poly())


# -- text format ------------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coeff>\d+)?\s*
        (?P<var>\*?\s*q
            (?:\s*(?:\^|\*\*)\s*(?:\(\s*(?P<e1>[+-]?\d+)\s*\)|\{\s*(?P<e2>[+-]?\d+)\s*\}|(?P<e3>[+-]?\d+)))?
        )?\s*""",
    re.VERBOSE,
)


def parse_poly(text: str) -> LaurentPoly:
    """Parse ``1 + 2*q + q^2``, ``-q^-2``, ``3q^{4}`` and similar."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    pos, out, first = 0, {}, True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group("coeff") is None and m.group("var") is None):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        first = False
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        if m.group("sign") == "-":
            coeff = -coeff
        if m.group("var") is None:
            exp = 0
        else:
            e = m.group("e1") or m.group("e2") or m.group("e3")
            exp = int(e) if e is not None else 1
        out[exp] = out.get(exp, 0) + coeff
        pos = m.end()
    return LaurentPoly(out)


def _format_term(c: int, e: int) -> str:
    mag = abs(c)
    if e == 0:
        return str(mag)
    var = "q" if e == 1 else f"q^{e}"
    return var if mag == 1 else f"{mag}*{var}"


def format_poly(p: LaurentPoly) -> str:
    terms = sorted(p.terms.items())
    if not terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(terms):
        body = _format_term(c, e)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# -- division and gcd -------------------------------------------------------


def _divmod_lists(p: list[int], d: list[int]) -> Optional[list[int]]:
    """Exact quotient of ordinary polynomials (low-to-high lists), else None."""
    p = list(p)
    n, m = len(p), len(d)
    if n < m:
        return None
    lead = d[-1]
    quot = [0] * (n - m + 1)
    for i in range(n - m, -1, -1):
        c = p[i + m - 1]
        if c:
            qc, r = divmod(c, lead)
            if r:
                return None
            quot[i] = qc
            for j in range(m):
                p[i + j] -= qc * d[j]
    if any(p[: m - 1]):
        return None
    return quot


def exact_divide(p: LaurentPoly, d: LaurentPoly) -> Optional[LaurentPoly]:
    """Quotient ``p / d`` if it is a Laurent polynomial with integer coefficients."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    quot = _divmod_lists(p.coeff_list(), d.coeff_list())
    if quot is None:
        return None
    return LaurentPoly._raw(p.min_deg - d.min_deg, quot)


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of ``lc(b)^(deg a - deg b + 1) * a`` by ``b``."""
    a = list(a)
    m = len(b)
    lead = b[-1]
    while len(a) >= m:
        c = a[-1]
        a = [x * lead for x in a]
        off = len(a) - m
        for j in range(m):
            a[off + j] -= c * b[j]
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def _primitive_list(a: list[int]) -> list[int]:
    g = math.gcd(*a)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def _horner(a: list[int], x: int) -> int:
    # split in halves so the big-integer products stay balanced
    if len(a) <= 32:
        v = 0
        for c in reversed(a):
            v = v * x + c
        return v
    h = len(a) // 2
    return _horner(a[:h], x) + _horner(a[h:], x) * x**h


def _balanced_digits(h: int, x: int) -> list[int]:
    """Digits of h in base x with remainders in (-x/2, x/2], lowest first."""
    out = []
    while h:
        d = h % x
        if d > x // 2:
            d -= x
        out.append(d)
        h = (h - d) // x
    return out


def _heuristic_gcd(a: list[int], b: list[int], attempts: int = 6) -> Optional[list[int]]:
    """Gcd of primitive polynomials by evaluation at a large integer.

    The integer gcd of a(x) and b(x) is read back as balanced base-x digits
    and accepted only if it divides both inputs exactly.  Returns None when
    every attempt fails, which is rare.
    """
    bound = max(max(map(abs, a)), max(map(abs, b)))
    x = max(min(bound, 99 * math.isqrt(bound)), 2 * min(bound // abs(a[-1]), bound // abs(b[-1]))) + 2
    for _ in range(attempts):
        h = math.gcd(_horner(a, x), _horner(b, x))
        if h:
            cand = _balanced_digits(h, x)
            if cand:
                cand = _primitive_list(cand)
                if _divmod_lists(a, cand) is not None and _divmod_lists(b, cand) is not None:
                    return cand
        x = x * 73794 * math.isqrt(math.isqrt(x)) // 27011
    return None


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Gcd in Z[q, 1/q], normalized to an ordinary polynomial with positive constant term.

    Tries the heuristic evaluation gcd first, then falls back to the
    primitive pseudo-remainder sequence, so coefficients stay integral.
    """
    if a.is_zero():
        return b.split_unit()[1]
    if b.is_zero():
        return a.split_unit()[1]
    cont = math.gcd(a.content(), b.content())
    x = _primitive_list(a.split_unit()[1].coeff_list())
    y = _primitive_list(b.split_unit()[1].coeff_list())
    if len(x) < len(y):
        x, y = y, x
    fast = _heuristic_gcd(x, y) if len(y) > 1 else None
    if fast is not None:
        return LaurentPoly.from_coeffs(fast).split_unit()[1].scale(cont)
    while len(y) > 1:
        r = _prem(x, y)
        if not r:
            x = y
            break
        x, y = y, _primitive_list(r)
    else:
        # y is a nonzero constant: the primitive gcd is 1
        x = [1]
    g = LaurentPoly.from_coeffs(_primitive_list(x)).split_unit()[1]
    return g.scale(cont)


# -- rational functions -----------------------------------------------------


@dataclass(frozen=True)
class RatFn:
    """Reduced fraction ``num / den`` of ordinary polynomials.

    Canonical form: both have a positive constant term, they are coprime, and
    the integer contents share no factor.  An overall ``±q^N`` lives outside,
    in a :class:`Unit`.
    """

    num: LaurentPoly
    den: LaurentPoly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    def evaluate(self, x) -> Fraction:
        return Fraction(self.num.evaluate(x)) / self.den.evaluate(x)

    def __str__(self) -> str:
        if self.den == ONE:
            return f"({self.num})" if len(self.num) > 1 else str(self.num)
        return f"({self.num})/({self.den})"


def ratfn_make(num: LaurentPoly, den: LaurentPoly, *, coprime: bool = False) -> tuple[Unit, RatFn]:
    """Split ``num/den`` into a unit ``±q^N`` and a canonical :class:`RatFn`.

    ``coprime=True`` skips the polynomial gcd; callers use it when coprimality
    is already known (e.g. first columns of unimodular matrices).
    """
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Unit(1, 0), RatFn(ZERO, ONE)
    un, n = num.split_unit()
    ud, d = den.split_unit()
    if not coprime:
        g = poly_gcd(n, d)
        if g != ONE:
            g = g.primitive()
            n = exact_divide(n, g)
            d = exact_divide(d, g)
            assert n is not None and d is not None
    c = math.gcd(n.content(), d.content())
    if c > 1:
        n = LaurentPoly._raw(0, [x // c for x in n.coeff_list()])
        d = LaurentPoly._raw(0, [x // c for x in d.coeff_list()])
    return Unit(un.sign * ud.sign, un.exp - ud.exp), RatFn(n, d)


# -- truncated Laurent series -----------------------------------------------


class TruncationError(LookupError):
    """A coefficient beyond the known precision was requested."""


class QSeries:
    """Laurent series with integer coefficients, exact for exponents ``<= order``.

    Coefficients below ``start`` are zero.  When every known coefficient is
    zero the series is "zero through ``order``" and its valuation is unknown
    beyond that.
    """

    __slots__ = ("start", "coeffs", "order")

    def __init__(self, coeffs: Sequence[int], order: int, start: int = 0):
        cs = list(coeffs[: max(0, order - start + 1)])
        i = 0
        while i < len(cs) and not cs[i]:
            i += 1
        self.start = start + i
        self.coeffs = tuple(cs[i:]) + (0,) * max(0, order - start + 1 - len(cs))
        self.order = order
        if not self.coeffs:
            self.start = order + 1

    @classmethod
    def from_poly(cls, p: LaurentPoly, order: int) -> "QSeries":
        if p.is_zero():
            return cls((), order, order + 1)
        return cls(p.coeff_list(), order, p.min_deg)

    @classmethod
    def from_terms(cls, terms: Mapping[int, int], order: int) -> "QSeries":
        return cls.from_poly(LaurentPoly(terms), order)

    # -- inspection -------------------------------------------------------

    def __getitem__(self, k: int) -> int:
        if k > self.order:
            raise TruncationError(f"coefficient of q^{k} is beyond the known order {self.order}")
        if k < self.start:
            return 0
        return self.coeffs[k - self.start]

    @property
    def valuation(self) -> Optional[int]:
        """Exponent of the first nonzero coefficient, or None if zero through ``order``."""
        return self.start if self.coeffs else None

    @property
    def val_lower_bound(self) -> int:
        return self.start

    def lowest_coeff(self) -> int:
        if not self.coeffs:
            raise ValueError("series is zero through its order")
        return self.coeffs[0]

    @property
    def terms(self) -> dict[int, int]:
        return {self.start + i: c for i, c in enumerate(self.coeffs) if c}

    def to_poly(self) -> LaurentPoly:
        """The known part as a polynomial (exponents up to ``order``)."""
        return LaurentPoly.from_coeffs(self.coeffs, self.start)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return QSeries(self.coeffs, order, self.start)

    def coeff_range(self, lo: int, hi: int) -> list[int]:
        return [self[k] for k in range(lo, hi + 1)]

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return QSeries.from_poly(LaurentPoly.coerce(other), self.order)
        raise TypeError(f"cannot combine QSeries with {type(other).__name__}")

    def __add__(self, other) -> "QSeries":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        order = min(self.order, other.order)
        lo = min(self.start, other.start)
        if lo > order:
            return QSeries((), order, order + 1)
        out = [0] * (order - lo + 1)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.start + i - lo
                if k >= len(out):
                    break
                out[k] += c
        return QSeries(out, order, lo)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.order, self.start)

    def __sub__(self, other) -> "QSeries":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def shift(self, n: int) -> "QSeries":
        """Multiply by ``q**n``."""
        return QSeries(self.coeffs, self.order + n, self.start + n)

    def scale(self, k: int) -> "QSeries":
        if k == 0:
            return QSeries((), self.order, self.order + 1)
        return QSeries([k * c for c in self.coeffs], self.order, self.start)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, LaurentPoly):
            return self._mul_poly(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order + other.start, other.order + self.start)
        start = self.start + other.start
        if start > order or not self.coeffs or not other.coeffs:
            return QSeries((), order, max(start, order + 1))
        n = order - start + 1
        prod = _convolve(self.coeffs[:n], other.coeffs[:n])
        return QSeries(prod[:n], order, start)

    __rmul__ = __mul__

    def _mul_poly(self, p: LaurentPoly) -> "QSeries":
        if p.is_zero():
            return QSeries((), self.order, self.order + 1)
        order = self.order + p.min_deg
        n = order - (self.start + p.min_deg) + 1
        if n <= 0 or not self.coeffs:
            return QSeries((), order, order + 1)
        prod = _convolve(self.coeffs[:n], p.coeff_list()[:n])
        return QSeries(prod[:n], order, self.start + p.min_deg)

    def inverse(self) -> "QSeries":
        return 1 / self

    def _val_checked(self) -> int:
        if not self.coeffs:
            raise ZeroDivisionError("division by a series that is zero through its order")
        return self.start

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if isinstance(other, LaurentPoly):
            return _divide_by_poly(self, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return _series_divide(self, other)

    def __rtruediv__(self, other) -> "QSeries":
        if isinstance(other, (int, LaurentPoly)):
            num = LaurentPoly.coerce(other)
            # exact numerator: only the denominator limits precision
            v = self._val_checked()
            rel = self.order - v
            big = (0 if num.is_zero() else num.min_deg) + rel
            return _series_divide(QSeries.from_poly(num, big), self)
        return NotImplemented

    def agrees_with(self, other: "QSeries", through: int) -> bool:
        if through > self.order or through > other.order:
            raise TruncationError(f"cannot compare through {through}")
        lo = min(self.start, other.start)
        return all(self[k] == other[k] for k in range(lo, through + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.start == other.start and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.start, self.coeffs, self.order))

    def __str__(self) -> str:
        body = format_poly(self.to_poly())
        return f"{body} + O(q^{self.order + 1})"

    def __repr__(self) -> str:
        return f"QSeries({self!s})"


def _div_core(num: Sequence[int], den: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of num/den for den[0] != 0 (exact, else ValueError)."""
    d0 = den[0]
    out: list[int] = []
    for k in range(n):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        qk, r = divmod(acc, d0)
        if r:
            raise ValueError(f"series coefficient of relative degree {k} is not an integer")
        out.append(qk)
    return out


def _series_divide(a: QSeries, b: QSeries) -> QSeries:
    vb = b._val_checked()
    rel_b = b.order - vb
    if not a.coeffs:
        order = min(a.order - vb, rel_b + a.start - vb)
        return QSeries((), order, order + 1)
    va = a.start
    order = min(a.order - vb, rel_b + va - vb)
    n = order - (va - vb) + 1
    if n <= 0:
        return QSeries((), order, order + 1)
    return QSeries(_div_core(a.coeffs, b.coeffs, n), order, va - vb)


def _divide_by_poly(a: QSeries, p: LaurentPoly) -> QSeries:
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    vp = p.min_deg
    order = a.order - vp
    if not a.coeffs:
        return QSeries((), order, order + 1)
    n = order - (a.start - vp) + 1
    if n <= 0:
        return QSeries((), order, order + 1)
    return QSeries(_div_core(a.coeffs, p.coeff_list(), n), order, a.start - vp)


def series_expand(value: Union[RatFn, tuple[Unit, RatFn]], order: int) -> QSeries:
    """Laurent expansion of ``unit * num / den`` with coefficients exact through ``order``."""
    if isinstance(value, RatFn):
        unit, f = Unit(1, 0), value
    else:
        unit, f = value
    num = f.num.scale(unit.sign).shift(unit.exp)
    if num.is_zero():
        return QSeries((), order, order + 1)
    vd = f.den.min_deg
    # numerator is exact, so ask for exactly the precision we need
    return _divide_by_poly(QSeries.from_poly(num, order + vd), f.den)


def series_sqrt(p: Union[LaurentPoly, QSeries], order: int) -> QSeries:
    """Square root with positive lowest coefficient, exact through ``order``."""
    if isinstance(p, LaurentPoly):
        if p.is_zero():
            raise ValueError("square root of zero has no valuation")
        v = p.min_deg
        src = QSeries.from_poly(p, max(order + v // 2, v))
    else:
        src = p
        if not src.coeffs:
            raise ValueError("square root of a series that is zero through its order")
        v = src.start
    if v % 2:
        raise ValueError(f"odd valuation {v}: no Laurent square root")
    c0 = src.coeffs[0]
    s0 = math.isqrt(c0) if c0 > 0 else -1
    if c0 <= 0 or s0 * s0 != c0:
        raise ValueError(f"lowest coefficient {c0} is not a perfect square")
    # relative precision of the radicand carries over to the root
    avail = src.order - v // 2
    want = min(order, avail)
    order = max(want, v // 2)
    n = order - v // 2 + 1
    a = src.coeffs
    out = [s0]
    for k in range(1, n):
        acc = a[k] if k < len(a) else 0
        for i in range(1, k):
            acc -= out[i] * out[k - i]
        qk, r = divmod(acc, 2 * s0)
        if r:
            raise ValueError(f"square root has a non-integral coefficient at relative degree {k}")
        out.append(qk)
    root = QSeries(out, order, v // 2)
    return root if want == order else root.truncate(want)
