"""The q-deformed modular group PSL_q(2, Z) and q-continuants."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

from .polycore import ONE, ZERO, LaurentPoly, QSeries, Unit
from .qarith import q_int

__all__ = [
    "QMat2",
    "ProjClass",
    "GroupWord",
    "generator",
    "q_deform_word",
    "decompose_sl2",
    "eval_word_classical",
    "m_neg_word",
    "m_pos_word",
    "continuant",
    "trace",
    "trace_class",
    "normalize_trace",
    "word_reduce",
    "trace_word_reduce",
    "mobius_series",
    "parse_group_word",
    "parse_matrix_word",
]

Poly = LaurentPoly
IntMatrix = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class QMat2:
    """2x2 matrix over Z[q, 1/q]: ``[[a, b], [c, d]]``."""

    a: Poly
    b: Poly
    c: Poly
    d: Poly

    @classmethod
    def of(cls, a, b, c, d) -> "QMat2":
        return cls(*(Poly.coerce(x) for x in (a, b, c, d)))

    @classmethod
    def identity(cls) -> "QMat2":
        return cls(ONE, ZERO, ZERO, ONE)

    def entries(self) -> tuple[Poly, Poly, Poly, Poly]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "QMat2") -> "QMat2":
        return QMat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def scale(self, u: Union[Unit, Poly]) -> "QMat2":
        p = u.poly() if isinstance(u, Unit) else u
        return QMat2(*(x * p for x in self.entries()))

    def __neg__(self) -> "QMat2":
        return QMat2(-self.a, -self.b, -self.c, -self.d)

    def det(self) -> Poly:
        return self.a * self.d - self.b * self.c

    def det_unit(self) -> Unit:
        """The determinant as ``±q^k``; raises if the matrix is not invertible."""
        dt = self.det()
        if not dt.is_unit():
            raise ValueError(f"determinant {dt} is not a unit")
        return Unit(dt.lowest_coeff(), dt.min_deg)

    def inverse(self) -> "QMat2":
        u = self.det_unit()
        inv = Unit(u.sign, -u.exp).poly()
        return QMat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def __pow__(self, n: int) -> "QMat2":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = QMat2.identity()
        while n:
            if n & 1:
                out = out @ base
            n >>= 1
            if n:
                base = base @ base
        return out

    def trace(self) -> Poly:
        return self.a + self.d

    def at_one(self) -> IntMatrix:
        return ((self.a.eval_one(), self.b.eval_one()), (self.c.eval_one(), self.d.eval_one()))

    def reverse(self) -> "QMat2":
        """Entrywise ``q -> 1/q``."""
        return QMat2(*(x.reverse() for x in self.entries()))

    def transpose(self) -> "QMat2":
        return QMat2(self.a, self.c, self.b, self.d)

    def projective(self) -> "ProjClass":
        return ProjClass.of(self)

    def to_json(self) -> list[list[list[list[int]]]]:
        return [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]

    def __str__(self) -> str:
        rows = [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]
        w = max(len(x) for x in (rows[0][0], rows[1][0]))
        return "\n".join(f"[ {r[0]:<{w}} | {r[1]} ]" for r in rows)


def _canonical_unit(m: QMat2) -> Unit:
    nonzero = [x for x in m.entries() if x]
    if not nonzero:
        raise ValueError("zero matrix has no projective class")
    lo = min(x.min_deg for x in nonzero)
    return Unit(1 if nonzero[0].lowest_coeff() > 0 else -1, -lo)


@dataclass(frozen=True)
class ProjClass:
    """Class of a matrix modulo the units ``±q^N``.

    The stored representative has smallest exponent 0 across its entries and
    a positive lowest coefficient in its first nonzero entry, so equality of
    classes is equality of representatives.
    """

    rep: QMat2

    @classmethod
    def of(cls, m: QMat2) -> "ProjClass":
        return cls(m.scale(_canonical_unit(m)))

    def __matmul__(self, o: "ProjClass") -> "ProjClass":
        return ProjClass.of(self.rep @ o.rep)

    def inverse(self) -> "ProjClass":
        return ProjClass.of(self.rep.inverse())

    def is_identity(self) -> bool:
        return self.rep == QMat2.identity()

    def trace(self) -> Poly:
        return normalize_trace(self.rep.trace())


# -- generators and words ---------------------------------------------------

_GENERATORS = {
    "R": QMat2.of(LaurentPoly.monomial(1), 1, 0, 1),
    "S": QMat2.of(0, LaurentPoly.monomial(-1, -1), 1, 0),
    "L": QMat2.of(LaurentPoly.monomial(1), 0, LaurentPoly.monomial(1), 1),
}

_CLASSICAL = {
    "R": ((1, 1), (0, 1)),
    "S": ((0, -1), (1, 0)),
    "L": ((1, 0), (1, 1)),
}


def generator(name: str) -> QMat2:
    """``Rq``, ``Sq`` or ``Lq`` (the trailing ``q`` is optional)."""
    key = name[:-1] if name.endswith("q") and len(name) == 2 else name
    try:
        return _GENERATORS[key]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None


@dataclass(frozen=True)
class GroupWord:
    """Word in R, S, L with nonzero exponents and no two adjacent equal letters."""

    letters: tuple[tuple[str, int], ...]

    def __post_init__(self):
        out: list[tuple[str, int]] = []
        for g, e in self.letters:
            if g not in _GENERATORS:
                raise ValueError(f"unknown generator {g!r}")
            if out and out[-1][0] == g:
                e += out.pop()[1]
            if e:
                out.append((g, int(e)))
        object.__setattr__(self, "letters", tuple(out))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)


def q_deform_word(w: Union[GroupWord, Iterable[tuple[str, int]]]) -> ProjClass:
    letters = w.letters if isinstance(w, GroupWord) else tuple(w)
    m = QMat2.identity()
    for g, e in letters:
        m = m @ (generator(g) ** e)
    return ProjClass.of(m)


def _mat_mul(x: IntMatrix, y: IntMatrix) -> IntMatrix:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def _mat_pow(m: IntMatrix, n: int) -> IntMatrix:
    if n < 0:
        (a, b), (c, d) = m
        m = ((d, -b), (-c, a))
        n = -n
    out = ((1, 0), (0, 1))
    for _ in range(n):
        out = _mat_mul(out, m)
    return out


def eval_word_classical(w: Union[GroupWord, Iterable[tuple[str, int]]]) -> IntMatrix:
    letters = w.letters if isinstance(w, GroupWord) else tuple(w)
    out = ((1, 0), (0, 1))
    for g, e in letters:
        out = _mat_mul(out, _mat_pow(_CLASSICAL[g], e))
    return out


def decompose_sl2(m: IntMatrix) -> GroupWord:
    """Word in R, L, S whose product is ``±m``, by Euclid on the first column."""
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise ValueError(f"determinant of {m} is not 1")
    letters: list[tuple[str, int]] = []
    while a and c:
        if abs(a) >= abs(c):
            k = a // c
            a, b = a - k * c, b - k * d
            letters.append(("R", k))
        else:
            k = c // a
            c, d = c - k * a, d - k * b
            letters.append(("L", k))
    if a == 0:
        # [[0, b], [c, d]] = S [[c, d], [0, -b]]
        letters.append(("S", 1))
        a, b, c, d = c, d, 0, -b
    # now [[a, b], [0, d]] with a = d = ±1, i.e. ±R^(a*b)
    letters.append(("R", a * b))
    word = GroupWord(tuple(letters))
    back = eval_word_classical(word)
    if back != m and back != tuple(tuple(-x for x in row) for row in m):
        raise AssertionError(f"decomposition of {m} failed: got {back}")
    return word


# -- continued-fraction matrices --------------------------------------------


def _neg_factor(c: int) -> QMat2:
    return QMat2(q_int(c), LaurentPoly.monomial(c - 1, -1), ONE, ZERO)


def _product(ms: Sequence[QMat2]) -> QMat2:
    # balanced split keeps operand sizes even; associativity makes it exact
    if not ms:
        return QMat2.identity()
    if len(ms) == 1:
        return ms[0]
    mid = len(ms) // 2
    return _product(ms[:mid]) @ _product(ms[mid:])


def m_neg_word(c: Sequence[int]) -> QMat2:
    """``M_q(c1, ..., ck)``: product of ``[[ [c]_q, -q^(c-1) ], [1, 0]]``."""
    return _product([_neg_factor(x) for x in c])


def m_pos_word(a: Sequence[int]) -> QMat2:
    """``M+_q(a1, ..., a2m)`` with ``[a]_{1/q}``, ``q^-a`` at even positions."""
    if len(a) % 2:
        raise ValueError("M+ needs an even number of coefficients")
    fs = []
    for i, x in enumerate(a):
        if i % 2 == 0:
            fs.append(QMat2(q_int(x), LaurentPoly.monomial(x), ONE, ZERO))
        else:
            fs.append(QMat2(q_int(x).reverse(), LaurentPoly.monomial(-x), ONE, ZERO))
    return _product(fs)


def continuant(c: Sequence[int]) -> Poly:
    """q-continuant ``E_k(c1, ..., ck)``; the empty word gives ``E_0 = 1``.

    Computed by the three-term recurrence
    ``E_j = [c_j] E_{j-1} - q^(c_{j-1} - 1) E_{j-2}``.
    """
    prev, cur = ZERO, ONE
    last = None
    for x in c:
        nxt = q_int(x) * cur
        if last is not None:
            nxt = nxt - prev.shift(last - 1)
        prev, cur, last = cur, nxt, x
    return cur


def trace(m: Union[QMat2, ProjClass]) -> Poly:
    if isinstance(m, ProjClass):
        return m.trace()
    return m.trace()


def normalize_trace(t: Poly) -> Poly:
    """Trace modulo ``±q^N``: an ordinary polynomial with positive constant term."""
    return t.split_unit()[1]


def trace_class(p: ProjClass) -> Poly:
    return p.trace()


# -- reductions --------------------------------------------------------------


def word_reduce(c: Sequence[int]) -> tuple[Unit, tuple[int, ...]]:
    """Remove interior 1 and -1 coefficients.

    Returns ``(u, w)`` with ``M_q(c) = u * M_q(w)`` exactly, using
    ``M(x, 1, y) = q M(x-1, y-1)`` and ``M(x, -1, y) = -q^-2 M(x+1, y+1)``.
    """
    w = list(c)
    unit = Unit(1, 0)
    changed = True
    while changed:
        changed = False
        for i in range(1, len(w) - 1):
            if w[i] == 1:
                w[i - 1 : i + 2] = [w[i - 1] - 1, w[i + 1] - 1]
                unit = unit * Unit(1, 1)
            elif w[i] == -1:
                w[i - 1 : i + 2] = [w[i - 1] + 1, w[i + 1] + 1]
                unit = unit * Unit(-1, -2)
            else:
                continue
            changed = True
            break
    return unit, tuple(w)


def trace_word_reduce(c: Sequence[int]) -> tuple[Unit, tuple[int, ...]]:
    """Cyclically reduce a word for trace purposes.

    Returns ``(u, w)`` with ``Tr M_q(c) = u * Tr M_q(w)``.  Besides the matrix
    rules of :func:`word_reduce` applied around the cycle, a zero is absorbed by
    ``Tr M(c1..ck, 0) = -q^-1 Tr M(c1 + ck, c2..c(k-1))``.
    """
    w = list(c)
    unit = Unit(1, 0)
    changed = True
    while changed and len(w) >= 3:
        changed = False
        for i in range(len(w)):
            x = w[i]
            if x in (1, -1, 0):
                # rotate so the offending letter is last-but-one (rules i, ii) or last (rule iii)
                if x == 0:
                    w = w[i + 1 :] + w[: i + 1]
                    w = [w[0] + w[-2]] + w[1:-2]
                    unit = unit * Unit(-1, -1)
                else:
                    w = w[i - 1 :] + w[: i - 1] if i else w[-1:] + w[:-1]
                    # now w[1] == x
                    if x == 1:
                        w = [w[0] - 1, w[2] - 1] + w[3:]
                        unit = unit * Unit(1, 1)
                    else:
                        w = [w[0] + 1, w[2] + 1] + w[3:]
                        unit = unit * Unit(-1, -2)
                changed = True
                break
    return unit, tuple(w)


# -- Moebius action on series -----------------------------------------------


def mobius_series(m: Union[QMat2, ProjClass], f: QSeries, order: int) -> QSeries:
    """``(a f + b) / (c f + d)`` exact through ``order``."""
    if isinstance(m, ProjClass):
        m = m.rep
    num = f * m.a + QSeries.from_poly(m.b, f.order + _span(m))
    den = f * m.c + QSeries.from_poly(m.d, f.order + _span(m))
    if m.c.is_zero():
        out = num / m.d
    else:
        out = num / den
    if out.order < order:
        raise ValueError(f"only {out.order} orders are reliable, {order} requested")
    return out.truncate(order)


def _span(m: QMat2) -> int:
    degs = [abs(x.min_deg) + abs(x.max_deg) for x in m.entries() if x]
    return max(degs, default=0)


# -- text input ------------------------------------------------------------

_LETTER = re.compile(r"\s*([RSL])(?:\s*\^\s*([+-]?\d+))?\s*")


def parse_group_word(text: str) -> GroupWord:
    """``R^2 S R^-1 L^3``."""
    pos, out = 0, []
    t = text.strip()
    if t in ("", "1", "I"):
        return GroupWord(())
    while pos < len(t):
        m = _LETTER.match(t, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse group word {text!r} at position {pos}")
        out.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
        pos = m.end()
    return GroupWord(tuple(out))


_MATWORD = re.compile(r"\s*(M\+?)\s*\[([^\]]*)\]\s*")


def parse_matrix_word(text: str) -> tuple[str, tuple[int, ...]]:
    """``M[c1,...]`` or ``M+[a1,...]`` -> (kind, coefficients)."""
    m = _MATWORD.fullmatch(text)
    if not m:
        raise ValueError(f"not a matrix word: {text!r}")
    try:
        coeffs = tuple(int(x) for x in m.group(2).split(",") if x.strip())
    except ValueError as exc:
        raise ValueError(f"bad coefficient in {text!r}") from exc
    return m.group(1), coeffs


def matrix_from_word(text: str) -> QMat2:
    kind, coeffs = parse_matrix_word(text)
    return m_neg_word(coeffs) if kind == "M" else m_pos_word(coeffs)


def product(ms: Iterable[QMat2]) -> QMat2:
    return reduce(lambda x, y: x @ y, ms, QMat2.identity())
