"""Batch checks: trace scans, Cohn matrices and divisibility tables."""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .polycore import LaurentPoly, exact_divide
from .qmodular import QMat2, m_neg_word, product

__all__ = [
    "CHECKS",
    "THEOREM_CHECKS",
    "ScanSpec",
    "Violation",
    "ScanReport",
    "ScanCapExceeded",
    "TheoremViolation",
    "check_word",
    "enumerate_words",
    "scan_traces",
    "cohn_matrix",
    "DivRow",
    "divisibility_report",
]

CHECKS = ("palindrome", "reversal", "positive", "unimodal")
THEOREM_CHECKS = frozenset({"palindrome", "reversal", "positive"})
HYPOTHESES = ("interior>=2", "all")


class ScanCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ScanSpec:
    """Which words to enumerate and what to check on their traces.

    ``hypothesis`` gates the positivity theorem. With ``"interior>=2"``
    positivity is only examined on words whose entries are positive with
    ``c_1..c_{k-1} >= 2``. With ``"all"`` it is examined everywhere, but
    failures outside that gate are reported as observations, not violations.
    """

    k_range: tuple[int, int] = (1, 4)
    coeff_range: tuple[int, int] = (2, 4)
    hypothesis: str = "interior>=2"
    checks: tuple[str, ...] = CHECKS
    cap: int = 10**7
    sample: Optional[int] = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        (k0, k1), (c0, c1) = self.k_range, self.coeff_range
        if not 1 <= k0 <= k1:
            raise ValueError(f"bad k range {self.k_range}")
        if c0 > c1:
            raise ValueError(f"bad coefficient range {self.coeff_range}")
        if self.hypothesis not in HYPOTHESES:
            raise ValueError(f"hypothesis must be one of {HYPOTHESES}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks {sorted(unknown)}")
        object.__setattr__(self, "checks", tuple(c for c in CHECKS if c in self.checks))
        if self.sample is None and self.total() > self.cap:
            raise ScanCapExceeded(f"{self.total()} words exceed the cap {self.cap}")

    def total(self) -> int:
        n = self.coeff_range[1] - self.coeff_range[0] + 1
        return sum(n**k for k in range(self.k_range[0], self.k_range[1] + 1))


@dataclass(frozen=True)
class Violation:
    word: tuple[int, ...]
    check: str
    poly: str
    fatal: bool


@dataclass
class ScanReport:
    spec: ScanSpec
    words_checked: int = 0
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def theorem_failed(self) -> bool:
        return any(v.fatal for v in self.violations)

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "spec": self._spec_dict(),
            "counts": {"words": self.words_checked, **self.counts},
            "violations": [
                {"word": list(v.word), "check": v.check, "poly": v.poly, "fatal": v.fatal} for v in self.violations
            ],
        }
        if timing:
            out["timing"] = {"elapsed_s": round(self.elapsed, 6)}
        return out

    def _spec_dict(self) -> dict:
        # worker count does not affect results, so it stays out of the report
        d = asdict(self.spec)
        d.pop("workers")
        d["checks"] = list(self.spec.checks)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"words checked: {self.words_checked}"]
        for name in CHECKS:
            if name in self.counts:
                c = self.counts[name]
                kind = "theorem" if name in THEOREM_CHECKS else "conjecture"
                lines.append(f"{name:<11} {kind:<10} checked {c['checked']:>8}  violations {c['violations']}")
        if "unimodal_interior_zero" in self.counts:
            lines.append(f"unimodal: {self.counts['unimodal_interior_zero']} traces with interior zeros")
        if "positive_observations" in self.counts:
            lines.append(f"positivity outside hypothesis: {self.counts['positive_observations']} non-positive traces")
        for v in self.violations[:50]:
            tag = "VIOLATION" if v.fatal else "note"
            lines.append(f"  {tag} {v.check} {list(v.word)}: {v.poly}")
        if len(self.violations) > 50:
            lines.append(f"  ... {len(self.violations) - 50} more")
        return "\n".join(lines)


class TheoremViolation(AssertionError):
    def __init__(self, report: ScanReport):
        self.report = report
        first = next(v for v in report.violations if v.fatal)
        super().__init__(f"{first.check} fails on {list(first.word)}: {first.poly}")


def _positivity_gate(c: Sequence[int]) -> bool:
    return all(x >= 1 for x in c) and all(x >= 2 for x in c[:-1])


def check_word(c: Sequence[int], checks: Sequence[str] = CHECKS, hypothesis: str = "interior>=2") -> list[Violation]:
    """Run the trace checks on one word and return any failures."""
    c = tuple(c)
    tr = m_neg_word(c).trace()
    out: list[Violation] = []
    if "palindrome" in checks and tr and not tr.is_palindrome():
        out.append(Violation(c, "palindrome", str(tr), True))
    if "reversal" in checks and m_neg_word(c[::-1]).trace() != tr:
        out.append(Violation(c, "reversal", str(tr), True))
    if "positive" in checks:
        gated = _positivity_gate(c)
        # the trace of a class is only defined up to a sign
        signed = -tr if tr and tr.lowest_coeff() < 0 else tr
        if (gated or hypothesis == "all") and not signed.has_nonneg_coeffs():
            out.append(Violation(c, "positive", str(tr), gated))
    if "unimodal" in checks and tr and not tr.is_unimodal():
        name = "unimodal_interior_zero" if tr.has_interior_zero() else "unimodal"
        out.append(Violation(c, name, str(tr), False))
    return out


def enumerate_words(k_range: tuple[int, int], coeff_range: tuple[int, int]) -> Iterator[tuple[int, ...]]:
    """Lexicographic by (k, c_1, ..., c_k)."""
    values = range(coeff_range[0], coeff_range[1] + 1)
    for k in range(k_range[0], k_range[1] + 1):
        yield from itertools.product(values, repeat=k)


def _sample_words(spec: ScanSpec) -> list[tuple[int, ...]]:
    rng = random.Random(spec.seed)
    lo, hi = spec.coeff_range
    return [
        tuple(rng.randint(lo, hi) for _ in range(rng.randint(*spec.k_range)))
        for _ in range(spec.sample or 0)
    ]


def _check_chunk(args) -> tuple[int, list[Violation], dict]:
    words, checks, hypothesis = args
    found: list[Violation] = []
    checked = {name: 0 for name in checks}
    for w in words:
        for name in checks:
            if name != "positive" or hypothesis == "all" or _positivity_gate(w):
                checked[name] += 1
        found.extend(check_word(w, checks, hypothesis))
    return len(words), found, checked


def _chunks(words: Iterable[tuple[int, ...]], size: int) -> Iterator[list[tuple[int, ...]]]:
    it = iter(words)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def scan_traces(spec: ScanSpec, strict: bool = True) -> ScanReport:
    """Check every trace in the spec's range, exhaustively or by seeded sample.

    With ``strict`` a theorem violation raises :class:`TheoremViolation`
    carrying the full report. Results do not depend on ``workers``.
    """
    t0 = time.perf_counter()
    words = _sample_words(spec) if spec.sample is not None else enumerate_words(spec.k_range, spec.coeff_range)
    jobs = ((block, spec.checks, spec.hypothesis) for block in _chunks(words, 2048))
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            results = list(pool.map(_check_chunk, jobs))
    else:
        results = [_check_chunk(j) for j in jobs]

    report = ScanReport(spec)
    checked = {name: 0 for name in spec.checks}
    for n, found, counts in results:
        report.words_checked += n
        report.violations.extend(found)
        for name, v in counts.items():
            checked[name] += v
    for name in spec.checks:
        bad = sum(1 for v in report.violations if v.check == name and (v.fatal or name not in THEOREM_CHECKS))
        report.counts[name] = {"checked": checked[name], "violations": bad}
    if "unimodal" in spec.checks:
        report.counts["unimodal_interior_zero"] = sum(1 for v in report.violations if v.check == "unimodal_interior_zero")
    if "positive" in spec.checks and spec.hypothesis == "all":
        report.counts["positive_observations"] = sum(
            1 for v in report.violations if v.check == "positive" and not v.fatal
        )
    report.elapsed = time.perf_counter() - t0
    if strict and report.theorem_failed:
        raise TheoremViolation(report)
    return report


# -- Cohn matrices -----------------------------------------------------------

_COHN_WORDS = {"A": (2, 2, 1, 1), "B": (3, 2, 2, 1, 1)}


def cohn_matrix(word: Union[str, Sequence[str]], normalize: bool = True) -> QMat2:
    """q-deformed product of the Cohn matrices ``A = -M(2,2,1,1)``, ``B = -M(3,2,2,1,1)``.

    With ``normalize`` the result is the projective representative with
    lowest exponent 0 and positive leading entry, which is how the
    deformed matrices are usually displayed.
    """
    letters = [ch for ch in word if not ch.isspace()]
    if not letters:
        raise ValueError("empty Cohn word")
    bad = set(letters) - set(_COHN_WORDS)
    if bad:
        raise ValueError(f"Cohn words use only A and B, got {sorted(bad)}")
    m = product(m_neg_word(_COHN_WORDS[ch]) for ch in letters)
    return m.projective().rep if normalize else m


# -- divisibility ------------------------------------------------------------


@dataclass(frozen=True)
class DivRow:
    target: str
    candidate: str
    quotient: Optional[LaurentPoly]

    @property
    def divides(self) -> bool:
        return self.quotient is not None

    @property
    def positive(self) -> bool:
        return self.quotient is not None and self.quotient.has_nonneg_coeffs()

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "candidate": self.candidate,
            "quotient": None if self.quotient is None else self.quotient.to_json(),
            "quotient_text": None if self.quotient is None else str(self.quotient),
            "positive": self.positive,
        }


def _labelled(items: Union[Mapping[str, LaurentPoly], Sequence[LaurentPoly]]) -> list[tuple[str, LaurentPoly]]:
    if isinstance(items, Mapping):
        return list(items.items())
    return [(str(p), p) for p in items]


def divisibility_report(
    targets: Union[Mapping[str, LaurentPoly], Sequence[LaurentPoly]],
    candidates: Union[Mapping[str, LaurentPoly], Sequence[LaurentPoly]],
) -> list[DivRow]:
    """Trial-divide every target by every candidate, up to a q-power."""
    cands = _labelled(candidates)
    if any(p.is_zero() for _, p in cands):
        raise ZeroDivisionError("zero candidate")
    return [DivRow(tn, cn, exact_divide(t, c)) for tn, t in _labelled(targets) for cn, c in cands]
