import os
import random

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qdeform.polycore import LaurentPoly

settings.register_profile("default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

Q = sympy.Symbol("q")


def to_sympy(p: LaurentPoly):
    return sum((c * Q**e for e, c in p.terms.items()), sympy.Integer(0))


def from_sympy(expr) -> LaurentPoly:
    expr = sympy.expand(expr)
    if expr == 0:
        return LaurentPoly()
    terms = {}
    for term in sympy.Add.make_args(expr):
        c, e = term.as_coeff_exponent(Q)
        terms[int(e)] = terms.get(int(e), 0) + int(c)
    return LaurentPoly(terms)


def laurent_polys(min_exp=-4, max_exp=6, max_coeff=9, max_terms=6):
    return st.dictionaries(
        st.integers(min_exp, max_exp), st.integers(-max_coeff, max_coeff), max_size=max_terms
    ).map(LaurentPoly)


def polys(max_deg=6, max_coeff=9):
    return laurent_polys(0, max_deg, max_coeff, max_deg + 1)


def nonzero(strategy):
    return strategy.filter(lambda p: not p.is_zero())


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
