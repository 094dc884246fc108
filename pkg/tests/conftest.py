from __future__ import annotations

import os
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from qjl.coeffs import GQ, ZetaRat
from qjl.series import QYSeries

settings.register_profile(
    "default", max_examples=int(os.environ.get("QJL_EXAMPLES", "40")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gq = st.builds(GQ, small_fracs, st.sampled_from([Fraction(0), Fraction(0), Fraction(1), Fraction(-1, 2)]))


@st.composite
def laurent(draw, max_terms: int = 3, span: int = 3):
    terms = draw(st.lists(st.tuples(st.integers(-span, span), gq), max_size=max_terms))
    return ZetaRat.laurent(terms)


@st.composite
def qy_series(draw, N: int = 6, offset=0, unit: bool = False, weight: int = 0):
    coeffs = draw(st.lists(laurent(), min_size=N, max_size=N))
    if unit:
        coeffs[0] = ZetaRat.const(1)
    return QYSeries(dict(enumerate(coeffs)), offset, N, weight)


@st.composite
def positive_series(draw, N: int = 6):
    """Weight-0 series with vanishing constant term."""
    coeffs = draw(st.lists(laurent(), min_size=N, max_size=N))
    coeffs[0] = ZetaRat.const(0)
    return QYSeries(dict(enumerate(coeffs)), 0, N, 0)


# -- acceptance summary: one line per numbered criterion -----------------------

import re

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        _CRITERIA[int(m.group(1))] = (m.group(2).replace("_", " "), "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcome = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {outcome}  {title}")
