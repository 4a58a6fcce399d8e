from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from icbdual.ring import LaurentPoly, RatFunc

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def laurent(max_terms=4, lo=-5, hi=5, coeff=4):
    return st.dictionaries(
        st.integers(lo, hi), st.integers(-coeff, coeff), max_size=max_terms,
    ).map(LaurentPoly)


def nonzero_laurent(**kw):
    return laurent(**kw).filter(bool)


def ratfunc():
    return st.builds(RatFunc, laurent(max_terms=3), nonzero_laurent(max_terms=3))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
points = st.sampled_from([Fraction(2), Fraction(3), Fraction(-2), Fraction(5, 3), Fraction(-7, 2)])


# one summary line per acceptance criterion

import pytest  # noqa: E402

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    name = item.name
    if not name.startswith("test_criterion_"):
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        title = (item.function.__doc__ or name).strip().splitlines()[0]
        _CRITERIA[name] = (title, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[2])):
        title, outcome = _CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {title}")
