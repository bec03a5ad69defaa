from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sepint.polyalg import MultiPoly

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def polys(draw, nvars=2, max_deg=3, max_terms=4, nonzero=False):
    n_terms = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n_terms):
        e = tuple(draw(st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars)))
        if sum(e) > max_deg:
            continue
        c = Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 3)))
        terms[e] = terms.get(e, 0) + c
    p = MultiPoly({e: c for e, c in terms.items() if c}, nvars)
    if nonzero and p.is_zero():
        p = MultiPoly.constant(1, nvars)
    return p


@st.composite
def homogeneous_polys(draw, nvars=3, deg=3):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        cuts = sorted(draw(st.lists(st.integers(0, deg), min_size=nvars - 1, max_size=nvars - 1)))
        e = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
        terms[e] = terms.get(e, 0) + draw(st.integers(1, 5))
    return MultiPoly(terms, nvars)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
