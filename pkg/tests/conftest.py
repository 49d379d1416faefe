import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from darbouxkit.ratpoly import Polynomial  # noqa: E402
from darbouxkit.vectorfield import GDParams, VectorField, make_gd  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
SYSTEMS = ROOT / "systems"

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
nonzero_rationals = rationals.filter(lambda q: q != 0)
monomials = st.tuples(*(st.integers(0, 3),) * 3)


@st.composite
def polynomials(draw, max_terms=5, max_degree=3):
    terms = draw(st.dictionaries(monomials.filter(lambda m: sum(m) <= max_degree), rationals, max_size=max_terms))
    return Polynomial(terms)


@st.composite
def affine_polynomials(draw):
    c = [draw(st.fractions(min_value=-3, max_value=3, max_denominator=4)) for _ in range(4)]
    return Polynomial({(0, 0, 0): c[0], (1, 0, 0): c[1], (0, 1, 0): c[2], (0, 0, 1): c[3]})


@st.composite
def quadratic_fields(draw):
    return VectorField(*(draw(polynomials(max_terms=4, max_degree=2)) for _ in range(3)))


@st.composite
def gd_params(draw):
    return GDParams(*(draw(rationals) for _ in range(4)))


points = st.tuples(rationals, rationals, rationals)


@pytest.fixture
def gd1123():
    return make_gd(GDParams(1, 1, 2, 3))


@pytest.fixture
def gd_physical():
    return make_gd(GDParams(Fraction(1, 25), 1, 4, 250))


# -- acceptance summary ------------------------------------------------------------

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _criteria.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if report.when == "call" or report.failed:
        entry["ran"] += report.when == "call"
        if report.failed:
            entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {number:2d}: {status}  {entry['title']}"
        if entry["failed"]:
            line += f"  (failed: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
