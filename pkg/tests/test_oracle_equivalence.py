from fractions import Fraction

import pytest
from oracles import compare_with_search, gd_sympy

from darbouxkit.darboux import search
from darbouxkit.vectorfield import GDParams, make_gd

CASES = [
    (1, 1, 1, 0),
    (1, 0, 1, 0),
    (1, 1, 2, 3),
    (3, 0, 1, 4),
    (Fraction(1, 25), 1, 4, 250),
    (4, -6, 4, 1),
    (-1, 2, 3, 1),
]


@pytest.mark.parametrize("params", CASES, ids=str)
@pytest.mark.parametrize("n", [1, 2])
def test_search_matches_bilinear_scan(params, n):
    report = search(make_gd(GDParams(*params)), n, "linear")
    assert compare_with_search(report, gd_sympy(*params), n) == []


def test_irrational_cofactors_are_reported():
    # A = 3 is not a rational square: x +- sqrt(3) z would be invariant
    report = search(make_gd(GDParams(3, 0, 1, 4)), 2, "linear")
    assert report.unresolved
    assert report.undetermined == []


def test_comparison_detects_missing_certificate():
    report = search(make_gd(GDParams(1, 0, 1, 0)), 2, "linear")
    report.certificates = report.certificates[1:]
    assert compare_with_search(report, gd_sympy(1, 0, 1, 0), 2)
