"""Acceptance suite: one group of tests per criterion.

Run ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``);
the terminal summary prints one PASS/FAIL line per criterion.
"""

import io
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
from conftest import ROOT, SYSTEMS
from oracles import EXP_UNKNOWNS, compare_with_search, gd_sympy, published_exponential_equations, rows_over
from test_numerics import LYAPUNOV_PHYSICAL
from test_transforms import _commutation_error

from darbouxkit.cli import run
from darbouxkit.darboux import (
    Cofactor,
    compose_first_integral,
    darboux_residual,
    exponential_system,
    find_exponential_factors,
    search,
    verify_rational_first_integral,
)
from darbouxkit.linalg import nullspace, rref
from darbouxkit.numerics import NumericField, cofactor_law_check, first_integral_drift, integrate, lyapunov_max
from darbouxkit.ratpoly import X, Y, Z
from darbouxkit.transforms import gd_change, gd_to_named, pushforward
from darbouxkit.vectorfield import GDParams, lie_derivative, make_gd, make_named, quadratic_part

PHYSICAL = (Fraction(1, 25), 1, 4, 250)
GD1123 = (1, 1, 2, 3)

criterion = pytest.mark.criterion


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def gd(params):
    return make_gd(GDParams(*params))


# -- 1 ---------------------------------------------------------------------------

@criterion(1, "no Darboux polynomials up to degree 4 with linear cofactor")
@pytest.mark.parametrize("name", ["gd-invariant-plane", "gd-physical"], ids=["(1,1,2,3)", "(1/25,1,4,250)"])
def test_c1_bounded_degree_nonexistence(name, tmp_path):
    path = tmp_path / "report.json"
    start = time.perf_counter()
    cli("analyze", SYSTEMS / f"{name}.vf", "--max-degree", 4, "--cofactor", "linear", "--json", path)
    elapsed = time.perf_counter() - start
    data = json.loads(path.read_text())
    nonconstant = [c for c in data["certificates"] if c["f"] not in ("1", "-1")]
    assert not data["partial"]
    assert data["undetermined"] == []
    assert nonconstant == [], f"found {[(c['f'], c['cofactor']) for c in nonconstant]}"
    assert elapsed < 300


# -- 2 ---------------------------------------------------------------------------

def _published_comparison(params):
    system = exponential_system(gd(params), 2)
    names = list(EXP_UNKNOWNS) + ["l0", "l1", "l2", "l3"]
    published = rows_over(published_exponential_equations(*params), names)
    col = {u: i for i, u in enumerate(system.unknowns)}
    order = [col["b_" + "".join(map(str, EXP_UNKNOWNS[n]))] if n in EXP_UNKNOWNS else col[n] for n in names]
    ours = [[row[j] for j in order] for row in system.equations()]
    return ours, published, len(names)


POSITIVE = [PHYSICAL, GD1123, (Fraction(7, 3), Fraction(1, 2), Fraction(5, 4), 9)]


@criterion(2, "exponential factors of degree 2: constant g only, published system row-equivalent")
@pytest.mark.parametrize("params", POSITIVE, ids=str)
def test_c2_exponential_factors(params):
    rep = find_exponential_factors(gd(params), 2)
    assert rep.certificates == []
    assert rep.branches[0].nullity == 1
    ours, published, n = _published_comparison(params)
    assert len(nullspace(ours, n)) == 1
    assert rref(ours)[0] == rref(published)[0]
    code, out, _ = cli("expfactor", SYSTEMS / "gd-physical.vf", "--max-degree", 2, "--json", "-")
    assert code == 1 and json.loads(out)["certificates"] == []


# -- 3 ---------------------------------------------------------------------------

@criterion(3, "degree-2 integrable cases and their rational first integral")
@pytest.mark.parametrize("A", [Fraction(2), Fraction(-3, 7)], ids=str)
def test_c3_integrable_cases(A):
    start = time.perf_counter()
    ra_zero = search(gd((A, Fraction(5, 2), 1, 0)), 2, "linear")
    cert = ra_zero.find(Y**2 + Z**2)
    assert cert is not None and cert.cofactor == Cofactor(-2)
    F = gd((A, 0, 1, Fraction(3, 4)))
    cert = search(F, 2, "linear").find(X**2 - A * Z**2)
    assert cert is not None and cert.cofactor == Cofactor(-2)
    assert darboux_residual(F, cert.f, cert.cofactor).is_zero()

    G = gd((A, 0, 1, 0))
    both = search(G, 2, "linear")
    fi = compose_first_integral([both.find(Y**2 + Z**2), both.find(X**2 - A * Z**2)], G)
    num, den = fi.rational_form()
    assert {num.primitive(), den.primitive()} == {(Y**2 + Z**2).primitive(), (X**2 - A * Z**2).primitive()}
    assert verify_rational_first_integral(G, num, den)
    assert time.perf_counter() - start < 10


# -- 4 ---------------------------------------------------------------------------

@criterion(4, "x^2 + A y^2 and y^2 + z^2 are integrals of the quadratic part")
def test_c4_quadratic_part_integrals():
    rng = random.Random(4)
    for _ in range(20):
        A = Fraction(rng.randint(-60, 60), rng.randint(1, 12))
        rest = [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(3)]
        Q = quadratic_part(gd((A, *rest)))
        assert lie_derivative(Q, X**2 + A * Y**2).is_zero()
        assert lie_derivative(Q, Y**2 + Z**2).is_zero()


# -- 5 ---------------------------------------------------------------------------

EQUIVALENCES = [
    ((-1, 2, 3, 1), "rabinovich", (1, 3, 1, 1), (0.3, -0.2, 0.4)),
    ((1, 3, 1, 1), "forced_damped", (Fraction(1, 2), 4, Fraction(-1, 2)), (0.3, 0.2, -0.1)),
    ((1, 0, 5, 0), "d2", (5, 1), (0.1, 0.2, -0.1)),
]


@criterion(5, "linear equivalences with Rabinovich, forced-damped and D2")
@pytest.mark.parametrize("params, target, expected, y0", EQUIVALENCES, ids=lambda v: str(v))
def test_c5_equivalences(params, target, expected, y0):
    image, derived = gd_to_named(GDParams(*params), target)
    assert derived == tuple(Fraction(v) for v in expected)
    T, _ = gd_change(GDParams(*params), target)
    assert pushforward(gd(params), T) == make_named(target, *expected) == image
    assert _commutation_error(params, target, 1, y0, 5.0) < 1e-6


# -- 6 ---------------------------------------------------------------------------

@criterion(6, "axis solution y = Ra + (y0 - Ra) exp(-t) to 1e-8 at default tolerances")
@pytest.mark.parametrize("params, y0", [(PHYSICAL, 1.0), (PHYSICAL, 249.0), (GD1123, 1.0), (GD1123, -2.0)], ids=str)
def test_c6_axis_solution(params, y0):
    Ra = float(params[3])
    tr = integrate(NumericField(gd(params)), (0.0, y0, 0.0), 10.0)
    err = max(abs(s[1] - (Ra + (y0 - Ra) * math.exp(-t))) for t, s in zip(tr.times, tr.states))
    off = max(max(abs(s[0]), abs(s[2])) for s in tr.states)
    assert off < 1e-12
    assert err < 1e-8, f"max |y - exact| = {err:.3g}"


# -- 7 ---------------------------------------------------------------------------

@criterion(7, "cofactor law and first-integral drift along trajectories")
def test_c7_certificate_dynamics():
    G = NumericField(gd((1, 1, 1, 0)))
    tr = integrate(G, (1, 1, 1), 20.0, n_samples=201)
    assert cofactor_law_check(G, Y**2 + Z**2, -2, tr) < 1e-6
    # A < 0 makes x^2 - A z^2 definite; for A > 0 and Ra != 0 the orbit approaches
    # x = +-sqrt(A) z, f decays faster than its terms and cancellation dominates
    A = Fraction(-1, 2)
    G = NumericField(gd((A, 0, 1, 3)))
    tr = integrate(G, (1, 0.5, 0.25), 20.0, n_samples=201)
    assert cofactor_law_check(G, X**2 - A * Z**2, -2, tr) < 1e-6
    A = Fraction(1, 2)
    G = NumericField(gd((A, 0, 1, 0)))
    tr = integrate(G, (2, 0.5, 0.5), 20.0, n_samples=401)
    assert first_integral_drift(G, Y**2 + Z**2, X**2 - A * Z**2, tr) < 1e-6


# -- 8 ---------------------------------------------------------------------------

@criterion(8, "bounded chaotic orbit at (1/25,1,4,250), positive Lyapunov exponent, SVG projections")
def test_c8_chaotic_attractor(tmp_path):
    F = NumericField(gd(PHYSICAL))
    tr = integrate(F, (1, 1, 1), 500.0, n_samples=5001)
    assert tr.times[-1] == 500.0
    assert max(max(abs(v) for v in s) for s in tr.states) < 1e3
    lam = lyapunov_max(F, (1, 1, 1), 500.0)
    assert lam > 0 and abs(lam - LYAPUNOV_PHYSICAL) <= 0.2 * LYAPUNOV_PHYSICAL
    svgs = []
    for plane in ("xy", "xz", "yz"):
        svgs += ["--svg", plane, tmp_path / f"{plane}.svg"]
    code, _, _ = cli("simulate", SYSTEMS / "gd-physical.vf", "--x0", "1,1,1", "--t-end", 500, "--samples", 5001, *svgs)
    assert code == 0
    for plane in ("xy", "xz", "yz"):
        text = (tmp_path / f"{plane}.svg").read_text()
        assert text.startswith("<?xml") and "<polyline" in text and text.rstrip().endswith("</svg>")


# -- 9 ---------------------------------------------------------------------------

def _mixed_sign_tuples(count=10, seed=9):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = tuple(Fraction(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 4)) for _ in range(4))
        if len({v > 0 for v in t}) == 2:
            out.append(t)
    return out


@criterion(9, "parametric search agrees with brute-force bilinear scan")
@pytest.mark.parametrize("params", _mixed_sign_tuples(), ids=lambda p: "(" + ",".join(map(str, p)) + ")")
def test_c9_oracle_equivalence(params):
    for n in (1, 2):
        report = search(gd(params), n, "linear")
        assert compare_with_search(report, gd_sympy(*params), n) == []


# -- 10 --------------------------------------------------------------------------

PROPERTY_TESTS = [
    "tests/test_ratpoly.py::test_round_trip",
    "tests/test_ratpoly.py::test_ring_laws",
    "tests/test_ratpoly.py::test_derivative_linear_and_leibniz",
    "tests/test_vectorfield.py::test_derivation_law",
    "tests/test_darboux.py::test_cofactor_additivity",
    "tests/test_transforms.py::test_functoriality",
    "tests/test_transforms.py::test_inverse_round_trip",
    "tests/test_darboux.py::test_mode_consistency",
]


@criterion(10, "property suites")
def test_c10_property_suites():
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_TESTS],
        cwd=ROOT, capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stdout[-3000:]
    assert f"{len(PROPERTY_TESTS)} passed" in proc.stdout


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q"]))
