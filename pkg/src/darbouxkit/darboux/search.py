"""Degree-bounded searches for first integrals and Darboux polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..linalg import bareiss_det, nullspace, rref
from ..ratpoly import Polynomial
from ..vectorfield import VectorField
from .certificates import Cofactor, DarbouxCertificate, verify_certificate
from .lie_matrix import LieMatrix, build_lie_matrix
from .parametric import Branch, BranchBudgetExceeded, ParametricEliminator

DEFAULT_DEGREE = 4
DEFAULT_MAX_BRANCHES = 512


@dataclass(frozen=True)
class BranchSummary:
    constraints: tuple[str, ...]
    nullity: int


@dataclass
class SearchReport:
    system: str
    degree_bound: int
    mode: str
    certificates: list[DarbouxCertificate] = field(default_factory=list)
    branches: list[BranchSummary] = field(default_factory=list)
    unresolved: list[str] = field(default_factory=list)
    partial: bool = False
    notes: list[str] = field(default_factory=list)
    # unresolved entries not proven free of rational solutions
    undetermined: list[str] = field(default_factory=list)

    def cofactors(self) -> list[Cofactor]:
        return [c.cofactor for c in self.certificates]

    def find(self, f: Polynomial) -> DarbouxCertificate | None:
        """Certificate whose invariant is a scalar multiple of ``f``."""
        for cert in self.certificates:
            if cert.kind == "polynomial" and cert.f.primitive() == f.primitive():
                return cert
        return None


def canonical_basis(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Reduced echelon basis of the span; unique for a given subspace."""
    if not vectors:
        return []
    return rref(vectors)[0]


def eigenspace(lie: LieMatrix, k: Sequence[Fraction]) -> list[Polynomial]:
    """Nonconstant polynomials f (basis) with X(f) = K f for the fixed cofactor k."""
    M = lie.at(k)
    const_col = lie.column_index((0, 0, 0))
    keep = list(range(len(lie.cols)))
    if not any(k):
        # constants solve the K = 0 system trivially; quotient them out
        keep.remove(const_col)
    sub = [[row[j] for j in keep] for row in M]
    basis = canonical_basis(nullspace(sub, len(keep)))
    out = []
    for v in basis:
        full = [Fraction(0)] * len(lie.cols)
        for j, c in zip(keep, v):
            full[j] = c
        out.append(lie.vector_to_polynomial(full).primitive())
    return out


def _nullity(lie: LieMatrix, k: Sequence[Fraction]) -> int:
    M = lie.at(k)
    return len(lie.cols) - len(rref(M)[1])


def _certify(field: VectorField, f: Polynomial, k: Sequence[Fraction]) -> DarbouxCertificate:
    cert = DarbouxCertificate.polynomial(f, Cofactor(*k))
    if not verify_certificate(field, cert):
        raise AssertionError(f"internal error: search produced a non-certificate {cert.describe()}")
    return DarbouxCertificate("polynomial", f, cert.cofactor, verified=True)


def _system_label(field: VectorField) -> str:
    return str(field)


def find_polynomial_first_integrals(field: VectorField, n: int = DEFAULT_DEGREE) -> SearchReport:
    lie = build_lie_matrix(field, n, "zero")
    zero = (Fraction(0),) * 4
    report = SearchReport(_system_label(field), n, "zero")
    report.certificates = [_certify(field, f, zero) for f in eigenspace(lie, zero)]
    report.branches = [BranchSummary(("k0 = 0", "k1 = 0", "k2 = 0", "k3 = 0"), _nullity(lie, zero))]
    return report


# -- constant cofactors ------------------------------------------------------

def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Coefficients (ascending) of the interpolating polynomial, Newton form."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    # expand Newton form from the innermost term outward
    for i in range(n - 1, -1, -1):
        # out = out * (t - xs[i]) + coef[i]
        shifted = [Fraction(0)] + out[:-1]
        out = [s - xs[i] * o for s, o in zip(shifted, out)]
        out[0] += coef[i]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def gram_determinant(lie: LieMatrix) -> list[Fraction]:
    """Ascending coefficients of ``det(M(k0)^T M(k0))`` for a constant-mode matrix.

    Evaluated at integer k0 by fraction-free elimination and recovered by
    exact interpolation; entries are affine in k0, so the degree is at most
    twice the column count.  The matrix is scaled by a common denominator,
    which multiplies the result by a positive constant only.
    """
    if lie.mode != "constant":
        raise ValueError("gram determinant needs a constant-mode matrix")
    nr, nc = lie.shape
    den = 1
    for e in lie.entries.values():
        den = lcm(den, e[0].denominator, e[1].denominator)
    base = [[0] * nc for _ in range(nr)]
    slope = []
    for (i, j), e in lie.entries.items():
        base[i][j] = int(e[0] * den)
        if e[1]:
            slope.append((i, j, int(e[1] * den)))
    degree = 2 * nc
    points = [((-1) ** p) * ((p + 1) // 2) for p in range(degree + 1)]  # 0, -1, 1, -2, 2, ...
    values = []
    for k0 in points:
        M = [row[:] for row in base]
        for i, j, s in slope:
            M[i][j] += s * k0
        cols = [[M[i][j] for i in range(nr)] for j in range(nc)]
        G = [[sum(a * b for a, b in zip(cols[p], cols[q])) for q in range(nc)] for p in range(nc)]
        values.append(bareiss_det(G))
    return _interpolate(points, values)


def _factor_univariate(coeffs: Sequence[Fraction]):
    """Irreducible factors over Q of the ascending-coefficient polynomial in k0."""
    from sympy import Poly, QQ, Symbol

    k0 = Symbol("k0")
    poly = Poly(list(reversed([QQ(c.numerator, c.denominator) for c in coeffs])), k0, domain=QQ)
    _, factors = poly.factor_list()
    return k0, [f for f, _ in factors]


def find_darboux_constant_cofactor(field: VectorField, n: int = DEFAULT_DEGREE) -> SearchReport:
    """Darboux polynomials of degree <= n with constant cofactor.

    The cofactor candidates are the roots of det(M^T M) as a polynomial in
    k0.  Rational roots yield exact eigenspaces; irreducible factors of
    higher degree with a real root are listed as unresolved.
    """
    from sympy import count_roots

    lie = build_lie_matrix(field, n, "constant")
    report = SearchReport(_system_label(field), n, "constant")
    coeffs = gram_determinant(lie)
    # eigenvectors for distinct k0 are independent, so only finitely many k0 can work
    if all(c == 0 for c in coeffs):
        raise ArithmeticError("gram determinant vanishes identically")
    _, factors = _factor_univariate(coeffs)
    roots = []
    for f in factors:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            r = -Fraction(int(b.p), int(b.q)) / Fraction(int(a.p), int(a.q))
            roots.append(r)
        elif count_roots(f) > 0:
            report.unresolved.append(f"{f.as_expr()} = 0")
    for r in sorted(set(roots), reverse=True):
        k = (r, Fraction(0), Fraction(0), Fraction(0))
        report.branches.append(BranchSummary((f"k0 = {r}",), _nullity(lie, k)))
        report.certificates.extend(_certify(field, f, k) for f in eigenspace(lie, k))
    report.unresolved.sort()
    return report


def find_darboux_linear_cofactor(
    field: VectorField, n: int = DEFAULT_DEGREE, max_branches: int = DEFAULT_MAX_BRANCHES
) -> SearchReport:
    """Darboux polynomials of degree <= n with cofactor k0 + k1 x + k2 y + k3 z.

    Raises BranchBudgetExceeded (with the partial report attached as
    ``exc.report``) when the case split grows past ``max_branches``.
    """
    lie = build_lie_matrix(field, n, "linear")
    report = SearchReport(_system_label(field), n, "linear")
    engine = ParametricEliminator(lie, max_branches=max_branches)
    try:
        branches = engine.run()
    except BranchBudgetExceeded as exc:
        report.partial = True
        _collect_linear(field, lie, exc.branches, report)
        exc.report = report
        raise
    _collect_linear(field, lie, branches, report)
    return report


def _collect_linear(field: VectorField, lie: LieMatrix, branches: list[Branch], report: SearchReport) -> None:
    seen: set = set()
    for b in branches:
        if b.unresolved is not None:
            text = " and ".join(b.constraints)
            report.unresolved.append(text)
            if not b.irrational:
                report.undetermined.append(text)
            continue
        report.branches.append(BranchSummary(b.constraints, b.nullity))
        if not b.nullity:
            continue
        if b.point is None:
            text = "family with free " + ", ".join(b.free) + ": " + (" and ".join(b.constraints) or "no constraints")
            report.unresolved.append(text)
            report.undetermined.append(text)
            continue
        if b.point in seen:
            continue
        seen.add(b.point)
        report.certificates.extend(_certify(field, f, b.point) for f in eigenspace(lie, b.point))


def search(field: VectorField, n: int = DEFAULT_DEGREE, mode: str = "linear", max_branches: int = DEFAULT_MAX_BRANCHES) -> SearchReport:
    if mode == "zero":
        return find_polynomial_first_integrals(field, n)
    if mode == "constant":
        return find_darboux_constant_cofactor(field, n)
    if mode == "linear":
        return find_darboux_linear_cofactor(field, n, max_branches)
    raise ValueError(f"unknown cofactor mode {mode!r}")
