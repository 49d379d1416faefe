"""Exponential factors exp(g/h) with a fixed, already certified denominator h."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..linalg import nullspace, rref
from ..ratpoly import Monomial, Polynomial, X, Y, Z, monomial_degree, monomials_up_to
from ..vectorfield import VectorField, lie_derivative
from .certificates import (
    Cofactor,
    DarbouxCertificate,
    UnverifiedDenominator,
    verify_certificate,
)
from .search import SearchReport, BranchSummary, _system_label

L_UNKNOWNS = ("l0", "l1", "l2", "l3")
_LINEAR = (Polynomial.constant(1), X, Y, Z)


@dataclass(frozen=True)
class ExponentialSystem:
    """Linear system in the coefficients of g (degree <= d) and l0..l3.

    Column ``j`` holds the image of the j-th unknown under
    ``(g, L) -> X(g) - K_h g - L h``; ``unknowns`` names the columns
    (``b_<exponents>`` for g, then ``l0..l3``).
    """

    g_monomials: tuple[Monomial, ...]
    rows: tuple[Monomial, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    h: Polynomial
    h_cofactor: Cofactor

    @property
    def unknowns(self) -> tuple[str, ...]:
        return tuple("b_" + "".join(map(str, m)) for m in self.g_monomials) + L_UNKNOWNS

    def equations(self) -> list[list[Fraction]]:
        """The nonzero rows: one linear constraint per monomial of the identity."""
        return [list(r) for r in self.matrix if any(r)]

    def split(self, v) -> tuple[Polynomial, Cofactor]:
        ng = len(self.g_monomials)
        g = Polynomial({m: c for m, c in zip(self.g_monomials, v[:ng]) if c})
        return g, Cofactor(*v[ng:])


def exponential_system(field: VectorField, d: int, h: Polynomial | None = None, h_cofactor: Cofactor | None = None) -> ExponentialSystem:
    if d < 1:
        raise ValueError("degree bound for g must be >= 1")
    h = Polynomial.constant(1) if h is None else h
    h_cofactor = Cofactor() if h_cofactor is None else h_cofactor
    K = h_cofactor.as_polynomial()
    gmons = tuple(monomials_up_to(d))
    images = [lie_derivative(field, Polynomial.monomial(m)) - K * Polynomial.monomial(m) for m in gmons]
    images += [-(e * h) for e in _LINEAR]
    top = max((p.degree for p in images), default=0)
    rows = tuple(monomials_up_to(max(top, 0)))
    matrix = tuple(tuple(p.coefficient(r) for p in images) for r in rows)
    return ExponentialSystem(gmons, rows, matrix, h, h_cofactor)


def find_exponential_factors(
    field: VectorField,
    d: int = 2,
    h_cert: DarbouxCertificate | None = None,
) -> SearchReport:
    """Exponential factors exp(g/h) with deg g <= d and cofactor L of degree <= 1.

    Without ``h_cert`` the denominator is 1.  Otherwise ``h_cert`` must be a
    verified polynomial certificate (its cofactor is K_h).  Multiples of h
    in g only rescale the factor, so that direction is reported in the
    nullity but removed from the certificates.
    """
    if h_cert is None:
        h, K_h = Polynomial.constant(1), Cofactor()
    else:
        if h_cert.kind != "polynomial" or not h_cert.verified or not verify_certificate(field, h_cert):
            raise UnverifiedDenominator(f"denominator {h_cert.invariant} lacks a verified Darboux certificate")
        h, K_h = h_cert.f, h_cert.cofactor
    system = exponential_system(field, d, h, K_h)
    eqs = system.equations()
    n_unknowns = len(system.unknowns)
    full_nullity = n_unknowns - len(rref(eqs)[1]) if eqs else n_unknowns

    report = SearchReport(_system_label(field), d, "exponential")
    report.branches.append(BranchSummary(("h = " + str(h),), full_nullity))
    # g and g + c*h define the same factor up to a constant: drop the column of lm(h)
    keep = list(range(n_unknowns))
    if monomial_degree(h.leading_monomial()) <= d:
        keep.remove(system.g_monomials.index(h.leading_monomial()))
    sub = [[row[j] for j in keep] for row in eqs]
    basis = rref(nullspace(sub, len(keep)))[0] if sub else []
    denominators = [h_cert] if h_cert is not None else []
    if not h.is_constant():
        report.notes.append(f"coprimality of g and h = {h} is not checked beyond scalar multiples")
    for v in basis:
        full = [Fraction(0)] * n_unknowns
        for j, c in zip(keep, v):
            full[j] = c
        g, L = system.split(full)
        if g.is_zero() or (g.is_constant() and h.is_constant()):
            continue
        cert = DarbouxCertificate.exponential(g, h, L)
        if not verify_certificate(field, cert, denominators):
            raise AssertionError(f"internal error: non-certificate {cert.describe()}")
        report.certificates.append(DarbouxCertificate("exponential", (g, h), L, verified=True))
    return report
