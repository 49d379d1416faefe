"""Cofactors, certificates and their exact verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from ..ratpoly import Polynomial, X, Y, Z, as_rational, format_polynomial
from ..vectorfield import VectorField, lie_derivative


class MissingDenominatorCertificate(ValueError):
    """An exponential factor exp(g/h) with nonconstant h needs a verified Darboux certificate for h."""


class UnverifiedCertificate(ValueError):
    pass


class UnverifiedDenominator(ValueError):
    pass


class ZeroDenominatorPolynomial(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Cofactor:
    """``K = k0 + k1*x + k2*y + k3*z``."""

    k0: Fraction = Fraction(0)
    k1: Fraction = Fraction(0)
    k2: Fraction = Fraction(0)
    k3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("k0", "k1", "k2", "k3"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def from_polynomial(cls, K: Polynomial) -> "Cofactor":
        if K.degree > 1:
            raise ValueError(f"cofactor {K} has degree {K.degree} > 1")
        return cls(K.coefficient((0, 0, 0)), K.coefficient((1, 0, 0)), K.coefficient((0, 1, 0)), K.coefficient((0, 0, 1)))

    @classmethod
    def from_sequence(cls, values: Sequence) -> "Cofactor":
        vals = list(values) + [0] * (4 - len(values))
        return cls(*vals[:4])

    def as_polynomial(self) -> Polynomial:
        return self.k0 + self.k1 * X + self.k2 * Y + self.k3 * Z

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.k0, self.k1, self.k2, self.k3)

    def is_zero(self) -> bool:
        return not any(self.as_tuple())

    def is_constant(self) -> bool:
        return not (self.k1 or self.k2 or self.k3)

    def __add__(self, other: "Cofactor") -> "Cofactor":
        return Cofactor(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def scaled(self, c) -> "Cofactor":
        c = as_rational(c)
        return Cofactor(*(c * a for a in self.as_tuple()))

    def __str__(self) -> str:
        return format_polynomial(self.as_polynomial())


@dataclass(frozen=True)
class DarbouxCertificate:
    """Either ``X(f) = K f`` (kind ``"polynomial"``) or an exponential factor
    ``exp(g/h)`` with ``X(exp(g/h)) = L exp(g/h)`` (kind ``"exponential"``)."""

    kind: str
    invariant: Polynomial | tuple[Polynomial, Polynomial]
    cofactor: Cofactor
    verified: bool = False
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in ("polynomial", "exponential"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        if self.kind == "exponential" and not (isinstance(self.invariant, tuple) and len(self.invariant) == 2):
            raise ValueError("exponential certificates carry a (g, h) pair")

    @classmethod
    def polynomial(cls, f: Polynomial, cofactor: Cofactor | Polynomial) -> "DarbouxCertificate":
        if isinstance(cofactor, Polynomial):
            cofactor = Cofactor.from_polynomial(cofactor)
        return cls("polynomial", f, cofactor)

    @classmethod
    def exponential(cls, g: Polynomial, h: Polynomial, cofactor: Cofactor | Polynomial) -> "DarbouxCertificate":
        if isinstance(cofactor, Polynomial):
            cofactor = Cofactor.from_polynomial(cofactor)
        return cls("exponential", (g, h), cofactor)

    @property
    def f(self) -> Polynomial:
        if self.kind != "polynomial":
            raise AttributeError("exponential certificates have no f")
        return self.invariant  # type: ignore[return-value]

    @property
    def g(self) -> Polynomial:
        return self.invariant[0]  # type: ignore[index]

    @property
    def h(self) -> Polynomial:
        return self.invariant[1]  # type: ignore[index]

    def describe(self) -> str:
        if self.kind == "polynomial":
            return f"f = {self.f}, K = {self.cofactor}"
        return f"exp(({self.g})/({self.h})), L = {self.cofactor}"


def darboux_residual(field: VectorField, f: Polynomial, cofactor: Cofactor | Polynomial) -> Polynomial:
    """``X(f) - K f``; zero exactly when (f, K) is a Darboux pair."""
    K = cofactor.as_polynomial() if isinstance(cofactor, Cofactor) else cofactor
    return lie_derivative(field, f) - K * f


def _denominator_cofactor(h: Polynomial, known: Iterable[DarbouxCertificate]) -> Cofactor | None:
    for cert in known:
        if cert.kind != "polynomial" or not cert.verified:
            continue
        f = cert.f
        if f.is_zero():
            continue
        # scalar multiples of h share the cofactor
        lm = f.leading_monomial()
        if lm == h.leading_monomial() and f * h.coefficient(lm) == h * f.coefficient(lm):
            return cert.cofactor
    return None


def exponential_residual(field: VectorField, g: Polynomial, h: Polynomial, cofactor: Cofactor, h_cofactor: Cofactor) -> Polynomial:
    """``X(g) - K_h g - L h`` where ``X(h) = K_h h``."""
    return lie_derivative(field, g) - h_cofactor.as_polynomial() * g - cofactor.as_polynomial() * h


def verify_certificate(
    field: VectorField,
    cert: DarbouxCertificate,
    denominators: Iterable[DarbouxCertificate] = (),
) -> bool:
    """Exact check of the defining identity.

    For ``exp(g/h)`` with nonconstant ``h`` a verified polynomial certificate
    for ``h`` must be supplied in ``denominators``.
    """
    if cert.kind == "polynomial":
        if cert.f.is_zero():
            return False
        return darboux_residual(field, cert.f, cert.cofactor).is_zero()
    g, h = cert.invariant  # type: ignore[misc]
    if h.is_zero():
        raise ZeroDenominatorPolynomial("h = 0 in exp(g/h)")
    if h.is_constant():
        h_cof = Cofactor()
    else:
        h_cof = _denominator_cofactor(h, denominators)
        if h_cof is None:
            raise MissingDenominatorCertificate(f"no verified Darboux certificate for h = {h}")
    return exponential_residual(field, g, h, cert.cofactor, h_cof).is_zero()


def verified(field: VectorField, cert: DarbouxCertificate, denominators: Iterable[DarbouxCertificate] = ()) -> DarbouxCertificate:
    """Return ``cert`` with its ``verified`` flag set by an exact re-check."""
    return replace(cert, verified=verify_certificate(field, cert, denominators))


def verify_rational_first_integral(field: VectorField, numerator: Polynomial, denominator: Polynomial) -> bool:
    """``Phi = numerator/denominator`` satisfies ``X(Phi) = 0`` (quotient rule form)."""
    if denominator.is_zero():
        raise ZeroDenominatorPolynomial("denominator polynomial is zero")
    return rational_first_integral_residual(field, numerator, denominator).is_zero()


def rational_first_integral_residual(field: VectorField, numerator: Polynomial, denominator: Polynomial) -> Polynomial:
    return denominator * lie_derivative(field, numerator) - numerator * lie_derivative(field, denominator)


def cofactor_of(field: VectorField, f: Polynomial) -> Cofactor | None:
    """Cofactor of ``f`` if ``f`` is a Darboux polynomial with a cofactor of degree <= 1, else None."""
    if f.is_zero():
        return None
    target = lie_derivative(field, f)
    q = _exact_quotient(target, f)
    if q is None or q.degree > 1:
        return None
    return Cofactor.from_polynomial(q)


def _exact_quotient(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """Multivariate division in graded lex; None unless ``b`` divides ``a``."""
    from ..ratpoly import grlex_key

    if a.is_zero():
        return Polynomial()
    lm_b = b.leading_monomial()
    lc_b = b.coefficient(lm_b)
    quotient = Polynomial()
    rest = a
    while not rest.is_zero():
        lm = rest.leading_monomial()
        shift = tuple(p - q for p, q in zip(lm, lm_b))
        if any(e < 0 for e in shift):
            return None
        term = Polynomial.monomial(shift, rest.coefficient(lm) / lc_b)
        quotient = quotient + term
        rest = rest - term * b
        if not rest.is_zero() and grlex_key(rest.leading_monomial()) >= grlex_key(lm):
            return None
    return quotient
