"""Darboux first integrals from cofactor relations.

If ``sum(lambda_i K_i) + sum(mu_j L_j) = 0`` then
``prod f_i^lambda_i * prod exp(g_j/h_j)^mu_j`` is a first integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..linalg import nullspace, primitive_integer_vector, rref
from ..ratpoly import Polynomial
from ..vectorfield import VectorField
from .certificates import DarbouxCertificate, UnverifiedCertificate, cofactor_of, verify_rational_first_integral


@dataclass(frozen=True)
class DarbouxFirstIntegral:
    """Formal product ``prod f_i^lambda_i * prod E_j^mu_j``.

    ``exponents`` follows the order of ``certificates``; polynomial factors
    come first in the expression, exponential ones after.
    """

    certificates: tuple[DarbouxCertificate, ...]
    exponents: tuple[int, ...]
    kernel_dimension: int

    @property
    def lambdas(self) -> tuple[int, ...]:
        return tuple(e for c, e in zip(self.certificates, self.exponents) if c.kind == "polynomial")

    @property
    def mus(self) -> tuple[int, ...]:
        return tuple(e for c, e in zip(self.certificates, self.exponents) if c.kind == "exponential")

    def rational_form(self) -> tuple[Polynomial, Polynomial] | None:
        """(numerator, denominator) when no exponential factor takes part."""
        num = Polynomial.constant(1)
        den = Polynomial.constant(1)
        for cert, e in zip(self.certificates, self.exponents):
            if not e:
                continue
            if cert.kind == "exponential":
                return None
            if e > 0:
                num = num * cert.f**e
            else:
                den = den * cert.f ** (-e)
        return num, den

    def expression(self) -> str:
        def power(base: str, e: int) -> str:
            return f"({base})" if e == 1 else f"({base})^{e}"

        up, down, exps = [], [], []
        for cert, e in zip(self.certificates, self.exponents):
            if not e:
                continue
            if cert.kind == "exponential":
                scale = "" if e == 1 else f"{e}*"
                h = cert.h
                body = f"({cert.g})" if h.is_constant() and h.coefficient((0, 0, 0)) == 1 else f"({cert.g})/({h})"
                exps.append(f"exp({scale}{body})")
            elif e > 0:
                up.append(power(str(cert.f), e))
            else:
                down.append(power(str(cert.f), -e))
        head = "*".join(up + exps) or "1"
        if down:
            denom = down[0] if len(down) == 1 else "(" + "*".join(down) + ")"
            head = f"{head}/{denom}"
        return head

    def verify(self, field: VectorField) -> bool | None:
        """Exact check of X(G) = 0 for the rational form; None if exponentials are involved."""
        form = self.rational_form()
        if form is None:
            return None
        return verify_rational_first_integral(field, *form)


def cofactor_matrix(certs: Sequence[DarbouxCertificate]) -> list[list[Fraction]]:
    """4 x len(certs): rows are the 1, x, y, z coefficients of each cofactor."""
    return [[c.cofactor.as_tuple()[r] for c in certs] for r in range(4)]


def irreducible_factors(f: Polynomial) -> list[Polynomial]:
    """Distinct nonconstant irreducible factors of ``f`` over Q, primitive with positive leading coefficient."""
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    R, *_ = ring("x,y,z", QQ)
    element = R.from_dict({m: QQ(c.numerator, c.denominator) for m, c in f.items()})
    out = []
    for q, _ in element.factor_list()[1]:
        g = Polynomial({m: Fraction(int(c.numerator), int(c.denominator)) for m, c in q.terms()}).primitive()
        if not g.is_constant() and g not in out:
            out.append(g)
    return out


def irreducible_certificates(field: VectorField, certs: Sequence[DarbouxCertificate]) -> list[DarbouxCertificate]:
    """Replace polynomial certificates by certificates for their distinct irreducible factors.

    Every factor of a Darboux polynomial is again one, so ``cofactor_of``
    always succeeds; distinct irreducibles admit no trivial multiplicative
    relation, which keeps the composition away from identities like f/f.
    Exponential certificates are kept, duplicates removed.
    """
    out: list[DarbouxCertificate] = []
    for c in certs:
        if c.kind == "polynomial":
            for g in irreducible_factors(c.f):
                k = cofactor_of(field, g)
                if k is None:
                    raise UnverifiedCertificate(f"factor {g} of {c.f} is not a Darboux polynomial")
                cand = DarbouxCertificate.polynomial(g, k)
                if all(d.invariant != g for d in out):
                    out.append(DarbouxCertificate(cand.kind, cand.invariant, cand.cofactor, verified=True))
        elif all(d.invariant != c.invariant or d.cofactor != c.cofactor for d in out):
            out.append(c)
    return out


def compose_first_integral(
    certs: Sequence[DarbouxCertificate], field: VectorField | None = None
) -> DarbouxFirstIntegral | None:
    """Integer exponents (not all zero) cancelling the cofactors, or None.

    With ``field`` the certificates are first reduced to irreducible factors
    (see ``irreducible_certificates``). The returned vector is the first element of the reduced nullspace basis,
    scaled to a primitive integer vector with positive leading entry.
    """
    certs = tuple(certs)
    for c in certs:
        if not c.verified:
            raise UnverifiedCertificate(f"certificate {c.describe()} is not verified")
    if field is not None:
        certs = tuple(irreducible_certificates(field, certs))
    if not certs:
        return None
    M = cofactor_matrix(certs)
    kernel = nullspace(M, len(certs))
    if not kernel:
        return None
    basis = rref(kernel)[0]
    return DarbouxFirstIntegral(certs, tuple(primitive_integer_vector(basis[0])), len(basis))
