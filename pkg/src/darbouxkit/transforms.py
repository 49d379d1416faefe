"""Affine changes of coordinates with time rescaling, and the equivalences of
the GD system with the Rabinovich, forced-damped and D2 systems."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .darboux.certificates import Cofactor, DarbouxCertificate
from .ratpoly import Polynomial, X, Y, Z, affine_substitute, as_rational
from .vectorfield import GDParams, VectorField, make_gd, make_named

Matrix3 = tuple[tuple[Fraction, Fraction, Fraction], ...]


class SingularMatrix(ValueError):
    pass


class ConditionViolated(ValueError):
    """The parameters do not satisfy the target system's condition."""


class IrrationalRadical(ValueError):
    """A square root in the change of variables is not rational for these parameters."""


class TransformMismatch(AssertionError):
    pass


def _det3(M: Sequence[Sequence[Fraction]]) -> Fraction:
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def inverse3(M: Sequence[Sequence[Fraction]]) -> Matrix3:
    """Exact inverse through the adjugate."""
    d = _det3(M)
    if d == 0:
        raise SingularMatrix("matrix of the change of coordinates is singular")
    cof = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [a for a in range(3) if a != i]
            c = [b for b in range(3) if b != j]
            minor = M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]
            cof[i][j] = (-1) ** (i + j) * minor
    # inverse = adjugate / det, adjugate = cofactor matrix transposed
    return tuple(tuple(cof[j][i] / d for j in range(3)) for i in range(3))


def _matmul(A, B) -> Matrix3:
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def _matvec(A, v) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(sum(A[i][k] * v[k] for k in range(3)) for i in range(3))


@dataclass(frozen=True)
class AffineTimeChange:
    """Old coordinates ``= matrix @ new + shift``; old time ``= time_scale * new time``."""

    matrix: Matrix3
    shift: tuple[Fraction, Fraction, Fraction] = (Fraction(0),) * 3
    time_scale: Fraction = Fraction(1)

    def __post_init__(self):
        M = tuple(tuple(as_rational(v) for v in row) for row in self.matrix)
        if len(M) != 3 or any(len(r) != 3 for r in M):
            raise ValueError("matrix must be 3x3")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "shift", tuple(as_rational(v) for v in self.shift))
        tau = as_rational(self.time_scale)
        if tau == 0:
            raise ValueError("time scale must be nonzero")
        object.__setattr__(self, "time_scale", tau)
        if _det3(M) == 0:
            raise SingularMatrix("matrix of the change of coordinates is singular")

    @classmethod
    def identity(cls) -> "AffineTimeChange":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def images(self) -> tuple[Polynomial, Polynomial, Polynomial]:
        """Old x, y, z as affine polynomials in the new coordinates."""
        new = (X, Y, Z)
        return tuple(
            sum((self.matrix[i][j] * new[j] for j in range(3)), Polynomial.constant(self.shift[i]))
            for i in range(3)
        )

    def inverse(self) -> "AffineTimeChange":
        Minv = inverse3(self.matrix)
        return AffineTimeChange(Minv, tuple(-c for c in _matvec(Minv, self.shift)), 1 / self.time_scale)

    def then(self, other: "AffineTimeChange") -> "AffineTimeChange":
        """Apply ``self`` first, then ``other`` to the resulting coordinates."""
        M = _matmul(self.matrix, other.matrix)
        b = tuple(a + c for a, c in zip(_matvec(self.matrix, other.shift), self.shift))
        return AffineTimeChange(M, b, self.time_scale * other.time_scale)

    def map_point(self, new_point: Sequence[float]) -> tuple[float, float, float]:
        """Old coordinates (floats) of a point given in new coordinates."""
        return tuple(
            float(self.shift[i]) + sum(float(self.matrix[i][j]) * new_point[j] for j in range(3)) for i in range(3)
        )


def compose(outer: AffineTimeChange, inner: AffineTimeChange) -> AffineTimeChange:
    """``outer o inner``: the change doing ``inner`` first."""
    return inner.then(outer)


def pushforward(field: VectorField, T: AffineTimeChange) -> VectorField:
    """The field in new coordinates: ``tau * M^-1 * F(M Y + b)``."""
    imgs = T.images()
    F = [affine_substitute(c, imgs) for c in field.components]
    Minv = inverse3(T.matrix)
    comps = [
        sum((Minv[i][j] * T.time_scale * F[j] for j in range(3)), Polynomial())
        for i in range(3)
    ]
    return VectorField(*comps)


def transport_certificate(cert: DarbouxCertificate, T: AffineTimeChange) -> DarbouxCertificate:
    """Carry a certificate along ``T``: invariants compose with the change, cofactors pick up ``tau``."""
    imgs = T.images()
    K = affine_substitute(cert.cofactor.as_polynomial(), imgs) * T.time_scale
    if cert.kind == "polynomial":
        return DarbouxCertificate.polynomial(affine_substitute(cert.f, imgs), Cofactor.from_polynomial(K))
    return DarbouxCertificate.exponential(
        affine_substitute(cert.g, imgs), affine_substitute(cert.h, imgs), Cofactor.from_polynomial(K)
    )


def rational_sqrt(q: Fraction, what: str) -> Fraction:
    """Exact nonnegative square root, or IrrationalRadical."""
    q = as_rational(q)
    if q < 0:
        raise IrrationalRadical(f"sqrt({what}) = sqrt({q}) is not real")
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n != q.numerator or d * d != q.denominator:
        raise IrrationalRadical(f"sqrt({what}) = sqrt({q}) is irrational")
    return Fraction(n, d)


TARGETS = ("rabinovich", "forced_damped", "d2")


def _normalize_target(target: str) -> str:
    t = target.replace("-", "_").lower()
    if t not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of rabinovich, forced-damped, d2")
    return t


def gd_change(params: GDParams, target: str, alpha=1) -> tuple[AffineTimeChange, tuple[Fraction, ...]]:
    """The change of variables taking GD to ``target`` and the target's parameters."""
    A, C, sigma, Ra = params.A, params.C, params.sigma, params.Ra
    t = _normalize_target(target)
    if t == "rabinovich":
        alpha = as_rational(alpha)
        if alpha == 0:
            raise ValueError("alpha must be nonzero")
        if C != -2 * A * Ra:
            raise ConditionViolated(f"Rabinovich form needs C = -2*A*Ra (C = {C}, -2*A*Ra = {-2 * A * Ra})")
        if A >= 0:
            raise ConditionViolated("Rabinovich form needs A < 0")
        s = rational_sqrt(-A, "-A")
        M = ((1 / alpha, 0, 0), (0, 0, -1 / (alpha * s)), (0, 1 / (alpha * s), 0))
        return AffineTimeChange(M, (0, Ra, 0), alpha), (alpha * s * Ra, alpha * sigma, alpha, alpha)
    if t == "forced_damped":
        if sigma != 1:
            raise ConditionViolated(f"forced-damped form needs sigma = 1 (sigma = {sigma})")
        if A == 0 or Ra == 0:
            raise ConditionViolated("forced-damped form needs A != 0 and Ra != 0")
        w = A * Ra + C
        s = rational_sqrt(w * Ra, "(A*Ra + C)*Ra")
        if s == 0:
            raise ConditionViolated("forced-damped form needs A*Ra + C != 0")
        kappa = w * s / (A * Ra)
        beta = w / A
        M = ((kappa, 0, 0), (0, 0, beta), (0, beta, 0))
        return AffineTimeChange(M, (0, Ra, 0), 1 / s), (1 / s, w / (A * Ra), -1 / s)
    if Ra != 0 or C != 0:
        raise ConditionViolated(f"D2 form needs Ra = C = 0 (Ra = {Ra}, C = {C})")
    if A <= 0:
        raise ConditionViolated("D2 form needs A > 0")
    r = rational_sqrt(A, "A")
    M = ((1, 0, 0), (0, 0, 1 / r), (0, -1 / r, 0))
    return AffineTimeChange(M, (0, 0, 0), -1), (sigma, Fraction(1))


def gd_to_named(params: GDParams, target: str, alpha=1) -> tuple[VectorField, tuple[Fraction, ...]]:
    """Push GD forward to the named target and check the result against the named constructor."""
    T, derived = gd_change(params, target, alpha)
    image = pushforward(make_gd(params), T)
    expected = make_named(_normalize_target(target), *derived)
    if image != expected:
        raise TransformMismatch(f"pushforward {image} differs from {expected}")
    return image, derived
