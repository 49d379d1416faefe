"""Polynomial vector fields on R^3 and the systems used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ratpoly import Polynomial, Scalar, X, Y, Z, as_rational, format_polynomial

_ONE = Polynomial.constant(1)


@dataclass(frozen=True)
class VectorField:
    """``(P, Q, R)``: right-hand sides of ``x' = P, y' = Q, z' = R``."""

    P: Polynomial
    Q: Polynomial
    R: Polynomial
    name: str = ""

    @property
    def components(self) -> tuple[Polynomial, Polynomial, Polynomial]:
        return (self.P, self.Q, self.R)

    @property
    def degree(self) -> int:
        return max(0, *(c.degree for c in self.components))

    def __eq__(self, other) -> bool:
        # names are labels, not part of the field
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return label + "(" + ", ".join(format_polynomial(c) for c in self.components) + ")"

    def lie_derivative(self, f: Polynomial) -> Polynomial:
        return lie_derivative(self, f)


@dataclass(frozen=True)
class GDParams:
    A: Fraction
    C: Fraction
    sigma: Fraction
    Ra: Fraction

    def __init__(self, A: Scalar | str, C: Scalar | str, sigma: Scalar | str, Ra: Scalar | str):
        object.__setattr__(self, "A", as_rational(A))
        object.__setattr__(self, "C", as_rational(C))
        object.__setattr__(self, "sigma", as_rational(sigma))
        object.__setattr__(self, "Ra", as_rational(Ra))

    @property
    def physical(self) -> bool:
        """All four parameters strictly positive."""
        return all(v > 0 for v in (self.A, self.C, self.sigma, self.Ra))

    def as_dict(self) -> dict[str, Fraction]:
        return {"A": self.A, "C": self.C, "sigma": self.sigma, "Ra": self.Ra}


def make_gd(params: GDParams) -> VectorField:
    A, C, s, Ra = params.A, params.C, params.sigma, params.Ra
    return VectorField(
        A * Y * Z + C * Z - s * X,
        -X * Z + Ra - Y,
        -Z + X * Y,
        name=f"gd(A={A}, C={C}, sigma={s}, Ra={Ra})",
    )


def rabinovich(h, v1, v2, v3) -> VectorField:
    h, v1, v2, v3 = map(as_rational, (h, v1, v2, v3))
    return VectorField(
        h * Y - v1 * X + Y * Z,
        h * X - v2 * Y - X * Z,
        -v3 * Z + X * Y,
        name=f"rabinovich(h={h}, v1={v1}, v2={v2}, v3={v3})",
    )


def forced_damped(a, b, c) -> VectorField:
    a, b, c = map(as_rational, (a, b, c))
    return VectorField(
        -a * X + Y + Y * Z,
        X - a * Y + b * X * Z,
        c * Z - b * X * Y,
        name=f"forced_damped(a={a}, b={b}, c={c})",
    )


def d2(a, b) -> VectorField:
    a, b = map(as_rational, (a, b))
    return VectorField(a * X + Y * Z, b * Y + X * Z, Z - X * Y, name=f"d2(a={a}, b={b})")


_NAMED = {"rabinovich": rabinovich, "forced_damped": forced_damped, "d2": d2}


def make_named(system: str, *params) -> VectorField:
    """``make_named("rabinovich", h, v1, v2, v3)`` and friends."""
    key = system.replace("-", "_")
    try:
        ctor = _NAMED[key]
    except KeyError:
        raise ValueError(f"unknown system {system!r}; expected one of {sorted(_NAMED)}") from None
    return ctor(*params)


def lie_derivative(field: VectorField, f: Polynomial) -> Polynomial:
    """``P f_x + Q f_y + R f_z``."""
    out = Polynomial()
    for var, comp in zip("xyz", field.components):
        d = f.diff(var)
        if d:
            out = out + d * comp
    return out


def quadratic_part(field: VectorField) -> VectorField:
    """Top-degree homogeneous truncation of every component."""
    d = field.degree
    return VectorField(*(c.homogeneous_component(d) for c in field.components), name=field.name and f"top({field.name})")


def homogeneous_part(field: VectorField, d: int) -> VectorField:
    return VectorField(*(c.homogeneous_component(d) for c in field.components))


def divergence(field: VectorField) -> Polynomial:
    return field.P.diff("x") + field.Q.diff("y") + field.R.diff("z")


def zero_field() -> VectorField:
    return VectorField(Polynomial(), Polynomial(), Polynomial(), name="zero")
