"""Coefficient matrix of ``f -> X(f) - K f`` on the monomial basis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from ..ratpoly import Monomial, Polynomial, monomials_up_to
from ..vectorfield import VectorField, lie_derivative

MODES = ("zero", "constant", "linear")
UNKNOWNS = ("k0", "k1", "k2", "k3")
# row shift contributed by each cofactor unknown: k0*m, k1*x*m, k2*y*m, k3*z*m
_SHIFTS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))

Affine = tuple[Fraction, Fraction, Fraction, Fraction, Fraction]  # (c, c_k0, c_k1, c_k2, c_k3)


@dataclass(frozen=True)
class LieMatrix:
    """Rows: monomials of degree <= n+1, columns: degree <= n (descending graded lex).

    Entry ``(i, j)`` is the coefficient of ``rows[i]`` in ``X(cols[j]) - K cols[j]``,
    stored as an affine form in the cofactor unknowns.
    """

    rows: tuple[Monomial, ...]
    cols: tuple[Monomial, ...]
    mode: str
    entries: Mapping[tuple[int, int], Affine]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    def entry(self, i: int, j: int) -> Affine:
        return self.entries.get((i, j), (Fraction(0),) * 5)

    def has_unknowns(self) -> bool:
        return any(any(e[1:]) for e in self.entries.values())

    def at(self, k: Sequence) -> list[list[Fraction]]:
        """Dense rational matrix with the unknowns set to ``k = (k0, k1, k2, k3)``."""
        kk = [Fraction(v) for v in k] + [Fraction(0)] * (4 - len(k))
        out = [[Fraction(0)] * len(self.cols) for _ in self.rows]
        for (i, j), e in self.entries.items():
            out[i][j] = e[0] + e[1] * kk[0] + e[2] * kk[1] + e[3] * kk[2] + e[4] * kk[3]
        return out

    def constant_part(self) -> list[list[Fraction]]:
        return self.at((0, 0, 0, 0))

    def column_index(self, m: Monomial) -> int:
        return self.cols.index(tuple(m))

    def vector_to_polynomial(self, v: Sequence[Fraction]) -> Polynomial:
        return Polynomial({m: c for m, c in zip(self.cols, v) if c})


def _row_degree_bound(field: VectorField, n: int) -> int:
    return n + max(field.degree - 1, 1)


def build_lie_matrix(field: VectorField, n: int, mode: str = "linear") -> LieMatrix:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if n < 1:
        raise ValueError("degree bound must be >= 1")
    if field.degree > 2 and mode == "linear":
        raise ValueError("linear cofactors are only complete for fields of degree <= 2")
    cols = tuple(monomials_up_to(n))
    rows = tuple(monomials_up_to(_row_degree_bound(field, n)))
    ridx = {m: i for i, m in enumerate(rows)}
    active = {"zero": 0, "constant": 1, "linear": 4}[mode]
    acc: dict[tuple[int, int], list[Fraction]] = {}
    for j, m in enumerate(cols):
        image = lie_derivative(field, Polynomial.monomial(m))
        for mm, c in image.items():
            acc.setdefault((ridx[mm], j), [Fraction(0)] * 5)[0] += c
        for u in range(active):
            sh = _SHIFTS[u]
            mm = (m[0] + sh[0], m[1] + sh[1], m[2] + sh[2])
            acc.setdefault((ridx[mm], j), [Fraction(0)] * 5)[u + 1] -= 1
    entries = {key: tuple(v) for key, v in acc.items() if any(v)}
    return LieMatrix(rows, cols, mode, entries)


def expected_shape(n: int) -> tuple[int, int]:
    return (comb(n + 4, 3), comb(n + 3, 3))
