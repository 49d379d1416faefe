"""Double-precision evaluation of polynomial vector fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ..ratpoly import Polynomial
from ..vectorfield import VectorField

# rational points exactly representable in binary64, used for the agreement check
_PROBES = (
    (Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1), Fraction(2), Fraction(-1)),
    (Fraction(1, 2), Fraction(-3, 4), Fraction(5, 4)),
    (Fraction(-7, 8), Fraction(13, 16), Fraction(3, 2)),
    (Fraction(10), Fraction(-25), Fraction(40)),
)
AGREEMENT_RTOL = 1e-12


class NumericMismatch(AssertionError):
    pass


def _monomial_source(m: tuple[int, int, int], names: Sequence[str]) -> str:
    parts = []
    for v, e in zip(names, m):
        parts.extend([v] * e)
    return "*".join(parts)


def polynomial_source(p: Polynomial, names: Sequence[str] = ("x", "y", "z")) -> str:
    """Python expression evaluating ``p`` in floats (coefficients rounded once)."""
    terms = []
    for m, c in p.items():
        mono = _monomial_source(m, names)
        coeff = repr(float(c))
        terms.append(f"{coeff}*{mono}" if mono else coeff)
    return " + ".join(terms) if terms else "0.0"


def compile_polynomial(p: Polynomial) -> Callable[[float, float, float], float]:
    src = f"def _f(x, y, z):\n    return {polynomial_source(p)}\n"
    ns: dict = {}
    exec(compile(src, "<polynomial>", "exec"), ns)
    return ns["_f"]


def _compile_rhs(components: Sequence[Polynomial], copies: int = 1):
    """``rhs(t, s)`` for ``copies`` independent copies of the field stacked in one state."""
    lines = ["def _rhs(t, s):"]
    out = []
    for k in range(copies):
        names = (f"x{k}", f"y{k}", f"z{k}")
        lines.append(f"    {', '.join(names)} = s[{3 * k}], s[{3 * k + 1}], s[{3 * k + 2}]")
        out.extend(polynomial_source(c, names) for c in components)
    lines.append(f"    return [{', '.join(out)}]")
    ns: dict = {}
    exec(compile("\n".join(lines) + "\n", "<vectorfield>", "exec"), ns)
    return ns["_rhs"]


def _compile_variational(components: Sequence[Polynomial]):
    """``rhs(t, s)`` for the state plus its 3x3 fundamental matrix (row major)."""
    J = [[c.diff(v) for v in "xyz"] for c in components]
    lines = ["def _rhs(t, s):", "    x, y, z = s[0], s[1], s[2]"]
    for i in range(3):
        for j in range(3):
            lines.append(f"    j{i}{j} = {polynomial_source(J[i][j])}")
    out = [polynomial_source(c) for c in components]
    for i in range(3):
        for col in range(3):
            out.append(" + ".join(f"j{i}{k}*s[{3 + 3 * k + col}]" for k in range(3)))
    lines.append(f"    return [{', '.join(out)}]")
    ns: dict = {}
    exec(compile("\n".join(lines) + "\n", "<variational>", "exec"), ns)
    return ns["_rhs"]


@dataclass
class NumericField:
    """Compiled float view of an exact field; agreement is checked on construction."""

    exact: VectorField
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        comps = self.exact.components
        self.rhs = _compile_rhs(comps)
        self.rhs_pair = _compile_rhs(comps, copies=2)
        self.rhs_variational = _compile_variational(comps)
        self._component_fns = [compile_polynomial(c) for c in comps]
        self._check_agreement()

    def _check_agreement(self) -> None:
        for pt in _PROBES:
            got = self.rhs(0.0, [float(v) for v in pt])
            for comp, g in zip(self.exact.components, got):
                want = comp.evaluate(pt)
                scale = float(sum(abs(c) * abs(Polynomial.monomial(m).evaluate(pt)) for m, c in comp.items()))
                if abs(g - float(want)) > AGREEMENT_RTOL * max(scale, 1e-300):
                    raise NumericMismatch(f"float evaluation of {comp} at {pt} gives {g}, exact {want}")

    def __call__(self, point: Sequence[float]) -> list[float]:
        return self.rhs(0.0, point)

    @classmethod
    def from_field(cls, fld: VectorField, params: dict | None = None) -> "NumericField":
        return cls(fld, dict(params or {}))
