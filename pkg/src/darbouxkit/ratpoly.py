"""Exact sparse polynomials in x, y, z over the rationals.

Coefficients are :class:`fractions.Fraction`; monomials are exponent triples
ordered graded-lexicographically with ``x > y > z``.  Polynomials are
immutable and canonical, so ``==`` is mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Callable, Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Rational = Fraction
Monomial = Tuple[int, int, int]
Scalar = Union[int, Fraction]

VARIABLES = ("x", "y", "z")
ONE: Monomial = (0, 0, 0)
MAX_EXPONENT = 2**31


class PolynomialSyntaxError(SyntaxError):
    """Malformed polynomial expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class UnboundIdentifier(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unbound identifier {self.name!r}"


class ZeroDenominator(ZeroDivisionError):
    pass


class DegreeError(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings ("3/4", "-2", "0.04") exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError as exc:
            raise ZeroDenominator(value) from exc
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def monomial_degree(m: Monomial) -> int:
    return m[0] + m[1] + m[2]


def grlex_key(m: Monomial) -> tuple:
    """Sort key; larger key means larger monomial in graded lex (x > y > z)."""
    return (m[0] + m[1] + m[2], m[0], m[1], m[2])


def monomials_up_to(n: int) -> list[Monomial]:
    """All monomials of total degree <= n, descending graded-lex order."""
    out = []
    for d in range(n, -1, -1):
        out.extend(monomials_of_degree(d))
    return out


def monomials_of_degree(d: int) -> list[Monomial]:
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


class Polynomial:
    """Immutable sparse polynomial, ``terms`` maps exponent triples to Fractions."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != 3 or any(e < 0 or e >= MAX_EXPONENT for e in m):
                    raise ValueError(f"bad monomial {m!r}")
                c = as_rational(c)
                if c:
                    clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: caller guarantees no zero coefficients
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        i = VARIABLES.index(name)
        m = [0, 0, 0]
        m[i] = 1
        return cls._raw({tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls({m: c})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order."""
        for m in sorted(self._terms, key=grlex_key, reverse=True):
            yield m, self._terms[m]

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == ONE for m in self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((monomial_degree(m) for m in self._terms), default=-1)

    def leading_monomial(self) -> Monomial:
        return max(self._terms, key=grlex_key)

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self._terms}) <= 1

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(as_rational(other))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            if not c:
                return Polynomial._raw({})
            return Polynomial._raw({m: v * c for m, v in self._terms.items()})
        out: Dict[Monomial, Fraction] = {}
        for (a0, a1, a2), ca in self._terms.items():
            for (b0, b1, b2), cb in other._terms.items():
                m = (a0 + b0, a1 + b1, a2 + b2)
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Polynomial":
        # scalar division only
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        try:
            return self == Polynomial._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- calculus and structure -------------------------------------------
    def diff(self, var: str | int) -> "Polynomial":
        i = VARIABLES.index(var) if isinstance(var, str) else var
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Polynomial._raw(out)

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self._terms.items() if monomial_degree(m) == d})

    def evaluate(self, point: Sequence) -> Fraction:
        px, py, pz = (as_rational(v) for v in point)
        total = Fraction(0)
        for (a, b, c), coef in self._terms.items():
            total += coef * px**a * py**b * pz**c
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        px, py, pz = point
        return sum(float(c) * px**a * py**b * pz**e for (a, b, e), c in self._terms.items())

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` having coprime integer coefficients
        and a positive leading coefficient sign preserved."""
        from math import gcd, lcm

        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Integer-coefficient primitive part with positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if self._terms[self.leading_monomial()] < 0:
            c = -c
        return self / c


def ring_op(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    ops: dict[str, Callable[[Polynomial, Polynomial], Polynomial]] = {
        "add": Polynomial.__add__,
        "sub": Polynomial.__sub__,
        "mul": Polynomial.__mul__,
    }
    try:
        return ops[op](p, q)
    except KeyError:
        raise ValueError(f"unknown ring operation {op!r}") from None


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    return p.diff(var)


def homogeneous_component(p: Polynomial, d: int) -> Polynomial:
    return p.homogeneous_component(d)


def evaluate(p: Polynomial, point: Sequence) -> Fraction:
    return p.evaluate(point)


def affine_substitute(p: Polynomial, images: Mapping[str, Polynomial] | Sequence[Polynomial]) -> Polynomial:
    """Compose ``p(images[x], images[y], images[z])`` for images of degree <= 1."""
    if isinstance(images, Mapping):
        imgs = [images[v] for v in VARIABLES]
    else:
        imgs = list(images)
    if len(imgs) != 3:
        raise ValueError("need exactly three images")
    for v, im in zip(VARIABLES, imgs):
        if im.degree > 1:
            raise DegreeError(f"image of {v} has degree {im.degree} > 1")
    # cache powers; exponents are small in practice
    powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1)} for _ in range(3)]

    def power(i: int, e: int) -> Polynomial:
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * imgs[i]
        return cache[e]

    out = Polynomial()
    for (a, b, c), coef in p._terms.items():
        out = out + power(0, a) * power(1, b) * power(2, c) * coef
    return out


# -- printing ---------------------------------------------------------------

def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(m: Monomial) -> str:
    parts = []
    for name, e in zip(VARIABLES, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical descending graded-lex rendering, e.g. ``x^2 - 1/25*z^2``."""
    if p.is_zero():
        return "0"
    chunks = []
    for i, (m, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        mono = _format_monomial(m)
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if i == 0:
            chunks.append(body if sign == "+" else f"-{body}")
        else:
            chunks.append(f" {sign} {body}")
    return "".join(chunks)


# -- parsing ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, bindings: Mapping[str, Scalar]):
        self.text = text
        self.bindings = bindings
        self.tokens = list(self._tokenize(text))
        self.i = 0

    def _tokenize(self, text: str) -> Iterable[tuple[str, str, int]]:
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                yield ("num", text[i:j], i)
                i = j
            elif ch.isalpha():
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                yield ("ident", text[i:j], i)
                i = j
            elif ch in "+-*/^()":
                yield (ch, ch, i)
                i += 1
            else:
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", text, i)
        yield ("end", "", n)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolynomialSyntaxError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        self.take("end")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "-":
            self.take("-")
            return -self.factor()
        if kind == "num":
            self.take("num")
            num = int(value)
            if self.peek()[0] == "/":
                self.take("/")
                _, dtext, dpos = self.take("num")
                den = int(dtext)
                if den == 0:
                    raise ZeroDenominator(f"zero denominator at position {dpos}: {self.text!r}")
                return Polynomial.constant(Fraction(num, den))
            return Polynomial.constant(num)
        if kind == "ident":
            self.take("ident")
            if value in VARIABLES:
                base = Polynomial.variable(value)
            elif value in self.bindings:
                base = Polynomial.constant(as_rational(self.bindings[value]))
            else:
                raise UnboundIdentifier(value)
            if self.peek()[0] == "^":
                self.take("^")
                _, etext, _ = self.take("num")
                return base ** int(etext)
            return base
        if kind == "(":
            self.take("(")
            p = self.expr()
            self.take(")")
            if self.peek()[0] == "^":
                # accepted for convenience; canonical output never produces it
                self.take("^")
                _, etext, _ = self.take("num")
                return p ** int(etext)
            return p
        what = "end of input" if kind == "end" else repr(value)
        raise PolynomialSyntaxError(f"unexpected {what}", self.text, pos)


def parse_polynomial(text: str, bindings: Mapping[str, Scalar] | None = None) -> Polynomial:
    """Parse an expression over x, y, z with parameters substituted from ``bindings``."""
    return _Parser(text, bindings or {}).parse()


X = Polynomial.variable("x")
Y = Polynomial.variable("y")
Z = Polynomial.variable("z")
