"""Branching fraction-free elimination of the linear-cofactor Lie matrix.

Entries live in ``Q[k0, k1, k2, k3]``.  Constant pivots are taken eagerly.
When only unknown-dependent entries remain, the lowest-degree one ``p``
(ties broken by position) splits the search into ``q = 0`` for every
irreducible factor ``q`` of ``p`` and ``p != 0``.  A factor that is linear
in some unknown with a constant coefficient is solved and substituted.
Any other factor becomes a side constraint: elimination carries on in the
domain ``Q[k]/(q)``, where an entry counts as zero iff ``q`` divides it.
Updates follow Bareiss in ``Q[k]`` itself, so every entry stays a minor of
the (substituted) input and all divisions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from .lie_matrix import UNKNOWNS, LieMatrix

KRING, *KVARS = ring(",".join(UNKNOWNS), QQ)


class BranchBudgetExceeded(RuntimeError):
    def __init__(self, max_branches: int, branches: list["Branch"]):
        super().__init__(f"more than {max_branches} branches; search aborted")
        self.max_branches = max_branches
        self.branches = branches


@dataclass(frozen=True)
class Branch:
    """Terminal branch of the case split.

    ``point`` is set when every unknown is pinned to a rational value;
    ``unresolved`` holds constraints the elimination could not resolve
    into rational values while the kernel stays nontrivial; ``irrational``
    marks those that provably have no rational solution (an irreducible
    univariate factor of degree >= 2).  ``nullity`` is None when the branch
    was abandoned before its kernel was known.
    """

    constraints: tuple[str, ...]
    nullity: int | None
    point: tuple[Fraction, Fraction, Fraction, Fraction] | None = None
    free: tuple[str, ...] = ()
    unresolved: str | None = None
    irrational: bool = False


def to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def from_fraction(c: Fraction):
    return QQ(c.numerator, c.denominator)


def affine_to_ring(entry) -> PolyElement:
    c, *ks = entry
    out = KRING(from_fraction(c))
    for var, a in zip(KVARS, ks):
        if a:
            out += var * from_fraction(a)
    return out


def has_real_root(q: PolyElement) -> bool:
    """Real-root test for a univariate element (any variable); multivariate -> True."""
    if not _is_univariate(q):
        return True
    used = [i for i in range(len(KVARS)) if q.degree(i) > 0]
    from sympy import Poly, Symbol, count_roots

    t = Symbol("t")
    var = KVARS[used[0]]
    coeffs = {}
    for mon, c in q.terms():
        coeffs[mon[used[0]]] = c
    expr = sum(QQ.to_sympy(c) * t**e for e, c in coeffs.items())
    return count_roots(Poly(expr, t)) > 0


def _total_degree(q: PolyElement) -> int:
    return max((sum(m) for m in q.monoms()), default=-1)


def _is_univariate(q: PolyElement) -> bool:
    return sum(1 for i in range(len(KVARS)) if q.degree(i) > 0) == 1


def _linear_solve(q: PolyElement) -> tuple[int, PolyElement] | None:
    """Find an unknown appearing with degree 1 and constant coefficient; return (index, value)."""
    for vi in range(len(KVARS)):
        if q.degree(vi) != 1:
            continue
        coeff = KRING.zero
        rest = KRING.zero
        for mon, c in q.terms():
            if mon[vi] == 1:
                coeff += KRING({tuple(0 if t == vi else e for t, e in enumerate(mon)): c})
            else:
                rest += KRING({mon: c})
        if coeff.is_ground:
            return vi, -rest * (1 / coeff.LC)
    return None


@dataclass
class _State:
    rows: list[tuple[int, dict[int, PolyElement]]]
    ncols_left: int
    prev: PolyElement
    nonzero: list[PolyElement] = field(default_factory=list)
    subs: dict[int, PolyElement] = field(default_factory=dict)
    side: PolyElement | None = None

    def is_zero(self, e: PolyElement) -> bool:
        return not e or (self.side is not None and not e.rem(self.side))

    def copy(self) -> "_State":
        return _State(
            rows=[(i, dict(r)) for i, r in self.rows],
            ncols_left=self.ncols_left,
            prev=self.prev,
            nonzero=list(self.nonzero),
            subs=dict(self.subs),
            side=self.side,
        )


class ParametricEliminator:
    def __init__(self, lie: LieMatrix, max_branches: int = 512, unknowns: tuple[int, ...] = (0, 1, 2, 3)):
        if max_branches < 1:
            raise ValueError("max_branches must be >= 1")
        self.lie = lie
        self.max_branches = max_branches
        self.branches: list[Branch] = []
        self.unknowns = unknowns

    def initial_state(self) -> _State:
        rows: dict[int, dict[int, PolyElement]] = {}
        for (i, j), e in sorted(self.lie.entries.items()):
            rows.setdefault(i, {})[j] = affine_to_ring(e)
        return _State(rows=sorted(rows.items()), ncols_left=len(self.lie.cols), prev=KRING.one)

    def run(self) -> list[Branch]:
        self._explore(self.initial_state())
        return self.branches

    # -- internals ---------------------------------------------------------
    def _emit(self, branch: Branch) -> None:
        self.branches.append(branch)
        if len(self.branches) > self.max_branches:
            raise BranchBudgetExceeded(self.max_branches, list(self.branches))

    def _choose(self, st: _State) -> tuple[int, int, int] | None:
        best = None
        for pos, (_, row) in enumerate(st.rows):
            for j in sorted(row):
                if st.side is not None and st.is_zero(row[j]):
                    continue
                deg = _total_degree(row[j])
                key = (deg, pos, j)
                if best is None or key < best:
                    best = key
                    if deg == 0:
                        return best
        return best

    def _pivot(self, st: _State, pos: int, col: int) -> None:
        _, prow = st.rows[pos]
        p = prow[col]
        prev = st.prev
        new_rows = []
        for k, (idx, row) in enumerate(st.rows):
            if k == pos:
                continue
            a = row.get(col)
            keys = set(row) | (set(prow) if a else set())
            keys.discard(col)
            new = {}
            for j in keys:
                v = p * row.get(j, KRING.zero)
                if a:
                    b = prow.get(j)
                    if b:
                        v -= a * b
                if v:
                    new[j] = v if prev == 1 else v.exquo(prev)
            if new:
                new_rows.append((idx, new))
        st.rows = new_rows
        st.prev = p
        st.ncols_left -= 1

    def _explore(self, st: _State) -> None:
        while True:
            choice = self._choose(st)
            if choice is None:
                self._leaf(st)
                return
            deg, pos, col = choice
            if deg > 0:
                break
            self._pivot(st, pos, col)

        p = st.rows[pos][1][col]
        _, factors = p.factor_list()
        factors = sorted((q for q, _ in factors), key=lambda q: (_total_degree(q), str(q)))
        for q in factors:
            for child in self._constrain(st.copy(), [q]):
                self._explore(child)
        nonzero_state = st.copy()
        nonzero_state.nonzero.append(p)
        self._pivot(nonzero_state, pos, col)
        self._explore(nonzero_state)

    def _consistent(self, st: _State) -> bool:
        """False when an earlier ``!= 0`` assumption (or the Bareiss divisor) became zero."""
        if st.is_zero(st.prev):
            return False
        kept = []
        for z in st.nonzero:
            if st.is_zero(z):
                return False
            if not z.is_ground:
                kept.append(z)
        st.nonzero = kept
        return True

    def _constrain(self, st: _State, pending: list[PolyElement]) -> list[_State]:
        """Impose ``q = 0`` for every ``q`` in ``pending``; return the surviving states."""
        if not pending:
            return [st] if self._consistent(st) else []
        q, rest = pending[0], pending[1:]
        if not q:
            return self._constrain(st, rest)
        if q.is_ground:
            return []
        factors = [f for f, _ in q.factor_list()[1]]
        if len(factors) > 1:
            out = []
            for f in sorted(factors, key=lambda f: (_total_degree(f), str(f))):
                out.extend(self._constrain(st.copy(), [f, *rest]))
            return out
        q = factors[0]

        solved = _linear_solve(q)
        if solved is not None:
            vi, value = solved
            self._substitute(st, vi, value)
            var = KVARS[vi]
            side, st.side = st.side, None
            more = [side] if side is not None else []
            return self._constrain(st, [r.compose(var, value) for r in more + rest])

        if not has_real_root(q):
            return []
        if st.side is None or not st.side.rem(q):
            st.side = q
            return self._constrain(st, rest)
        return self._merge(st, [st.side, q, *rest])

    def _merge(self, st: _State, system: list[PolyElement]) -> list[_State]:
        """Several nonlinear constraints: split on the rational roots of a lex Groebner basis."""
        from sympy import groebner

        basis = groebner([g.as_expr() for g in system], *KRING.symbols, order="lex", domain=QQ)
        polys = [KRING.from_expr(g) for g in basis.exprs]
        if any(g.is_ground for g in polys):
            return []
        uni = next((g for g in reversed(polys) if _is_univariate(g)), None)
        if uni is None:
            self._emit(self._unresolved(st, polys, irrational=False))
            return []
        out = []
        for f, _ in sorted(uni.factor_list()[1], key=lambda t: (_total_degree(t[0]), str(t[0]))):
            if _linear_solve(f) is not None:
                child = st.copy()
                child.side = None
                out.extend(self._constrain(child, [f, *polys]))
            elif has_real_root(f):
                self._emit(self._unresolved(st, [f if g == uni else g for g in polys], irrational=True))
        return out

    def _substitute(self, st: _State, vi: int, value: PolyElement) -> None:
        var = KVARS[vi]
        st.prev = st.prev.compose(var, value)
        st.nonzero = [z.compose(var, value) for z in st.nonzero]
        rows = []
        for idx, row in st.rows:
            new = {}
            for j, e in row.items():
                e2 = e.compose(var, value)
                if e2:
                    new[j] = e2
            if new:
                rows.append((idx, new))
        st.rows = rows
        st.subs = {u: s.compose(var, value) for u, s in st.subs.items()}
        st.subs[vi] = value

    def _free(self, st: _State) -> tuple[str, ...]:
        return tuple(UNKNOWNS[u] for u in self.unknowns if u not in st.subs)

    def _constraints(self, st: _State, extra: list[PolyElement] = ()) -> tuple[str, ...]:
        out = [f"{UNKNOWNS[u]} = {v}" for u, v in st.subs.items()]
        polys = list(extra) if extra else ([st.side] if st.side is not None else [])
        out.extend(f"{q} = 0" for q in polys)
        return tuple(out)

    def _unresolved(self, st: _State, extra: list[PolyElement] = (), irrational: bool | None = None) -> Branch:
        polys = list(extra) if extra else [st.side]
        if irrational is None:
            irrational = any(_is_univariate(q) for q in polys)
        return Branch(
            self._constraints(st, polys),
            None if extra else st.ncols_left,
            free=self._free(st),
            unresolved=" and ".join(f"{q} = 0" for q in polys),
            irrational=irrational,
        )

    def _leaf(self, st: _State) -> None:
        free = self._free(st)
        if st.side is not None and st.ncols_left:
            self._emit(self._unresolved(st))
            return
        point = None
        if not free:
            point = tuple(to_fraction(st.subs[u].LC) if st.subs.get(u) else Fraction(0) for u in range(4))
        self._emit(Branch(self._constraints(st), st.ncols_left, point=point, free=free))


def iter_points(branches: list[Branch]) -> Iterator[tuple[Fraction, ...]]:
    seen = set()
    for b in branches:
        if b.point is not None and b.nullity and b.point not in seen:
            seen.add(b.point)
            yield b.point
