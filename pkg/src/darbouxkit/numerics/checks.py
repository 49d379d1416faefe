"""Trajectory integration and numeric checks of symbolic certificates."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..ratpoly import Polynomial
from .field import NumericField, compile_polynomial
from .integrator import DEFAULT_ATOL, DEFAULT_RTOL, Trajectory, dopri5

RENORM_DT = 0.5
PERTURBATION = 1e-8
TRANSIENT_FRACTION = 0.1


class DenominatorVanished(ZeroDivisionError):
    def __init__(self, t: float):
        super().__init__(f"denominator vanishes along the trajectory at t = {t!r}")
        self.t = t


def integrate(
    F: NumericField,
    x0: Sequence[float],
    t_end: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    t_eval: Sequence[float] | None = None,
    n_samples: int | None = None,
) -> Trajectory:
    """Trajectory of ``F`` from ``x0``; ``n_samples`` asks for equally spaced dense output."""
    if len(x0) != 3:
        raise ValueError("initial state must have three components")
    if n_samples is not None:
        if t_eval is not None:
            raise ValueError("give either t_eval or n_samples")
        t_eval = sample_times(t_end, n_samples)
    return dopri5(F.rhs, [float(c) for c in x0], float(t_end), rtol, atol, t_eval)


def sample_times(t_end: float, n_samples: int) -> list[float]:
    if n_samples < 2:
        raise ValueError("need at least two samples")
    return [t_end * i / (n_samples - 1) for i in range(n_samples)]


def cofactor_law_check(F: NumericField, f: Polynomial, k0, traj: Trajectory, atol: float = DEFAULT_ATOL) -> float:
    """Max relative deviation of ``f(x(t))`` from ``f(x0) exp(k0 t)``."""
    fn = compile_polynomial(f)
    k = float(Fraction(k0))
    t0 = traj.times[0]
    f0 = fn(*traj.states[0])
    worst = 0.0
    for t, s in zip(traj.times, traj.states):
        expected = f0 * math.exp(k * (t - t0))
        dev = abs(fn(*s) - expected) / max(abs(expected), atol)
        worst = max(worst, dev)
    return worst


def first_integral_drift(
    F: NumericField, numerator: Polynomial, denominator: Polynomial, traj: Trajectory, guard: float = 1e-12
) -> float:
    """Max of ``|Phi(x(t)) - Phi(x0)| / |Phi(x0)|`` for ``Phi = numerator/denominator``.

    The denominator counts as vanished once it is below ``guard`` times the
    sum of its absolute terms (beyond that its float value is cancellation noise).
    """
    num = compile_polynomial(numerator)
    den = compile_polynomial(denominator)
    den_scale = compile_polynomial(Polynomial({m: abs(c) for m, c in denominator.items()}))

    def phi(t: float, s) -> float:
        a = [abs(c) for c in s]
        d = den(*s)
        if abs(d) <= guard * den_scale(*a) or d == 0.0:
            raise DenominatorVanished(t)
        return num(*s) / d

    phi0 = phi(traj.times[0], traj.states[0])
    scale = abs(phi0) if phi0 else 1.0
    return max(abs(phi(t, s) - phi0) / scale for t, s in zip(traj.times, traj.states))


def lyapunov_max(
    F: NumericField,
    x0: Sequence[float],
    t_total: float,
    renorm_dt: float = RENORM_DT,
    perturbation: float = PERTURBATION,
    transient: float = TRANSIENT_FRACTION,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> float:
    """Largest Lyapunov exponent by two-trajectory renormalization.

    The first ``transient * t_total`` is integrated without measuring.
    Then a copy displaced by ``perturbation`` along (1, 1, 1) is carried in
    the same state vector, so both share every step, and the separation
    is reset to ``perturbation`` every ``renorm_dt``.
    """
    if t_total < 100 * renorm_dt:
        raise ValueError("t_total must be at least 100 renormalization intervals")
    t_skip = transient * t_total
    state = list(map(float, x0))
    if t_skip > 0:
        state = list(dopri5(F.rhs, state, t_skip, rtol, atol, t_eval=[t_skip]).final)
    d = perturbation / math.sqrt(3.0)
    pair = state + [c + d for c in state]
    n_intervals = round((t_total - t_skip) / renorm_dt)
    total = 0.0
    h = None
    for _ in range(n_intervals):
        traj = dopri5(F.rhs_pair, pair, renorm_dt, rtol, atol, t_eval=[renorm_dt], h0=h)
        h = traj.stats.last_step
        end = traj.final
        delta = [end[3 + i] - end[i] for i in range(3)]
        dist = math.sqrt(sum(c * c for c in delta))
        if dist == 0.0:
            raise ArithmeticError("trajectories collapsed onto each other")
        total += math.log(dist / perturbation)
        scale = perturbation / dist
        pair = list(end[:3]) + [end[i] + scale * delta[i] for i in range(3)]
    return total / (n_intervals * renorm_dt)


def volume_contraction_check(
    F: NumericField,
    div,
    x0: Sequence[float] = (1.0, 1.0, 1.0),
    n_samples: int = 20,
    interval: float = 0.1,
    t_span: float = 10.0,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> float:
    """Max deviation of ``log det(Phi(h)) / h`` from the constant divergence.

    ``Phi`` is the fundamental matrix of the variational equation over a
    short interval ``h`` started at points sampled along the orbit of ``x0``.
    """
    div = float(Fraction(div))
    base = integrate(F, x0, t_span, rtol, atol, n_samples=n_samples)
    eye = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
    worst = 0.0
    for s in base.states:
        end = dopri5(F.rhs_variational, list(s) + eye, interval, rtol, atol, t_eval=[interval]).final
        a, b, c, d, e, f, g, h, i = end[3:]
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        worst = max(worst, abs(math.log(det) / interval - div))
    return worst
