"""Dormand-Prince 5(4) integrator with PI step control and dense output."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12
DIVERGENCE_NORM = 1e12
MIN_STEP = 1e-14

# Butcher tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
A71, A73, A74, A75, A76 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference between the 5th and embedded 4th order weights
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40
# dense output
D1 = -12715105075 / 11282082432
D3 = 87487479700 / 32700410799
D4 = -10690763975 / 1880347072
D5 = 701980252875 / 199316789632
D6 = -1453857185 / 822651844
D7 = 69997945 / 29380423

# PI controller
SAFETY = 0.9
BETA = 0.04
EXPO1 = 0.2 - BETA * 0.75
FACC1 = 5.0  # a step shrinks by at most this factor
FACC2 = 0.1  # ... and grows by at most 1/FACC2

Rhs = Callable[[float, Sequence[float]], list[float]]


class Divergence(ArithmeticError):
    def __init__(self, t: float, state: Sequence[float]):
        super().__init__(f"state norm exceeded {DIVERGENCE_NORM:g} at t = {t!r}")
        self.t = t
        self.state = tuple(state)


class StepUnderflow(ArithmeticError):
    def __init__(self, t: float, h: float):
        super().__init__(f"step size {h!r} below {MIN_STEP:g} at t = {t!r}")
        self.t = t
        self.h = h


@dataclass(frozen=True)
class IntegratorStats:
    rtol: float
    atol: float
    n_accepted: int = 0
    n_rejected: int = 0
    n_evals: int = 0
    last_step: float = 0.0

    @property
    def n_steps(self) -> int:
        return self.n_accepted + self.n_rejected


@dataclass
class Trajectory:
    times: list[float] = field(default_factory=list)
    states: list[tuple[float, ...]] = field(default_factory=list)
    stats: IntegratorStats | None = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        for a, b in zip(self.times, self.times[1:]):
            if not b > a:
                raise ValueError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> tuple[float, ...]:
        return self.states[-1]

    def component(self, i: int) -> list[float]:
        return [s[i] for s in self.states]


def _norm(v: Sequence[float]) -> float:
    return math.sqrt(sum(c * c for c in v))


def _initial_step(f: Rhs, t: float, y: list[float], f0: list[float], rtol: float, atol: float, hmax: float) -> float:
    sk = [atol + rtol * abs(c) for c in y]
    dnf = sum((a / s) ** 2 for a, s in zip(f0, sk))
    dny = sum((a / s) ** 2 for a, s in zip(y, sk))
    h = 0.01 * math.sqrt(dny / dnf) if dnf > 1e-10 and dny > 1e-10 else 1e-6
    h = min(h, hmax)
    y1 = [a + h * b for a, b in zip(y, f0)]
    f1 = f(t + h, y1)
    der2 = math.sqrt(sum(((b - a) / s) ** 2 for a, b, s in zip(f0, f1, sk))) / h
    der12 = max(abs(der2), math.sqrt(dnf))
    h1 = (0.01 / der12) ** 0.2 if der12 > 1e-15 else max(1e-6, h * 1e-3)
    return min(100 * h, h1, hmax)


def dopri5(
    f: Rhs,
    y0: Sequence[float],
    t_end: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    t_eval: Sequence[float] | None = None,
    h0: float | None = None,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Integrate ``y' = f(t, y)`` from t = 0 to ``t_end``.

    With ``t_eval`` the trajectory holds dense-output samples at those
    times (sorted, within [0, t_end]); otherwise every accepted step.
    The final step is shortened to land exactly on ``t_end``.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not (rtol > 0 and atol > 0):
        raise ValueError("tolerances must be positive")
    n = len(y0)
    y = [float(c) for c in y0]
    t = 0.0
    times: list[float] = []
    states: list[tuple[float, ...]] = []
    if t_eval is not None:
        samples = sorted(float(s) for s in t_eval)
        if samples and (samples[0] < 0 or samples[-1] > t_end):
            raise ValueError("sample times must lie in [0, t_end]")
    else:
        samples = None
    si = 0
    if samples is None:
        times.append(0.0)
        states.append(tuple(y))
    else:
        while si < len(samples) and samples[si] <= 0.0:
            if not times:
                times.append(0.0)
                states.append(tuple(y))
            si += 1

    hmax = t_end
    k1 = f(t, y)
    evals = 1
    if h0 is None:
        h = _initial_step(f, t, y, k1, rtol, atol, hmax)
        evals += 1
    else:
        h = min(abs(h0), hmax)
    facold = 1e-4
    n_acc = n_rej = 0
    reject = False
    last = False
    while True:
        if n_acc + n_rej >= max_steps:
            raise RuntimeError(f"more than {max_steps} steps")
        if h < MIN_STEP:
            raise StepUnderflow(t, h)
        if t + 1.01 * h >= t_end:
            h = t_end - t
            last = True
        ya = [y[i] + h * A21 * k1[i] for i in range(n)]
        k2 = f(t + C2 * h, ya)
        ya = [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in range(n)]
        k3 = f(t + C3 * h, ya)
        ya = [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in range(n)]
        k4 = f(t + C4 * h, ya)
        ya = [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]) for i in range(n)]
        k5 = f(t + C5 * h, ya)
        ya = [y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]) for i in range(n)]
        k6 = f(t + h, ya)
        y1 = [y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]) for i in range(n)]
        k7 = f(t + h, y1)
        evals += 6

        err = 0.0
        for i in range(n):
            sk = atol + rtol * max(abs(y[i]), abs(y1[i]))
            e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            err += (e / sk) ** 2
        err = math.sqrt(err / n)
        if not math.isfinite(err):
            raise Divergence(t, y)

        fac11 = err**EXPO1 if err > 0 else 0.0
        fac = fac11 / facold**BETA
        fac = max(FACC2, min(FACC1, fac / SAFETY))
        hnew = h / fac
        if err <= 1.0:
            facold = max(err, 1e-4)
            n_acc += 1
            t_new = t + h if not last else t_end
            if samples is not None:
                if si < len(samples) and samples[si] <= t_new:
                    ydiff = [b - a for a, b in zip(y, y1)]
                    bspl = [h * k1[i] - ydiff[i] for i in range(n)]
                    r4 = [ydiff[i] - h * k7[i] - bspl[i] for i in range(n)]
                    r5 = [
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                        for i in range(n)
                    ]
                    while si < len(samples) and samples[si] <= t_new:
                        s = samples[si]
                        if s == t_new:
                            ys = tuple(y1)
                        else:
                            th = (s - t) / h
                            th1 = 1.0 - th
                            ys = tuple(
                                y[i] + th * (ydiff[i] + th1 * (bspl[i] + th * (r4[i] + th1 * r5[i]))) for i in range(n)
                            )
                        if not times or s > times[-1]:
                            times.append(s)
                            states.append(ys)
                        si += 1
            else:
                times.append(t_new)
                states.append(tuple(y1))
            k1 = k7
            y = y1
            t = t_new
            if _norm(y) > DIVERGENCE_NORM:
                raise Divergence(t, y)
            if last:
                break
            hnew = min(hnew, hmax)
            if reject:
                hnew = min(hnew, h)
            reject = False
        else:
            hnew = h / min(FACC1, fac11 / SAFETY)
            reject = True
            if n_acc >= 1:
                n_rej += 1
            last = False
        h = hnew
    stats = IntegratorStats(rtol, atol, n_acc, n_rej, evals, h)
    return Trajectory(times, states, stats)
