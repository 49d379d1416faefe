"""Reference largest Lyapunov exponent from scipy's DOP853 (independent of the package integrator).

Same protocol as ``lyapunov_max``: 10% transient, two trajectories displaced
by 1e-8 along (1, 1, 1), renormalized every 0.5 time units.

    python scripts/lyapunov_oracle.py --t-total 500
"""

import argparse
import math

import numpy as np
from scipy.integrate import solve_ivp


def gd_rhs(A, C, sigma, Ra):
    def rhs(t, s):
        out = np.empty_like(s)
        for k in range(0, len(s), 3):
            x, y, z = s[k], s[k + 1], s[k + 2]
            out[k] = A * y * z + C * z - sigma * x
            out[k + 1] = -x * z + Ra - y
            out[k + 2] = -z + x * y
        return out

    return rhs


def benettin(rhs, x0, t_total, renorm_dt=0.5, d0=1e-8, transient=0.1, rtol=1e-10, atol=1e-12):
    t_skip = transient * t_total
    s = solve_ivp(rhs, (0, t_skip), x0, method="DOP853", rtol=rtol, atol=atol).y[:, -1]
    pair = np.concatenate([s, s + d0 / math.sqrt(3)])
    n = round((t_total - t_skip) / renorm_dt)
    total = 0.0
    for _ in range(n):
        end = solve_ivp(rhs, (0, renorm_dt), pair, method="DOP853", rtol=rtol, atol=atol).y[:, -1]
        delta = end[3:] - end[:3]
        dist = float(np.linalg.norm(delta))
        total += math.log(dist / d0)
        pair = np.concatenate([end[:3], end[:3] + delta * (d0 / dist)])
    return total / (n * renorm_dt)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-total", type=float, default=500.0)
    ap.add_argument("--params", default="0.04,1,4,250", help="A,C,sigma,Ra")
    ap.add_argument("--x0", default="1,1,1")
    args = ap.parse_args()
    params = [float(v) for v in args.params.split(",")]
    x0 = [float(v) for v in args.x0.split(",")]
    print(repr(benettin(gd_rhs(*params), x0, args.t_total)))


if __name__ == "__main__":
    main()
