"""Chaotic orbit at (A, C, sigma, Ra) = (1/25, 1, 4, 250) from (1, 1, 1).

Writes the trajectory as CSV, its three coordinate-plane projections as SVG,
and prints the largest Lyapunov exponent.

    python scripts/reproduce_attractor.py --out attractor
"""

import argparse
from fractions import Fraction
from pathlib import Path

from darbouxkit.numerics import NumericField, integrate, lyapunov_max, write_csv, write_svg
from darbouxkit.vectorfield import GDParams, make_gd

PHYSICAL = GDParams(Fraction(1, 25), 1, 4, 250)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("attractor"))
    ap.add_argument("--t-end", type=float, default=500.0)
    ap.add_argument("--samples", type=int, default=20001)
    ap.add_argument("--no-lyapunov", action="store_true")
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    F = NumericField(make_gd(PHYSICAL))
    tr = integrate(F, (1.0, 1.0, 1.0), args.t_end, n_samples=args.samples)
    write_csv(tr, args.out / "orbit.csv")
    for plane in ("xy", "xz", "yz"):
        write_svg(tr, plane, args.out / f"orbit-{plane}.svg")
    bound = max(max(abs(v) for v in s) for s in tr.states)
    print(f"{len(tr)} samples over [0, {args.t_end:g}], max |state| = {bound:.4g}")
    for i, axis in enumerate("xyz"):
        col = tr.component(i)
        print(f"  {axis} in [{min(col):.4g}, {max(col):.4g}]")
    if not args.no_lyapunov:
        print(f"largest Lyapunov exponent: {lyapunov_max(F, (1, 1, 1), args.t_end):.6f}")
    print(f"wrote {args.out}/orbit.csv and orbit-{{xy,xz,yz}}.svg")


if __name__ == "__main__":
    main()
