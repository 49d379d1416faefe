"""Bounded-degree searches on GD parameter tuples given on the command line.

For each tuple: Darboux polynomials with linear cofactor up to ``--degree``,
exponential factors with h = 1 up to degree 2, and candidate first integrals.

    python scripts/batch_search.py 1/25,1,4,250 1,1,2,3 1,0,1,0
"""

import argparse
import time
from fractions import Fraction

from darbouxkit.darboux import compose_first_integral, find_exponential_factors, search
from darbouxkit.vectorfield import GDParams, make_gd


def parse_tuple(text):
    parts = [Fraction(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected A,C,sigma,Ra (got {text!r})")
    return GDParams(*parts)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("params", nargs="+", type=parse_tuple, metavar="A,C,sigma,Ra")
    ap.add_argument("--degree", type=int, default=4)
    args = ap.parse_args()

    for p in args.params:
        F = make_gd(p)
        start = time.perf_counter()
        rep = search(F, args.degree, "linear")
        exp = find_exponential_factors(F, 2)
        certs = [c for c in rep.certificates if not c.f.is_constant()]
        fi = compose_first_integral(certs + exp.certificates, F) if certs else None
        print(f"{F.name}  [{time.perf_counter() - start:.1f} s]")
        print(f"  Darboux polynomials (deg <= {args.degree}): {len(certs)}")
        for c in certs:
            print(f"    {c.describe()}")
        print(f"  unresolved branches: {len(rep.unresolved)}, possibly rational: {len(rep.undetermined)}")
        print(f"  exponential factors (h = 1, deg <= 2): nullity {exp.branches[0].nullity}, "
              f"{len(exp.certificates)} certificates")
        print(f"  first integral: {fi.expression() if fi else 'none found'}")


if __name__ == "__main__":
    main()
