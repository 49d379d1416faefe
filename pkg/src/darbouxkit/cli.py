"""Command-line front end.

Exit codes: 0 success, 1 semantic negative (identity fails, nothing found,
condition violated), 2 usage or input errors, 3 internal limits (branch
budget, divergence, irrational radicals).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from .darboux import (
    BranchBudgetExceeded,
    Cofactor,
    DarbouxCertificate,
    compose_first_integral,
    find_exponential_factors,
    report_from_dict,
    report_to_dict,
    report_to_json,
    search,
    verify_certificate,
)
from .darboux.certificates import (
    MissingDenominatorCertificate,
    darboux_residual,
    exponential_residual,
    rational_first_integral_residual,
)
from .numerics import Divergence, NumericField, StepUnderflow, integrate, lyapunov_max, write_csv, write_svg
from .numerics.export import parse_plane
from .ratpoly import (
    Polynomial,
    PolynomialSyntaxError,
    UnboundIdentifier,
    ZeroDenominator,
    as_rational,
    format_polynomial,
    parse_polynomial,
)
from .transforms import ConditionViolated, IrrationalRadical, gd_change, gd_to_named, transport_certificate
from .vectorfield import GDParams, VectorField, make_gd

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class SystemFileError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class SystemFile:
    params: dict[str, Fraction]
    equations: dict[str, str]
    field: VectorField

    def gd_params(self) -> GDParams | None:
        """GD parameters if the file defines exactly the GD field with A, C, sigma, Ra bound."""
        try:
            p = GDParams(*(self.params[k] for k in ("A", "C", "sigma", "Ra")))
        except KeyError:
            return None
        return p if make_gd(p) == self.field else None


def parse_system(text: str, path: str = "<string>") -> SystemFile:
    """Parse the line-oriented system format (``vars:``, ``param``, ``dx/dy/dz``)."""
    params: dict[str, Fraction] = {}
    equations: dict[str, tuple[int, str]] = {}
    seen_vars = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_vars:
            if not line.startswith("vars:") or line[5:].split() != ["x", "y", "z"]:
                raise SystemFileError(path, lineno, "first declaration must be 'vars: x y z'")
            seen_vars = True
            continue
        if line.startswith("vars:"):
            raise SystemFileError(path, lineno, "duplicate vars declaration")
        if line.startswith("param "):
            body = line[6:]
            if "=" not in body:
                raise SystemFileError(path, lineno, "expected 'param NAME = RATIONAL'")
            name, value = (s.strip() for s in body.split("=", 1))
            if not name.isidentifier() or name in ("x", "y", "z"):
                raise SystemFileError(path, lineno, f"bad parameter name {name!r}")
            if name in params:
                raise SystemFileError(path, lineno, f"parameter {name} bound twice")
            try:
                params[name] = _parse_rational_literal(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise SystemFileError(path, lineno, str(exc)) from None
            continue
        head, sep, expr = line.partition("=")
        head = head.strip()
        if sep and head in ("dx", "dy", "dz"):
            if head in equations:
                raise SystemFileError(path, lineno, f"equation {head} given twice")
            equations[head] = (lineno, expr.strip())
            continue
        raise SystemFileError(path, lineno, f"unrecognized line {raw.strip()!r}")
    if not seen_vars:
        raise SystemFileError(path, 1, "missing 'vars: x y z'")
    comps = []
    for key in ("dx", "dy", "dz"):
        if key not in equations:
            raise SystemFileError(path, 0, f"missing equation {key}")
        lineno, expr = equations[key]
        try:
            comps.append(parse_polynomial(expr, params))
        except PolynomialSyntaxError as exc:
            raise SystemFileError(path, lineno, f"{key}: {exc}") from None
        except UnboundIdentifier as exc:
            raise SystemFileError(path, lineno, f"{key}: unbound identifier {exc.args[0]}") from None
        except ZeroDenominator as exc:
            raise SystemFileError(path, lineno, f"{key}: {exc}") from None
    name = Path(path).stem if path != "<string>" else ""
    return SystemFile(params, {k: v[1] for k, v in equations.items()}, VectorField(*comps, name=name))


def _parse_rational_literal(text: str) -> Fraction:
    neg = text.startswith("-")
    body = text[1:].strip() if neg else text
    value = as_rational(body)
    return -value if neg else value


def load_system(path: str | Path) -> SystemFile:
    p = Path(path)
    return parse_system(p.read_text(), str(p))


def format_system(field: VectorField, params: dict[str, Fraction] | None = None, comment: str = "") -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append("vars: x y z")
    for k, v in (params or {}).items():
        lines.append(f"param {k} = {v}")
    for key, comp in zip(("dx", "dy", "dz"), field.components):
        lines.append(f"{key} = {format_polynomial(comp)}")
    return "\n".join(lines) + "\n"


# -- argument helpers --------------------------------------------------------

def _point(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    try:
        return tuple(_parse_rational_literal(s) for s in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return _parse_rational_literal(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _polynomial(text: str) -> Polynomial:
    try:
        return parse_polynomial(text)
    except (PolynomialSyntaxError, UnboundIdentifier, ZeroDenominator) as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: {exc}") from None


def _cofactor(text: str) -> Cofactor:
    p = _polynomial(text)
    try:
        return Cofactor.from_polynomial(p)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write_json(args, data: str) -> None:
    if args.json == "-":
        args.json_stream.write(data)
    else:
        Path(args.json).write_text(data)


# -- subcommands -------------------------------------------------------------

def _print_report(report, out: TextIO) -> None:
    out.write(f"system: {report.system}\n")
    out.write(f"mode: {report.mode}, degree bound: {report.degree_bound}\n")
    out.write(f"certificates: {len(report.certificates)}\n")
    for cert in report.certificates:
        flag = "verified" if cert.verified else "UNVERIFIED"
        out.write(f"  {cert.describe()}  [{flag}]\n")
    out.write(f"branches: {len(report.branches)}\n")
    if report.unresolved:
        out.write(f"unresolved: {len(report.unresolved)} ({len(report.undetermined)} with possible rational solutions)\n")
        for u in report.unresolved:
            out.write(f"  {u}\n")
    for note in report.notes:
        out.write(f"note: {note}\n")
    if report.partial:
        out.write("partial: search stopped at the branch budget\n")


def cmd_analyze(args, out: TextIO, err: TextIO) -> int:
    sf = load_system(args.system)
    try:
        report = search(sf.field, args.max_degree, args.cofactor, args.max_branches)
    except BranchBudgetExceeded as exc:
        report = exc.report
        _print_report(report, out)
        if args.json:
            _write_json(args, report_to_json(report))
        err.write(f"error: {exc}\n")
        return EXIT_LIMIT
    _print_report(report, out)
    if args.json:
        _write_json(args, report_to_json(report))
    return EXIT_OK if report.certificates else EXIT_NEGATIVE


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    field = load_system(args.system).field
    if args.poly is not None:
        if args.cofactor is None:
            err.write("error: --poly needs --cofactor\n")
            return EXIT_USAGE
        cert = DarbouxCertificate.polynomial(args.poly, args.cofactor)
        residual = darboux_residual(field, args.poly, args.cofactor)
    elif args.exp is not None:
        if args.cofactor is None:
            err.write("error: --exp needs --cofactor (the exponential cofactor L)\n")
            return EXIT_USAGE
        h = args.denominator or Polynomial.constant(1)
        cert = DarbouxCertificate.exponential(args.exp, h, args.cofactor)
        dens = []
        if not h.is_constant():
            if args.denominator_cofactor is None:
                err.write("error: a nonconstant --denominator needs --denominator-cofactor\n")
                return EXIT_USAGE
            hc = DarbouxCertificate.polynomial(h, args.denominator_cofactor)
            if not verify_certificate(field, hc):
                out.write(f"denominator certificate fails: residual {darboux_residual(field, h, args.denominator_cofactor)}\n")
                return EXIT_NEGATIVE
            dens = [DarbouxCertificate("polynomial", h, hc.cofactor, verified=True)]
        try:
            ok = verify_certificate(field, cert, dens)
        except MissingDenominatorCertificate as exc:
            err.write(f"error: {exc}\n")
            return EXIT_USAGE
        K_h = dens[0].cofactor if dens else Cofactor()
        residual = exponential_residual(field, args.exp, h, args.cofactor, K_h)
        out.write(f"{cert.describe()}: {'holds' if ok else 'fails'}\n")
        if not ok:
            out.write(f"residual: {residual}\n")
        return EXIT_OK if ok else EXIT_NEGATIVE
    elif args.rational is not None:
        num, den = args.rational
        if den.is_zero():
            err.write("error: denominator polynomial is zero\n")
            return EXIT_USAGE
        residual = rational_first_integral_residual(field, num, den)
        ok = residual.is_zero()
        out.write(f"({num})/({den}) is {'a' if ok else 'not a'} rational first integral\n")
        if not ok:
            out.write(f"residual: {residual}\n")
        return EXIT_OK if ok else EXIT_NEGATIVE
    else:
        err.write("error: give one of --poly, --exp, --rational\n")
        return EXIT_USAGE
    ok = verify_certificate(field, cert)
    out.write(f"{cert.describe()}: {'holds' if ok else 'fails'}\n")
    if not ok:
        out.write(f"residual: {residual}\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_expfactor(args, out: TextIO, err: TextIO) -> int:
    field = load_system(args.system).field
    h_cert = None
    if args.denominator is not None:
        if args.denominator_cofactor is None:
            err.write("error: --denominator needs --denominator-cofactor\n")
            return EXIT_USAGE
        h_cert = DarbouxCertificate.polynomial(args.denominator, args.denominator_cofactor)
        if not verify_certificate(field, h_cert):
            out.write(f"denominator {args.denominator} is not a Darboux polynomial with that cofactor\n")
            return EXIT_NEGATIVE
        h_cert = DarbouxCertificate("polynomial", h_cert.f, h_cert.cofactor, verified=True)
    report = find_exponential_factors(field, args.max_degree, h_cert)
    out.write(f"nullity: {report.branches[0].nullity}\n")
    _print_report(report, out)
    if args.json:
        _write_json(args, report_to_json(report))
    return EXIT_OK if report.certificates else EXIT_NEGATIVE


def _parse_cert_spec(text: str) -> DarbouxCertificate:
    """``f;K`` for a polynomial certificate, ``exp:g;h;L`` for an exponential one."""
    if text.startswith("exp:"):
        parts = text[4:].split(";")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected exp:g;h;L, got {text!r}")
        return DarbouxCertificate.exponential(_polynomial(parts[0]), _polynomial(parts[1]), _cofactor(parts[2]))
    parts = text.split(";")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected f;K, got {text!r}")
    return DarbouxCertificate.polynomial(_polynomial(parts[0]), _cofactor(parts[1]))


def cmd_compose(args, out: TextIO, err: TextIO) -> int:
    field = load_system(args.system).field
    certs = list(args.cert or [])
    for path in args.from_json or []:
        certs.extend(report_from_dict(json.loads(Path(path).read_text())).certificates)
    if not certs:
        err.write("error: no certificates given (use --cert or --from-json)\n")
        return EXIT_USAGE
    polys = [c for c in certs if c.kind == "polynomial"]
    checked = []
    for c in certs:
        try:
            ok = verify_certificate(field, c, [DarbouxCertificate("polynomial", p.f, p.cofactor, verified=True) for p in polys if verify_certificate(field, p)])
        except MissingDenominatorCertificate as exc:
            err.write(f"error: {exc}\n")
            return EXIT_NEGATIVE
        if not ok:
            out.write(f"certificate fails: {c.describe()}\n")
            return EXIT_NEGATIVE
        checked.append(DarbouxCertificate(c.kind, c.invariant, c.cofactor, verified=True))
    fi = compose_first_integral(checked, field)
    if fi is None:
        out.write("no cofactor relation: no Darboux first integral from these certificates\n")
        return EXIT_NEGATIVE
    out.write(f"exponents: {list(fi.exponents)} (kernel dimension {fi.kernel_dimension})\n")
    out.write(f"first integral: {fi.expression()}\n")
    status = fi.verify(field)
    if status is not None:
        out.write(f"exact check X(G) = 0: {'holds' if status else 'fails'}\n")
        if not status:
            return EXIT_NEGATIVE
    return EXIT_OK


def _numeric(sf: SystemFile) -> NumericField:
    return NumericField(sf.field, dict(sf.params))


def cmd_simulate(args, out: TextIO, err: TextIO) -> int:
    sf = load_system(args.system)
    F = _numeric(sf)
    x0 = [float(c) for c in args.x0]
    try:
        traj = integrate(F, x0, args.t_end, args.rtol, args.atol, n_samples=args.samples)
    except (Divergence, StepUnderflow) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_LIMIT
    if args.output:
        write_csv(traj, args.output)
    for plane, path in args.svg or []:
        write_svg(traj, plane, path)
    s = traj.stats
    out.write(
        f"integrated to t = {traj.times[-1]!r}: {len(traj)} samples, {s.n_accepted} steps, "
        f"{s.n_rejected} rejected, {s.n_evals} evaluations (rtol {s.rtol:g}, atol {s.atol:g})\n"
    )
    out.write("final state: " + ", ".join(repr(v) for v in traj.final) + "\n")
    return EXIT_OK


def cmd_lyapunov(args, out: TextIO, err: TextIO) -> int:
    sf = load_system(args.system)
    F = _numeric(sf)
    try:
        lam = lyapunov_max(F, [float(c) for c in args.x0], args.t_end, args.renorm_dt, rtol=args.rtol, atol=args.atol)
    except (Divergence, StepUnderflow) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_LIMIT
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    out.write(f"largest Lyapunov exponent: {lam!r}\n")
    return EXIT_OK


def cmd_transform(args, out: TextIO, err: TextIO) -> int:
    sf = load_system(args.system)
    params = sf.gd_params()
    if params is None:
        err.write("error: transform needs a GD system file binding A, C, sigma, Ra\n")
        return EXIT_USAGE
    try:
        image, derived = gd_to_named(params, args.target, args.alpha)
        T, _ = gd_change(params, args.target, args.alpha)
    except ConditionViolated as exc:
        out.write(f"condition violated: {exc}\n")
        return EXIT_NEGATIVE
    except IrrationalRadical as exc:
        out.write(f"outside exact arithmetic: {exc}\n")
        return EXIT_LIMIT
    names = {"rabinovich": ("h", "v1", "v2", "v3"), "forced_damped": ("a", "b", "c"), "d2": ("a", "b")}
    key = args.target.replace("-", "_")
    out.write(f"target: {args.target} with " + ", ".join(f"{n} = {v}" for n, v in zip(names[key], derived)) + "\n")
    out.write(f"change: old = M*new + b with M = {[[str(c) for c in row] for row in T.matrix]}, "
              f"b = {[str(c) for c in T.shift]}, old time = {T.time_scale}*new time\n")
    text = format_system(image, dict(zip(names[key], derived)), comment=f"{args.target} form of {sf.field.name or 'GD'}")
    # parameters are already substituted; keep them as comments for reference
    text = "\n".join(("# " + ln) if ln.startswith("param ") else ln for ln in text.splitlines()) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_report(args, out: TextIO, err: TextIO) -> int:
    """All searches at the given bound plus exponential factors and composition."""
    field = load_system(args.system).field
    sections = {}
    certs = []
    for mode in ("zero", "constant", "linear"):
        try:
            rep = search(field, args.max_degree, mode, args.max_branches)
        except BranchBudgetExceeded as exc:
            rep = exc.report
        sections[mode] = rep
        for c in rep.certificates:
            if all(c.invariant != d.invariant or c.cofactor != d.cofactor for d in certs):
                certs.append(c)
        out.write(f"[{mode}] {len(rep.certificates)} certificates, {len(rep.unresolved)} unresolved"
                  + (" (partial)" if rep.partial else "") + "\n")
        for c in rep.certificates:
            out.write(f"  {c.describe()}\n")
    exp = find_exponential_factors(field, min(args.max_degree, args.exp_degree))
    sections["exponential"] = exp
    out.write(f"[exponential, h = 1] nullity {exp.branches[0].nullity}, {len(exp.certificates)} certificates\n")
    for c in exp.certificates:
        out.write(f"  {c.describe()}\n")
    fi = compose_first_integral(certs + exp.certificates, field) if certs or exp.certificates else None
    out.write(f"[compose] {fi.expression() if fi else 'no cofactor relation'}\n")
    doc = {k: report_to_dict(v) for k, v in sections.items()}
    doc["composition"] = None if fi is None else {"exponents": list(fi.exponents), "expression": fi.expression()}
    if args.json:
        _write_json(args, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="darbouxkit", description="Darboux integrability analysis of polynomial vector fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_search_flags(p, default_degree=4):
        p.add_argument("--max-degree", type=int, default=default_degree)
        p.add_argument("--max-branches", type=int, default=512)
        p.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")

    p = sub.add_parser("analyze", help="search for Darboux polynomials")
    p.add_argument("system")
    add_search_flags(p)
    p.add_argument("--cofactor", choices=("zero", "constant", "linear"), default="linear")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check a certificate exactly")
    p.add_argument("system")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--poly", type=_polynomial, help="Darboux polynomial f")
    g.add_argument("--exp", type=_polynomial, metavar="G", help="numerator g of exp(g/h)")
    g.add_argument("--rational", type=_polynomial, nargs=2, metavar=("NUM", "DEN"), help="rational first integral")
    p.add_argument("--cofactor", type=_cofactor, help="cofactor K (or L for --exp)")
    p.add_argument("--denominator", type=_polynomial, metavar="H")
    p.add_argument("--denominator-cofactor", type=_cofactor, metavar="K_H")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expfactor", help="search for exponential factors exp(g/h)")
    p.add_argument("system")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--denominator", type=_polynomial, metavar="H")
    p.add_argument("--denominator-cofactor", type=_cofactor, metavar="K_H")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_expfactor)

    p = sub.add_parser("compose", help="combine certificates into a Darboux first integral")
    p.add_argument("system")
    p.add_argument("--cert", type=_parse_cert_spec, action="append", metavar="'f;K' | 'exp:g;h;L'")
    p.add_argument("--from-json", action="append", metavar="PATH")
    p.set_defaults(func=cmd_compose)

    def add_numeric_flags(p):
        p.add_argument("--x0", type=_point, required=True, metavar="a,b,c")
        p.add_argument("--t-end", type=_positive_float, required=True)
        p.add_argument("--rtol", type=_positive_float, default=1e-9)
        p.add_argument("--atol", type=_positive_float, default=1e-12)

    p = sub.add_parser("simulate", help="integrate a trajectory")
    p.add_argument("system")
    add_numeric_flags(p)
    p.add_argument("--samples", type=int, default=None, help="equally spaced output samples (default: every step)")
    p.add_argument("--output", metavar="CSV")
    p.add_argument("--svg", nargs=2, action="append", metavar=("PLANE", "PATH"), type=str)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lyapunov", help="largest Lyapunov exponent")
    p.add_argument("system")
    add_numeric_flags(p)
    p.add_argument("--renorm-dt", type=_positive_float, default=0.5)
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("transform", help="push GD forward to a named system")
    p.add_argument("system")
    p.add_argument("--target", choices=("rabinovich", "forced-damped", "d2"), required=True)
    p.add_argument("--alpha", type=_rational, default=Fraction(1))
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("report", help="all searches, exponential factors and composition")
    p.add_argument("system")
    add_search_flags(p)
    p.add_argument("--exp-degree", type=int, default=2)
    p.set_defaults(func=cmd_report)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    old_err = sys.stderr
    sys.stderr = err
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    finally:
        sys.stderr = old_err
    if getattr(args, "svg", None):
        for plane, _ in args.svg:
            try:
                parse_plane(plane)
            except ValueError as exc:
                err.write(f"error: --svg: {exc}\n")
                return EXIT_USAGE
    for flag in ("max_degree", "max_branches"):
        if getattr(args, flag, 1) < 1:
            err.write(f"error: --{flag.replace('_', '-')} must be >= 1\n")
            return EXIT_USAGE
    # with --json - stdout carries only the JSON document; the summary moves to stderr
    args.json_stream = out
    text = err if getattr(args, "json", None) == "-" else out
    try:
        return args.func(args, text, err)
    except SystemFileError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
