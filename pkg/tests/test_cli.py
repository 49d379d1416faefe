import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest
from conftest import SYSTEMS

from darbouxkit.cli import SystemFileError, format_system, load_system, parse_system, run
from darbouxkit.vectorfield import GDParams, make_gd, make_named


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def sysfile(name):
    return SYSTEMS / f"{name}.vf"


class TestSystemFiles:
    @pytest.mark.parametrize(
        "name, params",
        [
            ("gd-physical", ("1/25", 1, 4, 250)),
            ("gd-remark1a", (1, 1, 1, 0)),
            ("gd-remark1b", (1, 0, 1, 3)),
            ("gd-remark1c", (1, 0, 1, 0)),
            ("gd-invariant-plane", (1, 1, 2, 3)),
        ],
    )
    def test_gd_fixtures(self, name, params):
        sf = load_system(sysfile(name))
        assert sf.field == make_gd(GDParams(*params))
        assert sf.gd_params() == GDParams(*params)

    @pytest.mark.parametrize(
        "name, args",
        [("rabinovich", (1, 3, 1, 1)), ("forced-damped", (Fraction(1, 2), 4, Fraction(-1, 2))), ("d2", (5, 1))],
    )
    def test_named_fixtures(self, name, args):
        sf = load_system(sysfile(name))
        assert sf.field == make_named(name, *args)
        assert sf.gd_params() is None

    def test_round_trip(self):
        F = make_gd(GDParams("1/25", 1, 4, 250))
        assert parse_system(format_system(F)).field == F

    @pytest.mark.parametrize(
        "text, line",
        [
            ("dx = x\n", 1),
            ("vars: x y\ndx = x\ndy = y\ndz = z\n", 1),
            ("vars: x y z\nvars: x y z\n", 2),
            ("vars: x y z\nparam A = 1\nparam A = 2\n", 3),
            ("vars: x y z\nparam x = 1\n", 2),
            ("vars: x y z\nparam A = 1/0\n", 2),
            ("vars: x y z\ndx = x\ndx = y\n", 3),
            ("vars: x y z\ndx = x\ndy = y\ndz = q*z\n", 4),
            ("vars: x y z\ndx = x +\ndy = y\ndz = z\n", 2),
            ("vars: x y z\nhello\n", 2),
        ],
    )
    def test_errors_carry_line(self, text, line):
        with pytest.raises(SystemFileError) as info:
            parse_system(text, "f.vf")
        assert info.value.line == line

    def test_missing_equation(self):
        with pytest.raises(SystemFileError):
            parse_system("vars: x y z\ndx = 1\ndy = 2\n")

    def test_comments_and_decimal_params(self):
        sf = parse_system("# c\n\nvars: x y z  # vars\nparam A = 0.04\nparam B = -3/2\ndx = A*x\ndy = B\ndz = 0\n")
        assert sf.params == {"A": Fraction(1, 25), "B": Fraction(-3, 2)}


class TestAnalyze:
    def test_constant_cofactor_surface(self):
        code, out, _ = cli("analyze", sysfile("gd-remark1a"), "--max-degree", 2, "--cofactor", "constant")
        assert code == 0
        assert "f = y^2 + z^2, K = -2  [verified]" in out

    def test_nothing_found_is_negative(self):
        code, out, _ = cli("analyze", sysfile("gd-physical"), "--max-degree", 2)
        assert code == 1 and "certificates: 0" in out

    def test_invariant_plane(self):
        code, out, _ = cli("analyze", sysfile("gd-invariant-plane"), "--max-degree", 2)
        assert code == 0 and "f = x - z, K = -y - 2" in out

    def test_json_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        cli("analyze", sysfile("gd-remark1c"), "--max-degree", 2, "--json", a)
        cli("analyze", sysfile("gd-remark1c"), "--max-degree", 2, "--json", b)
        assert a.read_bytes() == b.read_bytes()
        data = json.loads(a.read_text())
        assert data["mode"] == "linear" and all(c["verified"] for c in data["certificates"])

    def test_budget(self):
        code, out, err = cli("analyze", sysfile("gd-remark1c"), "--max-degree", 2, "--max-branches", 1)
        assert code == 3 and "partial" in out

    def test_usage_errors(self):
        code, _, err = cli("analyze", sysfile("gd-physical"), "--cofactor", "cubic")
        assert code == 2 and "--cofactor" in err and "usage: darbouxkit analyze" in err
        code, _, err = cli("analyze", sysfile("gd-physical"), "--max-degree", 0)
        assert code == 2 and "--max-degree" in err
        code, _, err = cli("frobnicate")
        assert code == 2
        code, _, err = cli("analyze", "/nonexistent/file.vf")
        assert code == 2

    def test_bad_system_file(self, tmp_path):
        p = tmp_path / "bad.vf"
        p.write_text("vars: x y z\ndx = k*x\ndy = 0\ndz = 0\n")
        code, _, err = cli("analyze", p)
        assert code == 2 and "bad.vf:2" in err and "k" in err


class TestVerify:
    def test_fails_on_physical(self):
        code, out, _ = cli("verify", sysfile("gd-physical"), "--poly", "y^2+z^2", "--cofactor", "-2")
        assert code == 1 and "residual: 500*y" in out

    def test_holds(self):
        code, out, _ = cli("verify", sysfile("gd-remark1a"), "--poly", "y^2+z^2", "--cofactor", "-2")
        assert code == 0 and "holds" in out

    def test_rational(self):
        assert cli("verify", sysfile("gd-remark1c"), "--rational", "y^2+z^2", "x^2-z^2")[0] == 0
        assert cli("verify", sysfile("gd-remark1b"), "--rational", "y^2+z^2", "x^2-z^2")[0] == 1

    def test_exponential(self):
        code, out, _ = cli("verify", sysfile("gd-remark1c"), "--exp", "x", "--cofactor", "1")
        assert code == 1
        code, _, err = cli("verify", sysfile("gd-remark1c"), "--exp", "x", "--denominator", "y", "--cofactor", "0")
        assert code == 2

    def test_usage(self):
        code, _, err = cli("verify", sysfile("gd-remark1a"), "--poly", "y^2+", "--cofactor", "-2")
        assert code == 2 and "--poly" in err
        assert cli("verify", sysfile("gd-remark1a"), "--poly", "y")[0] == 2
        code, _, err = cli("verify", sysfile("gd-remark1a"), "--poly", "y", "--cofactor", "x^2")
        assert code == 2 and "--cofactor" in err


class TestOtherCommands:
    def test_expfactor(self):
        code, out, _ = cli("expfactor", sysfile("gd-invariant-plane"), "--max-degree", 2)
        assert code == 1 and "nullity: 1" in out

    def test_json_on_stdout_is_pure(self):
        code, out, err = cli("expfactor", sysfile("gd-invariant-plane"), "--max-degree", 2, "--json", "-")
        assert code == 1 and json.loads(out)["certificates"] == []
        assert "nullity: 1" in err

    def test_compose_from_json(self, tmp_path):
        rep = tmp_path / "r.json"
        cli("analyze", sysfile("gd-remark1c"), "--max-degree", 2, "--cofactor", "constant", "--json", rep)
        code, out, _ = cli("compose", sysfile("gd-remark1c"), "--from-json", rep)
        assert code == 0 and "exact check X(G) = 0: holds" in out

    def test_compose_rejects_bad_certificate(self):
        code, out, _ = cli("compose", sysfile("gd-physical"), "--cert", "y^2+z^2;-2", "--cert", "x^2-z^2;-2")
        assert code == 1 and "fails" in out

    def test_compose_no_relation(self):
        code, out, _ = cli("compose", sysfile("gd-remark1a"), "--cert", "y^2+z^2;-2")
        assert code == 1

    def test_transform(self, tmp_path):
        out_path = tmp_path / "fd.vf"
        code, out, _ = cli("transform", sysfile("gd-remark1b"), "--target", "forced-damped", "--output", out_path)
        assert code == 0
        sf = load_system(out_path)
        assert sf.field == make_named("forced_damped", Fraction(1, 3), 1, Fraction(-1, 3))

    def test_transform_condition(self):
        assert cli("transform", sysfile("gd-physical"), "--target", "d2")[0] == 1
        assert cli("transform", sysfile("rabinovich"), "--target", "d2")[0] == 2
        assert cli("transform", sysfile("gd-physical"), "--target", "sphere")[0] == 2

    def test_lyapunov(self):
        code, out, _ = cli("lyapunov", sysfile("gd-remark1c"), "--x0", "0.01,0.01,0.01", "--t-end", 60)
        assert code == 0
        assert float(out.split(":")[1]) == pytest.approx(-1.0, abs=0.15)

    def test_report(self, tmp_path):
        path = tmp_path / "rep.json"
        code, out, _ = cli("report", sysfile("gd-remark1c"), "--max-degree", 2, "--json", path)
        assert code == 0
        data = json.loads(path.read_text())
        assert set(data) == {"zero", "constant", "linear", "exponential", "composition"}
        assert data["composition"] is not None


class TestSimulate:
    def test_axis_csv(self, tmp_path):
        path = tmp_path / "out.csv"
        code, _, _ = cli("simulate", sysfile("gd-physical"), "--x0", "0,1,0", "--t-end", 10, "--output", path)
        assert code == 0
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "x", "y", "z"]
        err = max(abs(float(r[2]) - (250 + (1 - 250) * math.exp(-float(r[0])))) for r in rows[1:])
        assert err < 1e-8

    def test_svg_and_samples(self, tmp_path):
        svg = tmp_path / "xz.svg"
        code, out, _ = cli("simulate", sysfile("gd-physical"), "--x0", "1,1,1", "--t-end", 5, "--samples", 50,
                           "--svg", "xz", svg)
        assert code == 0 and svg.read_text().startswith("<?xml") and "50 samples" in out

    def test_bad_plane(self, tmp_path):
        code, _, err = cli("simulate", sysfile("gd-physical"), "--x0", "1,1,1", "--t-end", 5, "--svg", "xw",
                           tmp_path / "a.svg")
        assert code == 2 and "--svg" in err

    def test_bad_x0(self):
        code, _, err = cli("simulate", sysfile("gd-physical"), "--x0", "1,1", "--t-end", 5)
        assert code == 2 and "--x0" in err and "usage: darbouxkit simulate" in err

    def test_divergence(self, tmp_path):
        p = tmp_path / "blow.vf"
        p.write_text("vars: x y z\ndx = x^2\ndy = 0\ndz = 0\n")
        code, _, err = cli("simulate", p, "--x0", "1,0,0", "--t-end", 2)
        assert code == 3 and "exceeded" in err

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cli("simulate", sysfile("gd-physical"), "--x0", "1,1,1", "--t-end", 3, "--output", a)
        cli("simulate", sysfile("gd-physical"), "--x0", "1,1,1", "--t-end", 3, "--output", b)
        assert a.read_bytes() == b.read_bytes()


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "darbouxkit.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "analyze" in proc.stdout
