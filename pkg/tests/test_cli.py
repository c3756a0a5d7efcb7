import io
import json
import subprocess
import sys

import numpy as np
import pytest

from dimcheck.cli import main
from oracles import C_STAR, K_STAR


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestCheck:
    def test_naive_income(self, corpus):
        code, out, _ = run("check", str(corpus / "eq2_income_naive.model"))
        assert code == 1
        assert out.count("AdditionMismatch") == 1

    def test_corrected(self, corpus):
        code, out, _ = run("check", str(corpus / "corrected_model.model"))
        assert code == 0
        assert "inferred a0 : QK^(2/3)*QP^(-2/3)*T^(-1)" in out

    def test_missing(self, tmp_path):
        code, _, err = run("check", str(tmp_path / "missing.model"))
        assert code == 2 and "cannot read" in err

    def test_parse_error_has_span(self, tmp_path):
        f = tmp_path / "bad.model"
        f.write_text("dims T\nvar x : T\neq e1: x = +\n")
        code, _, err = run("check", str(f))
        assert code == 2 and "bad.model:3:11" in err

    def test_unsolvable(self, tmp_path):
        f = tmp_path / "u.model"
        f.write_text("dims T\nvar x : infer\n")
        assert run("check", str(f))[0] == 2

    def test_json(self, corpus):
        code, out, _ = run("check", "--format", "json", str(corpus / "eq5_profit_naive.model"))
        doc = json.loads(out)
        assert code == 1
        bad = [e for e in doc["equations"] if e["verdict"] == "Inhomogeneous"]
        assert [e["name"] for e in bad] == ["eq5_profit"]

    def test_no_color_env(self, corpus, monkeypatch):
        monkeypatch.setenv("DIMCHECK_NO_COLOR", "1")
        _, out, _ = run("check", str(corpus / "eq2_income_naive.model"))
        assert "\x1b[" not in out


class TestSteady:
    def test_defaults(self):
        code, out, _ = run("steady", "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["k"] == pytest.approx(K_STAR, abs=1e-10)
        assert doc["c"] == pytest.approx(C_STAR, abs=1e-10)
        assert doc["trace"] == pytest.approx(0.05, abs=1e-12)
        assert doc["det"] < 0

    def test_text(self):
        code, out, _ = run("steady")
        assert code == 0 and out.startswith("k*")

    @pytest.mark.parametrize("flags", [["--rho", "0"], ["--alpha", "1"], ["--alpha", "abc"], ["--theta", "-1"]])
    def test_invalid(self, flags):
        assert run("steady", *flags)[0] == 2

    def test_alpha_near_one_ok(self):
        assert run("steady", "--alpha", "0.99")[0] == 0

    def test_rational_flags(self):
        a = run("steady", "--alpha", "1/3", "--format", "json")[1]
        b = run("steady", "--format", "json")[1]
        assert a == b


class TestSimulate:
    def test_constant(self, tmp_path):
        out_csv = tmp_path / "ss.csv"
        code, out, _ = run("simulate", "--k0", "steady", "--c0", "steady", "--t-max", "50", "--out", str(out_csv))
        assert code == 0
        data = np.loadtxt(out_csv, delimiter=",", skiprows=1)
        assert np.ptp(data[:, 1]) < 1e-10 and np.ptp(data[:, 2]) < 1e-10
        r1, r2 = (float(x) for x in out.split("R1")[1].replace("R2", "").split())
        assert r1 < 1e-10 and r2 < 1e-10

    def test_saddle(self, tmp_path):
        out_csv = tmp_path / "sp.csv"
        code, out, _ = run("simulate", "--saddle", "--k0", "2.6", "--out", str(out_csv))
        assert code == 0
        dist = float(out.split("terminal_distance")[1].split()[0])
        assert dist < 1e-4
        head = out_csv.read_text().splitlines()[0]
        assert head == "t,k,c,y,r,w,mu"

    def test_domain_exit(self):
        code, _, err = run("simulate", "--k0", "1", "--c0", "100")
        assert code == 3 and "domain exit" in err

    def test_missing_c0(self):
        assert run("simulate", "--k0", "1")[0] == 2

    def test_saddle_at_steady_k(self):
        assert run("simulate", "--saddle", "--k0", "steady")[0] == 2


class TestPhase:
    def test_counts(self, tmp_path):
        code, out, _ = run("phase", "--out", str(tmp_path))
        assert code == 0
        assert len((tmp_path / "field.csv").read_text().splitlines()) == 1601
        null_files = sorted(p.name for p in tmp_path.glob("nullcline_*.csv"))
        assert null_files == ["nullcline_cdot.csv", "nullcline_kdot.csv"]
        ki, ci = (float(x) for x in out.split("intersection")[1].split())
        assert ki == pytest.approx(K_STAR, abs=1e-10) and ci == pytest.approx(C_STAR, abs=1e-10)
        rows = (tmp_path / "nullcline_kdot.csv").read_text().splitlines()
        assert rows[0] == "k,c,which"
        pts = np.array([[float(v) for v in r.split(",")[:2]] for r in rows[1:]])
        assert np.min(np.hypot(pts[:, 0] - K_STAR, pts[:, 1] - C_STAR)) < 1e-10

    def test_zero_width(self, tmp_path):
        assert run("phase", "--k-min", "1", "--k-max", "1", "--out", str(tmp_path))[0] == 2


class TestWelfare:
    def _constant_csv(self, path, c=1.0):
        t = np.arange(20001) * 0.01
        with open(path, "w") as fh:
            fh.write("t,k,c\n")
            for ti in t:
                fh.write(f"{float(ti)!r},2.0,{c!r}\n")

    def test_constant(self, tmp_path):
        f = tmp_path / "c.csv"
        self._constant_csv(f)
        code, out, _ = run("welfare", "--traj", str(f), "--format", "json")
        assert code == 0 and json.loads(out)["u_p"] == pytest.approx(-20, abs=1e-6)

    def test_zero_consumption(self, tmp_path):
        f = tmp_path / "z.csv"
        self._constant_csv(f, c=0.0)
        assert run("welfare", "--traj", str(f))[0] == 3

    def test_malformed(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("t,k\n0,1\n")
        assert run("welfare", "--traj", str(f))[0] == 2

    def test_saddle_beats_frozen(self):
        _, out, _ = run("simulate", "--saddle", "--k0", "2.6", "--t-max", "200", "--out", "/dev/null")
        c0 = out.split("c0")[1].split()[0]
        s = json.loads(run("welfare", "--saddle", "--k0", "2.6", "--format", "json")[1])["u_p"]
        f = json.loads(run("welfare", "--frozen", "--k0", "2.6", "--c0", c0, "--format", "json")[1])["u_p"]
        assert s > f


def test_deterministic(tmp_path, corpus):
    a = run("check", "--format", "json", str(corpus / "corrected_model.model"))
    b = run("check", "--format", "json", str(corpus / "corrected_model.model"))
    assert a == b
    run("phase", "--out", str(tmp_path / "p1"))
    run("phase", "--out", str(tmp_path / "p2"))
    assert (tmp_path / "p1" / "field.csv").read_bytes() == (tmp_path / "p2" / "field.csv").read_bytes()


def test_module_entry_point(corpus):
    proc = subprocess.run(
        [sys.executable, "-m", "dimcheck", "check", str(corpus / "eq2_income_naive.model")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1 and "AdditionMismatch" in proc.stdout
