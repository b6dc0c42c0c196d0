import csv
import json
import subprocess
import sys

import pytest

from surjunct.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_text(self, capsys):
        code, out, _ = run(["analyze", "1+u1+u2"], capsys)
        assert code == 0
        assert "verdict: Surjunctive by Theorem3" in out

    def test_json(self, capsys):
        code, out, _ = run(["analyze", "3-2*u1", "--json"], capsys)
        d = json.loads(out)
        assert code == 0
        assert d["schema"] == "1"
        assert d["verdict"]["theorem"] == "Theorem2"
        assert d["properties"]["expansive"]["certainty"] == "Exact"

    def test_json_byte_identical(self, capsys):
        _, a, _ = run(["analyze", "3+u1+u2", "--json"], capsys)
        _, b, _ = run(["analyze", "3+u1+u2", "--json"], capsys)
        assert a == b

    def test_unknown_still_exit_zero(self, capsys):
        code, out, _ = run(["analyze", "1+u1"], capsys)
        assert code == 0 and "verdict: Unknown" in out

    def test_zero_polynomial(self, capsys):
        code, _, err = run(["analyze", "0"], capsys)
        assert code == 2 and "zero polynomial" in err

    def test_parse_error(self, capsys):
        code, _, err = run(["analyze", "1+*u1"], capsys)
        assert code == 2 and "position 2" in err

    def test_strict(self, capsys):
        code, _, _ = run(["analyze", "1+u1+u2", "--strict"], capsys)
        assert code == 0

    def test_bad_config(self, capsys):
        code, _, _ = run(["analyze", "1+u1", "--grid", "0"], capsys)
        assert code == 2

    def test_declared_dim(self, capsys):
        code, out, _ = run(["analyze", "3-2*u1", "--dim", "2", "--json"], capsys)
        assert code == 0 and json.loads(out)["dim"] == 2


class TestMahler:
    def test_log3(self, capsys):
        code, out, _ = run(["mahler", "3-2*u1"], capsys)
        assert code == 0
        assert "log_mahler = 1.0986122887" in out

    def test_json_and_csv(self, capsys, tmp_path):
        path = tmp_path / "g.csv"
        code, out, _ = run(
            ["mahler", "1+u1+u2", "--json", "--tol", "1e-5", "--grid", "8", "--csv", str(path)], capsys
        )
        d = json.loads(out)
        assert code == 0
        assert abs(d["log_mahler"] - 0.3230659) < 1e-4
        with open(path) as fh:
            assert len(list(csv.reader(fh))) == 1 + 64


class TestPeriodic:
    def test_lattices(self, capsys):
        code, out, _ = run(
            ["periodic", "1+u1+u2", "--mod", "2", "--lattice", "3,3", "--lattice", "4,4"], capsys
        )
        assert code == 0
        assert out.splitlines() == [
            "lattice 3,3: kernel_dim 2, count 4",
            "lattice 4,4: kernel_dim 0, count 1",
        ]

    def test_json_csv(self, capsys, tmp_path):
        path = tmp_path / "p.csv"
        code, out, _ = run(
            ["periodic", "1+u1+u2", "--mod", "2", "--lattice", "6,6", "--json", "--csv", str(path)], capsys
        )
        assert json.loads(out) == {"periods": [6, 6], "kernel_dim": 4, "count": 16}
        assert path.read_text().splitlines()[1] == "6,6,4,16"

    def test_not_prime(self, capsys):
        code, _, err = run(["periodic", "1+u1+u2", "--mod", "4", "--lattice", "3,3"], capsys)
        assert code == 2 and "not prime" in err

    def test_budget(self, capsys):
        code, _, _ = run(["periodic", "1+u1+u2", "--mod", "2", "--lattice", "4096,4096"], capsys)
        assert code == 4

    def test_bad_lattice(self, capsys):
        with pytest.raises(SystemExit):
            main(["periodic", "1+u1", "--mod", "2", "--lattice", "a,b"])


def test_sigma_demo(capsys):
    code, out, _ = run(["sigma-demo"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "injective: PASS, surjective: FAIL (witness: single-1 block)"


class TestBatch:
    BATCH = "# corpus\n1+u1+u2\n\n3-2*u1\n1+*u1\n0\n2*u1\n"

    def test_order_and_errors(self, capsys, tmp_path):
        path = tmp_path / "in.txt"
        path.write_text(self.BATCH)
        code, out, _ = run(["batch", str(path), "--entropy-grid", "64", "--tol", "1e-6"], capsys)
        recs = [json.loads(line) for line in out.splitlines()]
        assert code == 0
        assert [r["line"] for r in recs] == [2, 4, 5, 6, 7]
        assert recs[0]["report"]["verdict"]["theorem"] == "Theorem3"
        assert recs[2]["error"]["kind"] == "parse" and recs[2]["error"]["position"] == 2
        assert recs[3]["error"]["kind"] == "input"
        assert recs[4]["report"]["verdict"]["theorem"] == "Theorem2"

    def test_parallel_matches_serial(self, capsys, tmp_path):
        path = tmp_path / "in.txt"
        path.write_text(self.BATCH)
        args = ["batch", str(path), "--entropy-grid", "64", "--tol", "1e-6"]
        _, serial, _ = run(args, capsys)
        _, parallel, _ = run(args + ["--jobs", "3"], capsys)
        assert serial == parallel

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(["batch", str(tmp_path / "nope.txt")], capsys)
        assert code == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "surjunct", "analyze", "u1", "--json"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"]["status"] == "TriviallySurjunctive"
