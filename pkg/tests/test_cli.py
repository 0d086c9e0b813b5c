import csv
import io
import json
import subprocess
import sys

import pytest

from osptlab import cli, qseries


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCoeffs:
    def test_F1(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--series", "F", "--k", "1", "--n-max", "6", "--format", "csv")
        assert code == 0
        assert [r["coefficient"] for r in csv_rows(out)][1:] == ["1", "1", "1", "2", "1", "3"]

    def test_pbar_json(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--series", "pbar", "--n-max", "4")
        assert code == 0
        assert json.loads(out)["coefficients"] == ["1", "2", "4", "8", "14"]

    def test_n_max_zero(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--series", "ospt", "--n-max", "0", "--format", "csv")
        assert code == 0
        assert csv_rows(out) == [{"n": "0", "coefficient": "0"}]

    def test_several_parameters(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--series", "H", "--m", "2,3", "--n-max", "3", "--format", "csv")
        rows = csv_rows(out)
        assert code == 0 and len(rows) == 8
        assert rows[2] == {"parameter": "2", "n": "2", "coefficient": "0"}

    def test_big_integers_are_strings(self, capsys, tmp_path):
        path = tmp_path / "pbar.json"
        code, out, _ = run(capsys, "coeffs", "--series", "pbar", "--n-max", "500", "--out", str(path))
        assert code == 0 and out == ""
        doc = json.loads(path.read_text())
        assert int(doc["coefficients"][500]) == qseries.overpartition_gf(500)[500]

    @pytest.mark.parametrize("argv", [
        ["coeffs", "--series", "nope", "--n-max", "4"],
        ["coeffs", "--series", "F", "--n-max", "4"],
        ["coeffs", "--series", "H", "--m", "1", "--n-max", "4"],
        ["coeffs", "--series", "pbar", "--n-max", "10", "--trunc", "5"],
        ["coeffs", "--series", "pbar", "--n-max", "4", "--precision-bits", "32"],
        ["coeffs", "--series", "pbar"],
        ["frobnicate"],
    ])
    def test_usage_errors(self, capsys, argv):
        code, _, _ = run(capsys, *argv)
        assert code == 2

    def test_precision_env(self, capsys, monkeypatch):
        monkeypatch.setenv("OSPTLAB_PRECISION_BITS", "16")
        assert run(capsys, "coeffs", "--series", "pbar", "--n-max", "2")[0] == 2
        monkeypatch.setenv("OSPTLAB_PRECISION_BITS", "lots")
        assert run(capsys, "coeffs", "--series", "pbar", "--n-max", "2")[0] == 2
        monkeypatch.setenv("OSPTLAB_PRECISION_BITS", "128")
        assert run(capsys, "coeffs", "--series", "pbar", "--n-max", "2")[0] == 0


class TestVerify:
    def test_trivial(self, capsys):
        code, out, _ = run(capsys, "verify", "--n-max", "1")
        assert code == 0
        assert json.loads(out)["status"] == "ok"

    def test_zero_of_H2_is_reported(self, capsys):
        code, out, _ = run(capsys, "verify", "--n-max", "80")
        doc = json.loads(out)
        assert code == 0
        h2 = doc["H_nonnegative"][0]
        assert h2["m"] == 2 and 2 in h2["zeros"] and h2["violations"] == []
        assert doc["F_nonnegative"]["zeros"] == []
        assert doc["F_nonnegative"]["checked_k"] == 40

    def test_thread_count_does_not_change_output(self, capsys):
        outs = [run(capsys, "verify", "--n-max", "120", "--threads", str(t))[1] for t in (1, 3, 8)]
        assert outs[0] == outs[1] == outs[2]

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "--n-max", "30", "--m", "2,3", "--format", "csv")
        rows = csv_rows(out)
        assert code == 0
        assert [r["check"] for r in rows] == ["F", "H", "H", "ospt"]
        assert rows[1]["zeros"] == "2 4"

    def test_violation_exit_code(self, capsys, monkeypatch):
        real = qseries.ospt_bar_series
        monkeypatch.setattr(qseries, "ospt_bar_series", lambda T: real(T) - real(T))
        code, out, err = run(capsys, "verify", "--n-max", "10")
        assert code == 1
        doc = json.loads(out)
        assert doc["status"] == "violation"
        assert doc["ospt_vs_pbar"]["violations"][0]["n"] == 1
        assert "violation" in err


class TestOracle:
    def test_rows(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n-max", "6", "--format", "csv")
        assert code == 0
        rows = csv_rows(out)
        c_rows = [r for r in rows if r["statistic"] in ("C", "Cbar")]
        assert c_rows and all(r["agree"] == "True" for r in c_rows)
        lit = [r for r in rows if r["statistic"] == "AB" and r["interp"] == "literal"
               and r["parameter"] == "1" and r["n"] == "1"][0]
        assert (lit["enumerated"], lit["series"], lit["agree"]) == ("2", "1", "False")
        zero = [r for r in rows if r["n"] == "0"]
        assert all(r["enumerated"] == "0" and r["agree"] == "True" for r in zero)

    def test_unknown_interp(self, capsys):
        assert run(capsys, "oracle", "--n-max", "2", "--interp", "bogus")[0] == 2


class TestAsym:
    def test_rows_decrease(self, capsys):
        code, out, _ = run(capsys, "asym", "--kind", "AB", "--k", "1", "--N", "100,400,1600", "--format", "csv")
        rows = csv_rows(out)
        assert code == 0 and len(rows) == 3
        errs = [float(r["relative_error"]) for r in rows]
        assert errs[0] > errs[1] > errs[2]

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "asym", "--kind", "C", "--m", "2", "--N", "", "--format", "csv")
        assert code == 0
        assert out == "kind,parameter,N,exact,main_term,relative_error\n"

    def test_truncation_below_N(self, capsys):
        assert run(capsys, "asym", "--kind", "ospt", "--N", "50", "--trunc", "10")[0] == 2

    def test_jsonl(self, capsys):
        code, out, _ = run(capsys, "asym", "--kind", "ospt", "--N", "100,200")
        lines = [json.loads(x) for x in out.splitlines()]
        assert code == 0 and [r["N"] for r in lines] == [100, 200]


class TestCircle:
    def test_match(self, capsys):
        code, out, _ = run(capsys, "circle", "--kind", "F", "--k", "1", "--N", "20")
        assert code == 0
        assert json.loads(out)["match"] is True

    def test_H_csv(self, capsys):
        code, out, _ = run(capsys, "circle", "--kind", "H", "--m", "2,3", "--N", "10,12", "--format", "csv")
        rows = csv_rows(out)
        assert code == 0 and len(rows) == 4
        assert all(r["match"] == "True" for r in rows)

    def test_too_few_points(self, capsys):
        assert run(capsys, "circle", "--kind", "F", "--N", "20", "--n-points", "50")[0] == 2

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "circle", "--kind", "F", "--N", "")
        assert code == 0 and out == ""


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "osptlab", "coeffs", "--series", "p", "--n-max", "5", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "5,7"


def test_int_list_ranges():
    assert cli._int_list("2..4,7") == [2, 3, 4, 7]
    assert cli._int_list("") == []
