import csv
import io
import json
import subprocess
import sys

import pytest

from primemodels.cli import COLUMNS, fmt_value, main, parse_number


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    return list(csv.reader(io.StringIO("\n".join(lines[1:]))))


def test_pi_csv(capsys):
    code, out, _ = run(capsys, "pi", "--x", "100")
    assert code == 0
    rows = csv_rows(out)
    assert rows == [["x", "pi"], ["100", "25"]]
    cfg = json.loads(out.splitlines()[0][len("# config: "):])
    assert cfg["x"] == 100 and cfg["command"] == "pi"


def test_pi_class_and_notations(capsys):
    code, out, _ = run(capsys, "pi", "--x", "10**2", "--k", "4", "--l", "3")
    assert code == 0
    assert csv_rows(out) == [COLUMNS["pi-class"], ["100", "4", "3", "13"]]
    _, out, _ = run(capsys, "pi", "--x", "1e6")
    assert csv_rows(out)[1] == ["1000000", "78498"]


def test_li_output(capsys):
    _, out, _ = run(capsys, "li", "--x", "2")
    assert csv_rows(out)[1] == ["2", "0.0"]
    _, out, _ = run(capsys, "li", "--x", "1e6", "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][0]["li"] == pytest.approx(78626.504, abs=1e-3)
    assert doc["abs_error_bound"] < 1e-6


def test_moments_json_schema(capsys):
    code, out, _ = run(capsys, "moments", "--x", "1e5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["columns"] == COLUMNS["moments"]
    assert [r["model"] for r in doc["rows"]] == ["M1", "M1-crude", "M2"]
    assert all(r["pi"] == 9592 for r in doc["rows"])
    assert set(doc) >= {"version", "command", "config", "rows", "status"}


def test_moments_progression_and_model_flag(capsys):
    _, out, _ = run(capsys, "moments", "--x", "1e5", "--k", "4", "--l", "1", "--model", "M4")
    rows = csv_rows(out)
    assert rows[0] == COLUMNS["moments"]
    assert rows[1][:4] == ["100000", "M4", "4", "1"]


def test_band_contains(capsys):
    code, out, _ = run(capsys, "band", "--x", "1e6", "--c", "3", "--model", "M2")
    rows = csv_rows(out)
    row = dict(zip(rows[0], rows[1]))
    assert code == 0
    assert row["contains"] == "true"
    assert float(row["lo"]) == pytest.approx(77818.795, abs=1e-3)


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--x", "1e4", "--trials", "300", "--seed", "7", "--format", "json")
    doc = json.loads(out)
    assert [r["C"] for r in doc["rows"]] == [1.0, 2.0, 3.0]
    assert all(r["start_index"] == 3 for r in doc["rows"])
    assert code == (1 if doc["status"] == "FAIL" else 0)
    _, again, _ = run(capsys, "simulate", "--x", "1e4", "--trials", "300", "--seed", "7", "--format", "json")
    assert again == out


def test_simulate_threads_env(capsys, monkeypatch):
    args = ("simulate", "--x", "5000", "--trials", "200", "--seed", "3")
    _, single, _ = run(capsys, *args)
    monkeypatch.setenv("PRIMEMODELS_THREADS", "4")
    _, multi, _ = run(capsys, *args)
    assert single == multi
    monkeypatch.setenv("PRIMEMODELS_THREADS", "many")
    assert run(capsys, *args)[0] == 2


def test_legendre(capsys):
    code, out, _ = run(capsys, "legendre", "--n-max", "10")
    rows = csv_rows(out)
    assert code == 0
    assert len(rows) == 11
    assert rows[1] == ["1", "1", "4", "2", "PASS"]
    assert all(r[-1] == "PASS" for r in rows[1:])


def test_eh_sum(capsys):
    code, out, _ = run(capsys, "eh-sum", "--x", "1e4", "--a", "0.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["rows"][0]["sum"] == pytest.approx(653.935881, abs=1e-6)
    assert doc["rows"][0]["assertable"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["pi"],
        ["pi", "--x", "abc"],
        ["pi", "--x", "1.5"],
        ["pi", "--x", "10", "--k", "4", "--l", "2"],
        ["pi", "--x", "10", "--k", "4"],
        ["pi", "--x", str(2**63)],
        ["li", "--x", "1"],
        ["moments", "--x", "5"],
        ["moments", "--x", "1000", "--model", "M9"],
        ["band", "--x", "1000", "--c", "0"],
        ["simulate", "--x", "1000", "--trials", "10", "--seed", "1"],
        ["eh-sum", "--x", "1e4", "--a", "1.5"],
        ["report-all", "--x", "1000"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.strip()


def test_out_file(tmp_path, capsys):
    target = tmp_path / "pi.csv"
    code, out, _ = run(capsys, "pi", "--x", "100", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[-1] == "100,25"


def test_out_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "pi", "--x", "100", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 2
    assert "cannot write" in err


def test_fmt_value():
    assert fmt_value(3) == "3"
    assert fmt_value(2.0) == "2.0"
    assert fmt_value(0.1 + 0.2) == "0.3"
    assert fmt_value(1.5e20) == "1.5e+20"
    assert fmt_value(True) == "true"
    assert fmt_value(None) == ""


def test_parse_number():
    assert parse_number("10**6") == parse_number("1e6") == parse_number("1000000") == 10**6


@pytest.mark.slow
def test_report_all_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "primemodels", "report-all", "--x", "1e4", "--trials", "200", "--n-max", "50"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.stdout == b.stdout
    assert a.returncode == b.returncode == 1
    rows = csv_rows(a.stdout.decode())
    assert rows[0] == COLUMNS["report-all"]
    failed = {r[0] for r in rows[1:] if r[1] == "FAIL"}
    assert failed == {"em-C2<0.6783"}


def test_report_all_json_summary(capsys):
    code, out, _ = run(capsys, "report-all", "--x", "1e4", "--trials", "200", "--n-max", "50", "--format", "json", "--timings")
    doc = json.loads(out)
    assert code == 1
    assert "wall_time" in doc["columns"]
    assert doc["summary"]["FAIL"] == 1
    assert doc["summary"]["PASS"] + doc["summary"]["FAIL"] + doc["summary"]["REPORTED"] == len(doc["rows"])
