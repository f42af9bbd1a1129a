import csv
import io
import json
import math

import pytest

from chgdet.asymptotics import log_asym_det
from chgdet.cli import main
from chgdet.kernel import KernelParams


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


BASE = ["--alpha", "0.5", "--beta-im", "0.3", "--gamma", "0.5"]


def test_det_quadrature(capsys):
    code, out, _ = run(capsys, "det", *BASE, "--s", "2")
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1 and d["route"] == "quadrature"
    assert d["meta"]["n_used"] >= 64 and d["meta"]["est_err"] <= 1e-10


def test_det_asymptotic_wiring(capsys):
    _, out, _ = run(capsys, "det", *BASE, "--s", "20", "--route", "asymptotic")
    d = json.loads(out)
    br = log_asym_det(KernelParams(0.5, 0.3, 0.5), 20.0)
    assert d["value"] == br.total
    parts = ("term_linear", "term_barnes", "term_log", "term_exp")
    assert math.isclose(sum(d["meta"][k] for k in parts), d["value"], abs_tol=1e-13)


def test_det_csv(capsys):
    _, out, _ = run(capsys, "det", *BASE, "--s", "2", "--nodes", "64", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["route"] == "quadrature" and rows[0]["meta_n_used"] == "64"


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["det", "--alpha", "0", "--gamma", "1.5", "--s", "1"], "--gamma"),
        (["det", "--alpha", "-0.7", "--gamma", "0.5", "--s", "1"], "--alpha"),
        (["det", "--alpha", "0", "--gamma", "0.5", "--s", "-1"], "--s"),
        (["det", "--alpha", "0", "--gamma", "0.5", "--s", "1", "--tol", "1e-20"], "--tol"),
        (["det", "--alpha", "0", "--gamma", "0.5", "--s", "nan"], "--s"),
    ],
)
def test_usage_errors(capsys, argv, flag):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert flag in capsys.readouterr().err


def test_numerical_failure(capsys):
    code, out, err = run(capsys, "det", *BASE, "--s", "60", "--route", "painleve")
    assert code == 3 and out == "" and "chgdet:" in err


def test_compare(capsys):
    _, out, _ = run(capsys, "compare", *BASE, "--s-list", "5,10", "--routes", "quadrature,asymptotic")
    d = json.loads(out)
    assert len(d["rows"]) == 4
    asym = [r for r in d["rows"] if r["route"] == "asymptotic"]
    assert all(r["gap_times_s"] < 1.0 for r in asym)
    assert all(r["gap"] == 0.0 for r in d["rows"] if r["route"] == "quadrature")


def test_stats(capsys):
    _, out, _ = run(capsys, "stats", "--alpha", "0", "--s", "1")
    d = json.loads(out)
    assert d["sigma2"] == 0.0  # ln s vanishes at s = 1
    assert d["e_n"] == pytest.approx(2 / math.pi, abs=1e-8)
    assert json.loads(json.dumps(d)) == d


def test_deterministic(capsys):
    argv = ["compare", *BASE, "--s-list", "3,6", "--format", "csv"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b and a.splitlines()[0] == "s,route,value,reference_route,gap,gap_times_s"


def test_painleve_csv(capsys):
    _, out, _ = run(capsys, "painleve", *BASE, "--s", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "t" and len(rows) > 10
    ts = [float(r[0]) for r in rows[1:]]
    assert ts == sorted(ts) and ts[-1] == pytest.approx(4.0)


def test_toeplitz_table(capsys):
    _, out, _ = run(capsys, "toeplitz", "--alpha", "0", "--gamma", "0.5", "--s", "1", "--nodes", "64,128")
    rows = json.loads(out)["rows"]
    assert [r["n"] for r in rows] == [64, 128]
    assert rows[1]["gap"] < rows[0]["gap"] < 1e-2
