import csv
import io
import json
import subprocess
import sys

import pytest

from metaplectic_modp import padic_field
from metaplectic_modp.cli import UsageError, main, parse_element, parse_matrix, parse_weight


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    report = json.loads(out)
    assert report["schema"] == 1
    assert set(report) == {"schema", "config", "command", "result"}
    return report


@pytest.mark.parametrize("text,val,digits", [
    ("5", 0, [2, 2, 1]),     # 5 = -1 - 3 + 9 in Teichmuller digits
    ("-1", 0, [2]),
    ("[2]", 0, [2]),
    ("p", 1, [1]),
    ("p^-2", -2, [1]),
    ("[2]*p^3", 3, [2]),
    ("3*p", 2, [1]),
    ("0", None, []),
])
def test_parse_element(F3, text, val, digits):
    assert parse_element(F3, text).to_json() == {"val": val, "digits": digits}


@pytest.mark.parametrize("text", ["", "x", "p^", "[9]", "[1]*q", "1.5"])
def test_parse_element_rejects(F3, text):
    with pytest.raises((UsageError, ValueError)):
        parse_element(F3, text)


def test_parse_matrix_and_weight(F3, F9):
    assert parse_matrix(F3, "1,p,0,1").c.is_zero()
    with pytest.raises((UsageError, ValueError)):
        parse_matrix(F3, "2,0,0,1")
    with pytest.raises((UsageError, ValueError)):
        parse_matrix(F3, "1,0,0")
    assert parse_weight(F3, "2") == (2,)
    assert parse_weight(F9, "1,2") == (1, 2)
    with pytest.raises((UsageError, ValueError)):
        parse_weight(F3, "3")


def test_hilbert(capsys):
    report = run_json(capsys, "symbols", "hilbert", "--a", "3", "--b", "-1")
    assert report["command"] == "symbols hilbert"
    assert report["result"]["hilbert"] == -1
    assert report["config"] == {"p": 3, "f": 1, "precision": 24, "depth": 3, "seed": 0, "format": "json"}
    report = run_json(capsys, "symbols", "hilbert", "--a", "p", "--b", "p", "--p", "5")
    assert report["result"]["hilbert"] == 1
    assert report["config"]["p"] == 5


def test_options_after_subcommand_or_before(capsys):
    a = run(capsys, "--p", "5", "symbols", "table")
    b = run(capsys, "symbols", "table", "--p", "5")
    assert a == b and a[0] == 0


def test_meta_phi(capsys):
    rows = run_json(capsys, "meta", "phi", "--n", "1")["result"]["phi"]
    assert rows == [{"n": 1, "phi": -1}]


def test_cosets_count(capsys):
    res = run_json(capsys, "cosets", "count", "--n", "2", "--m", "0", "--zeta", "-1", "--method", "both")["result"]
    assert res["closed"] == res["brute"] == 6 and res["agree"]


def test_csv_format(capsys):
    code, out, _ = run(capsys, "--format", "csv", "cosets", "count", "--n", "1", "--m", "0")
    assert code == 0
    first, rest = out.split("\n", 1)
    assert first.startswith("# config: ")
    assert json.loads(first[len("# config: "):])["format"] == "csv"
    rows = list(csv.DictReader(io.StringIO(rest)))
    assert rows == [{"closed": "1", "m": "0", "n": "1", "side": "upper", "zeta": "1"}]


def test_chars(capsys):
    res = run_json(capsys, "chars", "weil", "--a", "p")["result"]
    assert res["i_exponent"] == 1
    res = run_json(capsys, "chars", "params", "--m", "0", "--mu-r", "0", "--mu-pi", "g")["result"]
    k = sorted(tuple(P["r"]) for P in res["parameters"]["K"])
    kp = sorted(tuple(P["r"]) for P in res["parameters"]["Kprime"])
    assert (k, kp) == ([(0,), (2,)], [(1,)])
    assert res["case"] == 1 and res["lambda"] == 8


def test_hecke_commands(capsys):
    res = run_json(capsys, "hecke", "satake", "--n", "1", "--r", "0")["result"]
    assert json.dumps(res)  # serialisable
    res = run_json(capsys, "hecke", "cokernel", "--r", "0", "--N", "1")["result"]
    assert res["r"] == [0]


@pytest.mark.parametrize("argv", [
    ["symbols", "hilbert", "--a", "0", "--b", "1"],
    ["symbols", "hilbert", "--a", "zz", "--b", "1"],
    ["--p", "4", "symbols", "table"],
    ["--depth", "0", "symbols", "table"],
    ["hecke", "cokernel", "--r", "0", "--lam", "99"],
    ["weights", "dict", "--r", "7"],
])
def test_bad_values_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


@pytest.mark.parametrize("argv", [["nope"], ["symbols", "hilbert", "--a", "1"], ["--format", "xml", "symbols", "table"]])
def test_bad_flags_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_verify_all_subset(capsys):
    code, out, err = run(capsys, "verify-all", "--suite", "satake", "--suite", "splitting")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["passed"] and res["failed"] == []
    assert [s["name"] for s in res["suites"]] == ["satake", "splitting"]
    assert "[PASS] satake" in err


def test_subprocess_output_is_byte_identical():
    cmd = [sys.executable, "-m", "metaplectic_modp", "verify-all", "--suite", "characters", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout
