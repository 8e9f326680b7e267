from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from lpf.characters import character_group, conductor_and_primitive
from lpf.cli import load_schema, main, parse_int
from lpf.mgroup import least_primary_factor, primary_decomposition


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    return doc


def test_factor(capsys):
    doc = run_json(capsys, "factor", "13")
    (row,) = doc["results"]
    assert row["S"] == 3 == least_primary_factor(13).value
    assert sorted(row["decomposition"]) == sorted(primary_decomposition(13).values) == [3, 4]
    assert doc["conventions"] == ["n=1,2 in A_q: true"]
    assert doc["parameters"] == {"n": 13}


def test_factor_trivial_and_small(capsys):
    code, out, _ = run(capsys, "factor", "2")
    assert code == 0 and "S undefined" in out
    (row,) = run_json(capsys, "factor", "8")["results"]
    assert row["S"] == 2 and row["decomposition"] == [2, 2]
    (row,) = run_json(capsys, "factor", "1e3")["results"]
    assert row["n"] == 1000 and row["factorization"] == "2^3*5^3"


@pytest.mark.parametrize("bad", ["abc", "1.5", "nan"])
def test_factor_parse_errors(bad):
    with pytest.raises(SystemExit) as exc:
        main(["factor", bad])
    assert exc.value.code == 2


def test_factor_rejects_zero(capsys):
    assert run(capsys, "factor", "0")[0] == 2


def test_count(capsys):
    (row,) = run_json(capsys, "count", "--q", "3", "--x", "100", "--mode", "oracle")["results"]
    assert row["count_A_prime"] == 15
    (row,) = run_json(capsys, "count", "--q", "3", "--x", "30")["results"]
    assert row["count_E"] == 2
    assert row["ratio_E"] == pytest.approx(row["count_E"] / row["main_term_E"])
    (row,) = run_json(capsys, "count", "--q", "3", "--x", "0")["results"]
    assert (row["count_A"], row["count_A_prime"], row["count_E"]) == (0, 0, 0)
    (row,) = run_json(capsys, "count", "--q", "2", "--x", "30", "--mode", "predicate")["results"]
    assert row["count_E"] == 21


def test_count_exit_codes(capsys):
    assert run(capsys, "count", "--q", "3", "--x", "2e9")[0] == 3
    assert run(capsys, "count", "--q", "13", "--x", "100", "--mode", "oracle")[0] == 4
    assert run(capsys, "count", "--q", "6", "--x", "100")[0] == 2


def test_constant(capsys):
    (row,) = run_json(capsys, "constant", "--q", "4", "--prime-bound", "1e7")["results"]
    assert abs(row["C_mid"] - 0.4200344) < 2e-7
    assert row["C_lo"] <= row["C_mid"] <= row["C_hi"]
    (row,) = run_json(capsys, "constant", "--q", "3")["results"]
    assert abs(row["C_mid"] - 0.490694) < 2e-6


def test_constant_errors(capsys):
    code, _, err = run(capsys, "constant", "--q", "6")
    assert code == 2 and "not a prime power" in err
    assert run(capsys, "constant", "--q", "2")[0] == 4
    assert run(capsys, "constant", "--q", "13")[0] == 4
    assert run(capsys, "constant", "--q", "3", "--prime-bound", "1e10")[0] == 3


def test_compare(capsys):
    doc = run_json(capsys, "compare", "--qmax", "5", "--x-list", "1e5,1e4")
    rows = doc["results"]
    assert [(r["q"], r["x"]) for r in rows] == [(q, x) for q in (2, 3, 4, 5) for x in (10**4, 10**5)]
    two = [r for r in rows if r["q"] == 2]
    assert all(not r["q_exceeds_log_bound"] for r in two)
    assert all(r["q_exceeds_log_bound"] for r in rows if r["q"] >= 3)
    # the q = 2 row counts by complement: x - #A_3(x)
    (c3,) = run_json(capsys, "count", "--q", "3", "--x", "1e4")["results"]
    assert two[0]["count_E"] == 10**4 - c3["count_A"]


def test_compare_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compare", "--qmax", "5", "--x-list", ""])
    assert exc.value.code == 2


def test_chars(capsys):
    assert len(run_json(capsys, "chars", "--modulus", "4")["results"]) == 2
    rows = run_json(capsys, "chars", "--modulus", "36")["results"]
    assert len(rows) == 12
    assert {r["conductor"] for r in rows} == {1, 3, 4, 9, 12, 36}
    G = character_group(36)
    for r in rows:
        chi = G.character(r["exponents"])
        assert r["conductor"] == conductor_and_primitive(chi)[0]
    assert run(capsys, "chars", "--modulus", "1")[0] == 2


def test_csv_and_text(capsys):
    code, out, _ = run(capsys, "compare", "--qmax", "3", "--x-list", "1e3,1e4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert list(rows[0]) == ["q", "x", "count_E", "main_term_E", "ratio_E", "q_exceeds_log_bound"]
    code, out, _ = run(capsys, "factor", "13", "--format", "text")
    assert code == 0 and out.splitlines()[0].startswith("# factor")


def test_output_is_deterministic(capsys):
    argv = ["chars", "--modulus", "72", "--format", "json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_parse_int():
    assert parse_int("1e7") == 10**7
    assert parse_int("2.5e1") == 25
    assert parse_int("123456789012345678901") == 123456789012345678901


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "lpf.cli", "factor", "17", "--format", "json"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert json.loads(out)["results"][0]["S"] == 16
