import csv
import io
import json
import subprocess
import sys

import pytest

from carlitzlab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bc_table_to_70(capsys):
    code, out, _ = run(capsys, "bc-table", "--p", "3", "--m", "1", "--max-n", "70")
    assert code == 0
    rows = {int(r["n"]): r for r in csv.DictReader(io.StringIO(out))}
    assert rows[16]["denominator_class"] == "P2"
    assert rows[70]["denominator_class"] == "unit"
    assert list(rows[16]) == list(cli.BC_FIELDS)


def test_bc_table_single_row(capsys):
    code, out, _ = run(capsys, "bc-table", "--p", "3", "--max-n", "0")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1 and rows[0]["numerator"] == "1"


def test_bc_table_q5_rows(capsys):
    code, out, _ = run(capsys, "bc-table", "--p", "5", "--max-n", "24")
    assert [int(r["n"]) for r in csv.DictReader(io.StringIO(out))] == [0, 4, 8, 12, 16, 20, 24]


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "interp-product", "--p", "3", "--s", "4", "--d", "1")
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run(capsys, "verify", "--identity", "main-theorem", "--p", "3", "--s", "2", "--z", "1/x",
                       "--N", "32")
    rep = json.loads(out)
    assert code == 0 and rep["certified_precision_exponent"] >= 16
    code, out, _ = run(capsys, "verify", "--identity", "explicit-L", "--p", "3", "--s", "3", "--k", "1")
    rep = json.loads(out)
    assert code == 0
    terms = rep["details"]["explicit_terms"]["terms"]
    assert terms == [{"poles": [None, None, None], "coefficient": "2"}]


def test_verify_all_identities_dispatch(capsys):
    cases = [
        ["interp", "--d", "2"], ["obstruction", "--d", "1"], ["ed-recursion", "--d", "2"],
        ["pellarin-formula", "--N", "24", "--M", "4"], ["carlitz-genfun", "--N", "24"],
        ["limits", "--which", "b-zero", "--N", "24", "--M", "2"], ["omega-eigen", "--N", "24", "--M", "3"],
        ["char-sum", "--v", "x", "--n", "2", "--N", "24"], ["omega-root-product", "--v", "x^2+1", "--N", "24"],
        ["bc-recur-1", "--n", "16"], ["bc-recur-2", "--n", "16"],
    ]
    for c in cases:
        code, out, err = run(capsys, "verify", "--identity", *c)
        assert code == 0, (c, err)


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "verify", "--identity", "ed-recursion", "--d", "1")
    assert "millis" not in json.loads(out)
    _, out, _ = run(capsys, "verify", "--identity", "ed-recursion", "--d", "1", "--timing")
    assert "millis" in json.loads(out)


def test_divisibility(capsys):
    code, out, _ = run(capsys, "divisibility", "--p", "3", "--n", "304", "--degree", "2")
    r = json.loads(out)
    assert code == 0 and (r["bound"], r["measured"]) == (14, 14)
    code, out, _ = run(capsys, "divisibility", "--p", "3", "--n", "646", "--degree", "2")
    r = json.loads(out)
    assert (r["bound"], r["measured"]) == (69, 74)
    code, out, _ = run(capsys, "divisibility", "--p", "3", "--n", "2", "--degree", "2")
    r = json.loads(out)
    assert code == 0 and r["bound"] is None and r["warnings"]


def test_divisibility_remainder_against_oracle(capsys):
    from oracles import bc_by_series_inversion
    from carlitzlab import enumerate_irreducibles, make_field, valuation
    F = make_field(3)
    bc = bc_by_series_inversion(F, 70)
    for n, rest in ((304, 16), (646, 70)):
        r = json.loads(run(capsys, "divisibility", "--n", str(n), "--degree", "2")[1])
        assert r["tuples"]["remainder"] == rest
        want = min(valuation(bc[rest].num, v) for v in enumerate_irreducibles(F, 2))
        assert r["remainder_measured"] == want


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--p", "3", "--degree", "2", "--to", "100")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows and all(r["pass"] == "True" for r in rows)
    code, out, _ = run(capsys, "scan", "--p", "3", "--degree", "1", "--to", "50")
    assert code == 0


def test_tuples(capsys):
    _, out, _ = run(capsys, "tuples", "--p", "3", "--n", "304")
    r = json.loads(out)
    assert r["norm1_maximal"]["beta"] == [1, 3, 3, 5] and r["norm2_maximal"]["beta"] == [2, 2, 3, 5]
    _, out, _ = run(capsys, "tuples", "--p", "3", "--n", "646")
    r = json.loads(out)
    assert r["norm2_maximal"]["beta"] == [4, 2, 5, 5] and r["n_minus_norm2"] == 70
    code, out, _ = run(capsys, "tuples", "--p", "3", "--n", "4")
    r = json.loads(out)
    assert code == 0 and r["guarantee_nonzero_entries"] is False and r["norm2_maximal"] is None


def test_usage_errors(capsys):
    assert run(capsys, "verify", "--identity", "nope")[0] == 2
    assert run(capsys, "bc-table", "--max-n", "-1")[0] == 2
    assert run(capsys, "bc-table", "--p", "4", "--max-n", "4")[0] == 2
    assert run(capsys, "divisibility", "--n", "3", "--degree", "2")[0] == 2
    assert run(capsys, "verify", "--identity", "explicit-L", "--s", "2")[0] == 2
    assert run(capsys, "verify", "--identity", "explicit-L", "--s", "2", "--k", "1")[0] == 2
    assert run(capsys)[0] == 2


def test_failure_exit_code(capsys, monkeypatch):
    from carlitzlab import bcnum

    monkeypatch.setattr(bcnum, "measure_valuation", lambda n, d, F: {"valuation": -1, "per_irreducible": {}})
    assert run(capsys, "scan", "--degree", "2", "--to", "30")[0] == 1


def test_internal_error_exit_code(capsys, monkeypatch):
    from carlitzlab import bcnum

    def boom(*a, **k):
        raise RuntimeError("kaput")

    monkeypatch.setattr(bcnum, "max_tuple_norm1", boom)
    code, _, err = run(capsys, "tuples", "--n", "304")
    assert code == 3 and "kaput" in err


def test_deterministic_files(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path, jobs in ((a, "1"), (b, "2")):
        assert cli.main(["bc-table", "--max-n", "40", "--output", str(path), "--jobs", jobs]) == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.json", tmp_path / "d.json"
    for path in (c, d):
        cli.main(["verify", "--identity", "main-theorem", "--s", "1", "--N", "24", "--M", "3", "-o", str(path)])
    assert c.read_bytes() == d.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "carlitzlab", "tuples", "--n", "304"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 304
