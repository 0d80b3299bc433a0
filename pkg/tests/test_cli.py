import csv
import io
import json
import math
import subprocess
import sys

import pytest

from mlpd.cli import main, parse_complex


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def value(row):
    return complex(float(row["value_re"]), float(row["value_im"]))


@pytest.mark.parametrize(
    "text, expected",
    [("1", 1), ("0+1i", 1j), ("-2.5-3e-2i", -2.5 - 0.03j), ("1e-3+1e+2i", 0.001 + 100j), ("-i", -1j), ("2j", 2j)],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["1 + 2i", "abc", "1+2", ""])
def test_parse_complex_rejects(text):
    with pytest.raises(Exception):
        parse_complex(text)


def test_eval_exp():
    code, out, _ = run("eval", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "1")
    (r,) = rows(out)
    assert code == 0 and value(r) == complex(2.718281828459045, 0)
    assert r["converged"] == "true" and r["method"] == "series"


def test_eval_leroy(oracle):
    code, out, _ = run("eval", "--family", "leroy", "--alpha", "1", "--beta", "1", "--gamma", "2", "--z", "1")
    assert code == 0
    assert abs(value(rows(out)[0]) - oracle["golden"]["leroy_cli"]["value"]) < 1e-14
    assert round(value(rows(out)[0]).real, 10) == 2.2795853023


def test_eval_domain_error():
    code, out, err = run("eval", "--family", "ml2", "--alpha", "-1", "--beta", "1", "--z", "1")
    assert code == 1 and out == "" and "alpha" in err


def test_usage_error_names_flag():
    code, _, err = run("eval", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "1+")
    assert code == 1 and "--z" in err
    code, _, err = run("eval", "--family", "ml2", "--alpha", "1", "--beta", "1")
    assert code == 1 and "--z" in err


def test_not_converged_exit():
    code, out, _ = run("eval", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "30", "--max-terms", "5")
    assert code == 2 and rows(out)[0]["converged"] == "false"


def test_deriv_euler_gamma():
    code, out, _ = run("deriv", "--family", "ml2", "--alpha", "1", "--beta", "1", "--target", "beta", "--z", "0")
    assert code == 0 and value(rows(out)[0]) == complex(0.5772156649015329, 0)


def test_deriv_wright_collapse():
    code, out, _ = run("deriv", "--family", "wright", "--alpha", "0", "--beta", "1", "--target", "beta", "--z", "1")
    assert code == 0
    assert abs(value(rows(out)[0]) - math.e * 0.5772156649015329) < 1e-14


def test_deriv_check_fd():
    code, out, _ = run("deriv", "--family", "ml3", "--alpha", "0.9", "--beta", "1.1", "--gamma", "2",
                       "--target", "gamma", "--z", "0.4", "--check-fd", "1e-5")
    a, fd = rows(out)
    assert code == 0 and fd["method"] == "finite-difference" and fd["agrees"] == "true"
    assert abs(value(a) - value(fd)) <= 1e-6 * abs(value(a))


def test_deriv_methods_agree():
    base = ("deriv", "--family", "ml2", "--alpha", "0.8", "--beta", "1.2", "--target", "alpha", "--z", "0.3+0.6i")
    vals = [value(rows(run(*base, "--method", m)[1])[0]) for m in ("series", "mb", "fd")]
    assert abs(vals[0] - vals[1]) < 1e-9 and abs(vals[0] - vals[2]) < 1e-8


def test_deriv_bad_target():
    code, _, err = run("deriv", "--family", "ml2", "--alpha", "1", "--beta", "1", "--target", "gamma", "--z", "1")
    assert code == 1 and "gamma" in err


def test_compare_pass():
    code, out, _ = run("compare", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "0+1i", "--methods", "series,mb")
    (r,) = rows(out)
    assert code == 0 and r["pass"] == "true"
    e = complex(math.cos(1), math.sin(1))
    for side in "ab":
        assert abs(complex(float(r[f"value_{side}_re"]), float(r[f"value_{side}_im"])) - e) < 1e-12


def test_compare_failure_exit_keeps_records():
    code, out, _ = run("compare", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "0+1i", "--z", "-2")
    r = rows(out)
    assert code == 3 and len(r) == 2
    assert r[0]["pass"] == "true" and r[1]["pass"] == "false" and r[1]["error"].startswith("BranchError")


def test_table_csv():
    code, out, _ = run("table", "--family", "ml2", "--alpha", "0.8", "--beta", "1", "--z-grid", "0:2:5,0:0:1",
                       "--format", "csv")
    r = rows(out)
    assert code == 0 and len(r) == 5 and len(out.splitlines()) == 6
    assert [float(x["z_re"]) for x in r] == [0, 0.5, 1, 1.5, 2]
    assert all(math.isfinite(float(x["value_re"])) for x in r)


def test_table_bad_grid():
    code, _, err = run("table", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z-grid", "0:2,0:0:1")
    assert code == 1 and "--z-grid" in err


def test_json_lines_round_trip():
    code, out, _ = run("eval", "--family", "ml3", "--alpha", "0.7", "--beta", "1.3", "--gamma", "0.4-0.2i",
                       "--z", "0.3+0.1i", "--z", "1.7-0.9i", "--format", "json-lines")
    _, csv_out, _ = run("eval", "--family", "ml3", "--alpha", "0.7", "--beta", "1.3", "--gamma", "0.4-0.2i",
                        "--z", "0.3+0.1i", "--z", "1.7-0.9i")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 2
    for rec, row in zip(recs, rows(csv_out)):
        assert complex(rec["value_re"], rec["value_im"]) == value(row)
        assert rec["abs_err_est"] == float(row["abs_err_est"])
        assert parse_complex(rec["gamma"]) == 0.4 - 0.2j


def test_audit_default_and_determinism():
    a = run("audit", "--suite", "default", "--seed", "42")
    b = run("audit", "--suite", "default", "--seed", "42")
    assert a[0] == 0 and a == b
    assert a[1].startswith("# audit bundle seed=42") and a[1].rstrip().endswith("# overall pass")


def test_audit_formats():
    code, out, _ = run("audit", "--suite", "digamma_bounds", "--format", "json-lines")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and recs and all(r["audit"] == "digamma_bounds" and r["pass"] for r in recs)
    code, out, _ = run("audit", "--suite", "digamma_bounds", "--format", "csv")
    assert code == 0 and len(rows(out)) == len(recs)


def test_audit_unknown_and_failure():
    assert run("audit", "--suite", "nope")[0] == 1
    assert run("audit", "--suite", "radius_threshold")[0] == 3


def test_config_file_and_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "mlpd.cfg"
    cfg.write_text("# defaults\nmax-terms = 5\nformat=json-lines\n")
    base = ("eval", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "30")
    code, out, _ = run(*base, "--config", str(cfg))
    assert code == 2 and json.loads(out)["converged"] is False
    code, out, _ = run(*base, "--config", str(cfg), "--max-terms", "1000")
    assert code == 0 and json.loads(out)["converged"] is True
    monkeypatch.setenv("MLPD_CONFIG", str(cfg))
    assert run(*base)[0] == 2


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run("eval", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "1", "--config", str(bad))[0] == 1
    assert run("eval", "--family", "ml2", "--alpha", "1", "--beta", "1", "--z", "1",
               "--config", str(tmp_path / "missing.cfg"))[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mlpd", "eval", "--family", "ml2", "--alpha", "2", "--beta", "1",
                           "--z", "1", "--format", "json-lines"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["value_re"] - math.cosh(1)) < 1e-15
