import io
import json
import subprocess
import sys

import pytest

from macgt.cli import RunConfig, parse_config, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_poly():
    code, out, _ = call("eval", "poly", "--lambda", "2,0", "--N", "2", "--q", "1/2", "--theta", "1")
    assert code == 0
    terms = json.loads(out)
    assert len(terms) == 3
    assert {t["coeff"] for t in terms} == {"1"}


def test_eval_character_and_link():
    assert call("eval", "character", "--lambda", "0,0,0", "--N", "3", "--m", "1", "--x", "2",
                "--q", "1/2", "--theta", "2")[:2] == (0, '"1"\n')
    assert call("eval", "link", "--lambda", "1,0", "--mu", "1", "--q", "1/2", "--theta", "1")[:2] == (0, '"1/3"\n')


def test_eval_other_targets():
    code, out, _ = call("eval", "pushforward", "--lambda=1,0,-1", "--m", "1", "--theta", "2")
    assert code == 0
    meas = json.loads(out)
    assert sum(__import__("fractions").Fraction(d["mass"]) for d in meas) == 1
    code, out, _ = call("eval", "phi", "--nu", "prefix=0,0,1,2;tail=const", "--x", "1/2", "--theta", "2")
    assert code == 0 and set(json.loads(out)) == {"value", "error_bound"}
    code, out, _ = call("eval", "generating", "--lambda", "2,1,0", "--x", "1", "--x", "1", "--theta", "2")
    assert (code, out) == (0, '"1"\n')
    code, out, _ = call("eval", "residue", "--lambda", "0,0", "--x", "3", "--theta", "2")
    assert (code, out) == (0, '"1"\n')


def test_domain_and_pole_errors():
    code, out, err = call("eval", "residue", "--lambda", "1,0", "--x", "1/2", "--q", "1/2")
    assert code == 2 and out == ""
    assert json.loads(err) == {"error": {"kind": "pole", "message": "pole: x = q^1"}}
    code, _, err = call("eval", "character", "--lambda", "1,0", "--x", "2", "--q", "3/2")
    assert code == 2 and json.loads(err)["error"]["kind"] == "domain"
    code, _, err = call("eval", "poly", "--lambda", "1,0", "--N", "3")
    assert code == 2


def test_parse_errors():
    assert call("eval", "character", "--lambda", "1,0", "--x", "abc")[0] == 1
    assert call("eval", "nothing")[0] == 1
    assert call("eval", "poly")[0] == 1
    assert call("verify", "bogus")[0] == 1
    assert call("eval", "poly", "--lambda", "0,1")[0] == 1
    assert call("eval", "poly", "--lambda", "1,0", "--output", "csv")[0] == 1
    assert call()[0] == 1


def test_round_trip():
    cfgs = [
        parse_config(["eval", "character", "--lambda=-1,-2", "--x", "2/4", "--x", "-3", "--q", "2/6"]),
        parse_config(["converge", "--nu", "0,0,1,2", "--N", "10,15", "--x", "1/2", "--output", "csv"]),
        parse_config(["verify", "--suite", "links", "--max-N", "3", "--seed", "-5"]),
    ]
    for cfg in cfgs:
        assert parse_config(cfg.to_argv()) == cfg
        assert parse_config(cfg.to_argv()).to_argv() == cfg.to_argv()
    assert cfgs[0].q == "1/3" and cfgs[0].x == ("1/2", "-3")
    assert cfgs[2].target == "links"
    assert parse_config(["verify"]).target == "all"


def test_verify_links_and_determinism(monkeypatch):
    code, out, _ = call("verify", "links", "--max-N", "3")
    rep = json.loads(out)
    assert code == 0 and rep["failed"] == 0 and rep["passed"] == rep["cases"]
    assert set(rep) >= {"suite", "cases", "passed", "failed", "max_residual", "seed"}
    monkeypatch.setenv("MACB_THREADS", "4")
    assert call("verify", "links", "--max-N", "3")[1] == out


def test_verify_example_seeded():
    code, out, _ = call("verify", "example44", "--points", "5", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["failed"] == 0 and rep["seed"] == 7
    assert call("verify", "example44", "--points", "5", "--seed", "7")[1] == out


def test_converge_outputs():
    code, out, _ = call("converge", "--nu", "0,0,1,2", "--x", "1/2", "--theta", "2", "--N", "10,25")
    table = json.loads(out)
    assert code == 0 and [r["N"] for r in table["rows"]] == [10, 25]
    assert float(table["rows"][-1]["residual"]) < 1e-8
    assert table["nonincreasing"] is True
    code, out, _ = call("converge", "--nu", "0", "--x", "1/3", "--N", "3,6", "--output", "csv")
    lines = out.strip().split("\n")
    assert lines[0] == "N,exact,exact_decimal,phi,phi_error_bound,residual"
    assert [ln.split(",")[1] for ln in lines[1:]] == ["1", "1"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "macgt", "eval", "link", "--lambda", "1,0", "--mu", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == '"2/3"\n'
    proc = subprocess.run([sys.executable, "-m", "macgt", "eval", "link", "--lambda", "1,0"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
