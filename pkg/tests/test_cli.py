import json

import numpy as np
import pytest

from sepint import artifacts
from sepint.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from sepint.verify import BASELINES


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("BODY", "K", "GRID", "SEED", "RESOLUTION", "TOL", "OUT", "SUITE", "THREADS", "T"):
        monkeypatch.delenv("SEPINT_" + key, raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "t,V"
    return [tuple(map(float, l.split(","))) for l in lines[1:]]


def test_volume_ball(capsys):
    code, out, _ = run(capsys, "volume", "--body", "ball3", "--t", "0.5,0")
    assert code == EXIT_OK
    rows = csv_rows(out)
    assert rows[0][1] == pytest.approx(2.879793, abs=1e-6)
    assert rows[1] == (0.0, 0.0)
    assert '# config: {"body": "ball3"' in out


def test_volume_inline_and_file_body(capsys, tmp_path):
    code, out, _ = run(capsys, "volume", "--body", "model: ball | d: 3 | id: inl", "--t", "0.5")
    assert code == EXIT_OK and csv_rows(out)[0][1] == pytest.approx(2.879793, abs=1e-6)
    f = tmp_path / "b.body"
    f.write_text("model: ball\nd: 3\n")
    code, out2, _ = run(capsys, "volume", "--body", str(f), "--t", "0.5")
    assert code == EXIT_OK and csv_rows(out2) == csv_rows(out)


def test_volume_malformed_fixture(capsys, tmp_path):
    f = tmp_path / "bad.body"
    f.write_text("model: ball\nthis is not a record\n")
    code, _, err = run(capsys, "volume", "--body", str(f))
    assert code == EXIT_CONFIG and "config error" in err


def test_config_errors(capsys):
    assert run(capsys, "volume")[0] == EXIT_CONFIG
    assert run(capsys, "volume", "--body", "ball3", "--k", "3")[0] == EXIT_CONFIG
    assert run(capsys, "volume", "--body", "ball3", "--t", "a,b")[0] == EXIT_CONFIG
    assert run(capsys, "rank", "--body", "ball3", "--grid", "10by10")[0] == EXIT_CONFIG
    assert run(capsys, "rank", "--body", "ball3", "--tol", "2")[0] == EXIT_CONFIG
    assert run(capsys, "verify", "--suite", "nope")[0] == EXIT_CONFIG
    assert run(capsys, "frobnicate")[0] == EXIT_CONFIG


def test_runtime_error(capsys):
    # an indefinite form parses but has no bounded unit ball
    code, _, err = run(capsys, "volume", "--body", "model: polyroot | d: 2 | h: x0^4 - x1^4", "--t", "0.1")
    assert code == EXIT_RUNTIME and "runtime error" in err


def test_rank_ball(capsys):
    code, out, _ = run(capsys, "rank", "--body", "ball3", "--grid", "10x10")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["report"]["rank"] == 1
    assert rec["config"]["grid"] == "10x10" and "timestamp" in rec


def test_rank_synthetic_csv(capsys, tmp_path):
    rng = np.random.default_rng(0)
    M = rng.standard_normal((9, 3)) @ rng.standard_normal((3, 7))
    f = tmp_path / "m.csv"
    f.write_text(artifacts.matrix_csv(M, {"note": "synthetic"}))
    code, out, _ = run(capsys, "rank", "--matrix", str(f))
    rec = json.loads(out)
    assert code == EXIT_OK and rec["report"]["rank"] == 3 and rec["report"]["grid"] == [9, 7]


def test_rank_l4_baseline(capsys):
    code, out, _ = run(capsys, "rank", "--body", "l4ball3", "--sizes", "8,16,24")
    assert code == EXIT_OK
    assert json.loads(out)["curve"] == [list(p) for p in BASELINES["l4ball3_rank_curve"]]


def test_rank_save_matrix_round_trip(capsys, tmp_path):
    path = tmp_path / "ell.csv"
    code, out, _ = run(capsys, "rank", "--body", "ellipsoid125", "--grid", "6x5", "--save-matrix", str(path))
    assert code == EXIT_OK
    side = json.loads((tmp_path / "ell.csv.json").read_text())
    assert side["body"] == "ellipsoid125" and side["grid"] == [6, 5] and len(side["frames"]) == 6
    M = artifacts.load_sep_matrix(path)
    direct = json.loads(out)["report"]["singular_values"]
    np.testing.assert_array_equal(np.linalg.svd(M.values, compute_uv=False), direct)


def test_env_override_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("SEPINT_GRID", "5x4")
    monkeypatch.setenv("SEPINT_BODY", "ball3")
    rec = json.loads(run(capsys, "rank")[1])
    assert rec["report"]["grid"] == [5, 4]
    rec = json.loads(run(capsys, "rank", "--grid", "3x3")[1])
    assert rec["report"]["grid"] == [3, 3]
    monkeypatch.setenv("SEPINT_SEED", "x")
    assert run(capsys, "rank")[0] == EXIT_CONFIG


def test_out_file(capsys, tmp_path):
    out = tmp_path / "v.csv"
    code, stdout, _ = run(capsys, "volume", "--body", "ball2", "--out", str(out))
    assert code == EXIT_OK and stdout == ""
    assert len(csv_rows(out.read_text())) == 9


def test_volume_deterministic(capsys):
    a = run(capsys, "volume", "--body", "l4ball3", "--seed", "4")[1]
    b = run(capsys, "volume", "--body", "l4ball3", "--seed", "4", "--threads", "3")[1]
    # the echoed config differs only in the thread count
    assert a.replace('"threads": 1', '"threads": 3') == b


def test_verify_symbolic(capsys):
    code, out, err = run(capsys, "verify", "--suite", "symbolic")
    assert code == EXIT_OK
    assert "eq15_dual_quadric_divisible: pass" in err
    rec = json.loads(out)
    assert rec["passed"] and all(c["status"] == "pass" for c in rec["suites"]["symbolic"])


@pytest.mark.parametrize("suite", ["valuation", "algext", "geometry"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite)
    assert code == EXIT_OK and json.loads(out)["passed"]


def test_verify_geometry_reports_oracle(capsys):
    rec = json.loads(run(capsys, "verify", "--suite", "geometry")[1])
    check = next(c for c in rec["suites"]["geometry"] if c["name"] == "ball_oracle_agreement")
    assert check["status"] == "pass" and check["measured"]["max_rel_error"] <= 1e-6


def test_verify_separability_reports_failed_strict_growth(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "separability")
    rec = json.loads(out)
    status = {c["name"]: c["status"] for c in rec["suites"]["separability"]}
    assert status["l4_rank_matches_baseline"] == "pass"
    assert status["l4_rank_strictly_increasing"] == "fail"
    assert code == EXIT_CHECK


def test_verify_deterministic(capsys):
    a = json.loads(run(capsys, "verify", "--suite", "algext", "--seed", "3")[1])
    b = json.loads(run(capsys, "verify", "--suite", "algext", "--seed", "3")[1])
    assert artifacts.strip_timestamp(a) == artifacts.strip_timestamp(b)
